#include <doctest.h>

#include <cmath>
#include <random>

#include "dmu/quadrature.hpp"

using namespace dmu;

namespace {

QuadratureSpec default_spec() { return QuadratureSpec{}; }

}  // namespace

TEST_CASE("spec validation rejects bad parameters") {
  QuadratureSpec s;
  s.refinement_factor = 1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = QuadratureSpec{};
  s.angular_nodes = 0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s = QuadratureSpec{};
  s.rel_tol = 0.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("disc integral of 1 equals the disc area") {
  auto res = disc_integral([](const cplx&) { return 1.0; }, default_spec());
  CHECK(res.value == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(std::abs(res.value - kPi) <= res.error_estimate + 1e-10);
}

TEST_CASE("disc integral of |d/dz z|^2 over area/pi is 1") {
  auto res = disc_integral([](const cplx&) { return 1.0; }, default_spec());
  CHECK(res.value / kPi == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("boundary-concentrated radial integrand matches the radial closed form") {
  // (1 - |z|^2)^(-1/2) over the disc; the 1-D reduction
  // 2 pi int_0^1 r (1 - r^2)^(-1/2) dr = 2 pi via the antiderivative -(1-r^2)^(1/2)
  auto res = disc_integral(
      [](const cplx& z) { return 1.0 / std::sqrt(1.0 - std::norm(z)); }, default_spec());
  CHECK(res.value == doctest::Approx(kTwoPi).epsilon(1e-6));
  CHECK(res.converged);
}

TEST_CASE("circle integral of a constant is exact") {
  auto res = circle_integral([](double) { return 0.7; }, {}, default_spec());
  CHECK(res.value == doctest::Approx(0.7 * kTwoPi).epsilon(1e-14));
}

TEST_CASE("mean of |e^{it} - 1|^2 is 2") {
  auto res = circle_integral(
      [](double t) { return std::norm(std::polar(1.0, t) - 1.0) / kTwoPi; }, {},
      default_spec());
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("log|1 - e^{it}| integrates to zero across the singularity") {
  auto res = circle_integral(
      [](double t) { return std::log(std::abs(1.0 - std::polar(1.0, t))); }, {0.0},
      default_spec());
  CHECK(res.converged);
  CHECK(std::abs(res.value) <= 1e-6);
}

TEST_CASE("non-integrable circle singularity is flagged, not returned silently") {
  auto res = circle_integral(
      [](double t) {
        double d = std::abs(1.0 - std::polar(1.0, t));
        return 1.0 / (d * d);
      },
      {0.0}, default_spec());
  CHECK_FALSE(res.converged);
}

TEST_CASE("tail classification of the three reference families") {
  QuadratureSpec spec = default_spec();

  auto flat = tail_profile([](const cplx&) { return 1.0; }, spec);
  CHECK(flat.verdict == TailVerdict::kConvergent);
  CHECK(flat.ratio_mean == doctest::Approx(0.5).epsilon(0.05));

  auto critical = tail_profile(
      [](const cplx& z) { return 1.0 / ((1.0 - std::norm(z)) * (1.0 - std::norm(z))); },
      spec);
  CHECK(critical.verdict == TailVerdict::kDivergent);

  // borderline logarithmic case: annulus masses pi log 2 each
  auto log_case =
      tail_profile([](const cplx& z) { return 1.0 / (1.0 - std::norm(z)); }, spec);
  CHECK(log_case.verdict == TailVerdict::kDivergent);
}

TEST_CASE("tail classification is stable under doubling the annulus count") {
  QuadratureSpec spec = default_spec();
  QuadratureSpec doubled = spec;
  doubled.tail_annuli = spec.tail_annuli * 2;
  auto families = std::vector<DiscIntegrand>{
      [](const cplx&) { return 1.0; },
      [](const cplx& z) { return 1.0 / ((1.0 - std::norm(z)) * (1.0 - std::norm(z))); },
      [](const cplx& z) { return 1.0 / (1.0 - std::norm(z)); }};
  for (const auto& F : families) {
    CHECK(tail_profile(F, spec).verdict == tail_profile(F, doubled).verdict);
  }
}

TEST_CASE("monotonicity of the disc integral in the integrand") {
  auto F = [](const cplx& z) { return 1.0 / (2.0 - std::norm(z)); };
  auto G = [](const cplx& z) { return 1.0 / (1.2 - std::norm(z)); };
  auto rf = disc_integral(F, default_spec());
  auto rg = disc_integral(G, default_spec());
  CHECK(rf.value <= rg.value + rf.error_estimate + rg.error_estimate);
}

TEST_CASE("refinement consistency: doubling resolution moves less than the error bar") {
  QuadratureSpec spec = default_spec();
  QuadratureSpec fine = spec;
  fine.angular_nodes *= 2;
  fine.radial_levels *= 2;
  auto families = std::vector<DiscIntegrand>{
      [](const cplx& z) { return std::exp(-std::norm(z)); },
      [](const cplx& z) { return 1.0 / std::sqrt(1.0 - std::norm(z)); },
      [](const cplx& z) {
        return (1.0 - std::norm(z)) / std::norm(1.0 - std::conj(cplx(0, 1)) * z);
      }};
  for (const auto& F : families) {
    auto a = disc_integral(F, spec, {kPi / 2});
    auto b = disc_integral(F, fine, {kPi / 2});
    CHECK(std::abs(a.value - b.value) <=
          std::max(a.error_estimate, 1e-12 * (1.0 + std::abs(a.value))) * 2.0);
  }
}

TEST_CASE("non-finite integrand values are reported with a location") {
  CHECK_THROWS_AS(disc_integral(
                      [](const cplx& z) {
                        return std::abs(z - cplx(0.4, 0.1)) < 0.2 ? std::nan("") : 1.0;
                      },
                      default_spec()),
                  std::domain_error);
}

TEST_CASE("poisson-kernel weighted annuli are resolved at depth") {
  // angular mean of the kernel is 1 on every circle, so each dyadic annulus
  // carries exactly its area: pi (r1^2 - r0^2)
  QuadratureSpec spec = default_spec();
  const cplx zeta = std::polar(1.0, 1.0);
  auto F = [&](const cplx& z) {
    return (1.0 - std::norm(z)) / std::norm(1.0 - std::conj(zeta) * z);
  };
  auto res = disc_annuli(F, spec, {1.0}, 30);
  for (int k = 25; k < 30; ++k) {
    double r0 = 1.0 - std::pow(0.5, k), r1 = 1.0 - std::pow(0.5, k + 1);
    double expect = kPi * (r1 * r1 - r0 * r0);
    CHECK(res.levels[k] == doctest::Approx(expect).epsilon(1e-8));
  }
  CHECK(res.value == doctest::Approx(kPi).epsilon(1e-9));
}

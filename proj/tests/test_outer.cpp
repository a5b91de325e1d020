#include <doctest.h>

#include <cmath>
#include <random>

#include "dmu/outer.hpp"

using namespace dmu;

namespace {

const QuadratureSpec kSpec{};

std::vector<double> offset_samples(int n, const std::function<double(double)>& f) {
  std::vector<double> s(n);
  for (int j = 0; j < n; ++j) s[j] = f(kTwoPi * (j + 0.5) / n);
  return s;
}

AnalyticFn half_one_minus_z() { return AnalyticFn::power(1.0, 1.0, 0.5); }

}  // namespace

TEST_CASE("zero log-modulus reconstructs the constant one") {
  auto o = outer_from_log_modulus(std::vector<double>(256, 0.0));
  for (cplx z : {cplx(0.0, 0.0), cplx(0.5, 0.3), cplx(-0.9, 0.0)}) {
    CHECK(std::abs(o.value(z) - 1.0) <= 1e-13);
  }
  CHECK(o.mean_log_modulus() == doctest::Approx(0.0));
}

TEST_CASE("constant log-modulus reconstructs the constant") {
  auto o = outer_from_log_modulus(std::vector<double>(256, std::log(0.37)));
  CHECK(std::abs(o.value(cplx(0.2, -0.4)) - 0.37) <= 1e-13);
  CHECK(o.value(0.0).real() == doctest::Approx(0.37));
}

TEST_CASE("round trip: boundary log-modulus of (1-z)/2 reconstructs the function") {
  const int n = 4096;
  auto samples = offset_samples(
      n, [](double t) { return std::log(std::abs(1.0 - std::polar(1.0, t))) - std::log(2.0); });

  SUBCASE("with the singular angle auto-detected") {
    auto o = outer_from_log_modulus(samples);
    REQUIRE(o.factors().size() == 1);
    CHECK(o.factors()[0].alpha == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(o.factors()[0].angle) <= 1e-9);
    double worst = 0.0;
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
      cplx z = std::polar(0.9 * std::sqrt(u(rng)), kTwoPi * u(rng));
      worst = std::max(worst, std::abs(o.value(z) - 0.5 * (1.0 - z)));
    }
    for (int j = 0; j < 64; ++j) {  // the boundary-adjacent ring matters most
      cplx z = std::polar(0.9, kTwoPi * (j + 0.5) / 64);
      worst = std::max(worst, std::abs(o.value(z) - 0.5 * (1.0 - z)));
    }
    CHECK(worst <= 1e-6);
  }

  SUBCASE("with the singular angle hinted") {
    auto o = outer_from_log_modulus(samples, {0.0});
    CHECK(std::abs(o.value(cplx(0.9, 0.0)) - 0.05) <= 1e-9);
    CHECK(o.value(0.0).real() == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("derivative of the reconstruction matches the closed form") {
  auto o = to_outer(half_one_minus_z(), kSpec);
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    cplx z = std::polar(0.9 * u(rng), kTwoPi * u(rng));
    CHECK(std::abs(o.derivative(z) - cplx(-0.5, 0.0)) <= 1e-6);
  }
}

TEST_CASE("fractional power boundary data is fitted exactly") {
  auto f = AnalyticFn::power(1.0, 0.5, 0.5);  // (1-z)^{1/2} / 2
  auto o = to_outer(f, kSpec);
  REQUIRE(o.factors().size() == 1);
  CHECK(o.factors()[0].alpha == doctest::Approx(0.5).epsilon(1e-6));
  for (int j = 0; j < 32; ++j) {
    cplx z = std::polar(0.85, kTwoPi * (j + 0.5) / 32);
    CHECK(std::abs(o.value(z) - f.value(z)) <= 1e-6);
  }
}

TEST_CASE("non-finite samples are rejected") {
  std::vector<double> s(64, 0.0);
  s[3] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(outer_from_log_modulus(s), std::invalid_argument);
  CHECK_THROWS_AS(outer_from_log_modulus(std::vector<double>(100, 0.0)),
                  std::invalid_argument);  // not a power of two
}

TEST_CASE("is_outer on the stated examples") {
  CHECK(is_outer(half_one_minus_z(), 1e-3, kSpec).outer);

  auto vanishing = is_outer(AnalyticFn::identity(), 1e-3, kSpec);
  CHECK_FALSE(vanishing.outer);
  CHECK(vanishing.reason.find("vanishes") != std::string::npos);

  // boundary modulus 1 almost everywhere but |f(0)| = 1/e: the inner factor
  auto inner = AnalyticFn::exp_of(AnalyticFn::quotient(
      AnalyticFn::polynomial({1.0, 1.0}), AnalyticFn::power(1.0, 1.0, -1.0)));
  auto chk = is_outer(inner, 1e-3, kSpec);
  CHECK_FALSE(chk.outer);
  CHECK(chk.log_value_at_zero == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(std::abs(chk.boundary_mean) <= 0.05);
}

TEST_CASE("mean of the boundary log-modulus of (1-z)/2 is -log 2 by quadrature") {
  // independent oracle for the outer test: mean log|1 - e^{it}| = 0
  auto res = circle_integral(
      [](double t) { return std::log(std::abs(1.0 - std::polar(1.0, t))); }, {0.0}, kSpec);
  CHECK(res.converged);
  CHECK(std::abs(res.value / kTwoPi) <= 1e-7);
}

TEST_CASE("outer minimum: f wedge f = f") {
  auto a = to_outer(half_one_minus_z(), kSpec);
  auto m = outer_min(a, a);
  for (int j = 0; j < 32; ++j) {
    cplx z = std::polar(0.9, kTwoPi * (j + 0.5) / 32);
    CHECK(std::abs(m.value(z) - a.value(z)) <= 1e-8);
  }
}

TEST_CASE("outer minimum with a dominating constant returns the smaller function") {
  auto h = to_outer(half_one_minus_z(), kSpec);
  auto one = outer_from_log_modulus(std::vector<double>(4096, 0.0));
  auto m = outer_min(h, one);
  for (int j = 0; j < 32; ++j) {
    cplx z = std::polar(0.9, kTwoPi * (j + 0.5) / 32);
    CHECK(std::abs(m.value(z) - 0.5 * (1.0 - z)) <= 1e-6);
  }
}

TEST_CASE("cut-off minimum has boundary modulus min(|h|, n |h|^2)") {
  auto h = to_outer(half_one_minus_z(), kSpec);
  for (double n : {1.0, 2.0, 10.0}) {
    auto m = cutoff_min(h, n);
    for (int j = 0; j < 257; ++j) {
      double t = kTwoPi * (j + 0.37) / 257;
      double habs = std::abs(1.0 - std::polar(1.0, t)) / 2.0;
      double expect = std::min(habs, n * habs * habs);
      double got = std::exp(m.boundary_log_modulus(t));
      CHECK(got == doctest::Approx(expect).epsilon(2e-4));
    }
  }
}

TEST_CASE("outer minimum is commutative and idempotent on the boundary grid") {
  auto a = to_outer(half_one_minus_z(), kSpec, 2048);
  auto b = to_outer(AnalyticFn::power(-1.0, 0.5, 0.8), kSpec, 2048);
  auto ab = outer_min(a, b);
  auto ba = outer_min(b, a);
  auto aa = outer_min(a, a);
  for (int j = 0; j < 64; ++j) {
    double t = kTwoPi * (j + 0.5) / 64;
    CHECK(ab.boundary_log_modulus(t) == doctest::Approx(ba.boundary_log_modulus(t)).epsilon(1e-10));
    CHECK(aa.boundary_log_modulus(t) == doctest::Approx(a.boundary_log_modulus(t)).epsilon(1e-10));
  }
}

TEST_CASE("value at zero is exp of the represented boundary mean, and the result is outer") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // smooth random log-modulus: trigonometric polynomial
  for (int trial = 0; trial < 5; ++trial) {
    double a1 = u(rng) - 0.5, b2 = u(rng) - 0.5, c0 = u(rng) - 0.5;
    auto samples = offset_samples(512, [&](double t) {
      return c0 + a1 * std::cos(t) + b2 * std::sin(2 * t);
    });
    auto o = outer_from_log_modulus(samples);
    CHECK(o.value(0.0).real() == doctest::Approx(std::exp(c0)).epsilon(1e-12));
    CHECK(o.value(0.0).imag() == 0.0);
    CHECK(o.mean_log_modulus() == doctest::Approx(c0).epsilon(1e-12));
    CHECK(is_outer(o, 1e-6, kSpec).outer);
  }
}

TEST_CASE("outer power scaling transforms the representation exactly") {
  auto h = to_outer(half_one_minus_z(), kSpec);
  auto nh2 = outer_power_scale(h, 2.0, std::log(3.0));
  for (int j = 0; j < 32; ++j) {
    cplx z = std::polar(0.8, kTwoPi * (j + 0.5) / 32);
    cplx expect = 3.0 * std::pow(0.5 * (1.0 - z), 2);
    CHECK(std::abs(nh2.value(z) - expect) <= 1e-6);
  }
}

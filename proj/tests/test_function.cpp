#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dmu/function.hpp"

using namespace dmu;

namespace {

const QuadratureSpec kSpec{};

AnalyticFn half_one_minus_z() { return AnalyticFn::power(1.0, 1.0, 0.5); }

// the shared closed-form corpus used across the test suites
std::vector<std::pair<std::string, AnalyticFn>> corpus() {
  std::vector<std::pair<std::string, AnalyticFn>> fns;
  fns.emplace_back("identity", AnalyticFn::identity());
  fns.emplace_back("constant", AnalyticFn::constant(cplx(0.3, -0.2)));
  fns.emplace_back("(1-z)/2", half_one_minus_z());
  fns.emplace_back("(1-z)^0.5/2", AnalyticFn::power(1.0, 0.5, 0.5));
  fns.emplace_back("(1-z)^2", AnalyticFn::power(1.0, 2.0));
  fns.emplace_back("poly4", AnalyticFn::polynomial({0.3, 0.5, 0.0, -0.2, 0.1}));
  fns.emplace_back("mobius", AnalyticFn::quotient(AnalyticFn::polynomial({1.0, 1.0}),
                                                  AnalyticFn::power(1.0, 1.0)));
  fns.emplace_back("exp((z+1)/(z-1))",
                   AnalyticFn::exp_of(AnalyticFn::quotient(
                       AnalyticFn::polynomial({1.0, 1.0}),
                       AnalyticFn::power(1.0, 1.0, -1.0))));
  fns.emplace_back("log((1-z)/2)", AnalyticFn::log_of(half_one_minus_z()));
  fns.emplace_back("g2(log(2/(1-z)))",
                   AnalyticFn::gn_compose(
                       2, AnalyticFn::log_of(AnalyticFn::quotient(
                              AnalyticFn::constant(1.0), half_one_minus_z()))));
  fns.emplace_back("product",
                   AnalyticFn::product({half_one_minus_z(), AnalyticFn::polynomial({1.0, 0.5})}));
  return fns;
}

}  // namespace

TEST_CASE("pointwise evaluation of the basic kinds") {
  CHECK(AnalyticFn::identity().value(cplx(0.3, 0.4)) == cplx(0.3, 0.4));
  CHECK(half_one_minus_z().value(0.0) == cplx(0.5, 0.0));
  CHECK(AnalyticFn::constant(2.0).value(cplx(0.1, 0.1)) == cplx(2.0, 0.0));
  auto p = AnalyticFn::polynomial({1.0, 0.0, 2.0});
  CHECK(p.value(cplx(0.5, 0.0)).real() == doctest::Approx(1.5));
  CHECK(p.value(cplx(0.5, 0.0)).imag() == doctest::Approx(0.0));
}

TEST_CASE("derivatives of the stated examples") {
  CHECK(half_one_minus_z().derivative(cplx(0.2, 0.6)) == cplx(-0.5, 0.0));
  auto z2 = AnalyticFn::polynomial({0.0, 0.0, 1.0});
  CHECK(z2.derivative(0.5).real() == doctest::Approx(1.0));
  // chain rule through the iterated log: d/dz G_1(1+z) at 0 is 1/2
  auto g1 = AnalyticFn::gn_compose(1, AnalyticFn::polynomial({1.0, 1.0}));
  CHECK(g1.derivative(0.0).real() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(g1.derivative(0.0).imag() == doctest::Approx(0.0));
}

TEST_CASE("derivative trees match central finite differences on the corpus") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1e-5;
  for (const auto& [name, f] : corpus()) {
    CAPTURE(name);
    for (int i = 0; i < 100; ++i) {
      cplx z = std::polar(0.7 * u(rng), kTwoPi * u(rng));
      cplx fd = (f.value(z + h) - f.value(z - h)) / (2.0 * h);
      cplx ex = f.derivative(z);
      CHECK(std::abs(fd - ex) <= 1e-6 * (1.0 + std::abs(ex)));
    }
  }
}

TEST_CASE("evaluation outside the disc is rejected") {
  CHECK_THROWS_AS(AnalyticFn::identity().value(cplx(1.0, 0.5)), std::domain_error);
  CHECK_THROWS_AS(AnalyticFn::identity().derivative(cplx(0.0, 1.1)), std::domain_error);
}

TEST_CASE("structural certificates") {
  // quotient by something that can vanish inside the disc is rejected
  CHECK_THROWS_AS(AnalyticFn::quotient(AnalyticFn::constant(1.0), AnalyticFn::identity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      AnalyticFn::quotient(AnalyticFn::constant(1.0), AnalyticFn::polynomial({1.0, -1.0})),
      std::invalid_argument);
  CHECK_THROWS_AS(AnalyticFn::log_of(AnalyticFn::identity()), std::invalid_argument);
  // the power form of the same factor is certified
  CHECK_NOTHROW(AnalyticFn::quotient(AnalyticFn::constant(1.0), AnalyticFn::power(1.0, 1.0)));
  CHECK_NOTHROW(AnalyticFn::log_of(half_one_minus_z()));
  CHECK(half_one_minus_z().vanishes_nowhere());
  CHECK_FALSE(AnalyticFn::identity().vanishes_nowhere());
  CHECK_THROWS_AS(AnalyticFn::power(cplx(0.5, 0.0), 1.0), std::invalid_argument);
}

TEST_CASE("iterated-log composition guards its half-plane domain") {
  // G_1(z) needs Re z >= 0 but the identity ranges over the whole disc
  auto g = AnalyticFn::gn_compose(1, AnalyticFn::identity());
  CHECK_THROWS_AS(g.value(cplx(-0.5, 0.0)), std::domain_error);
  CHECK_NOTHROW(g.value(cplx(0.5, 0.2)));
}

TEST_CASE("boundary singular angles come from the power factors") {
  auto f = half_one_minus_z();
  auto angles = f.boundary_singular_angles();
  REQUIRE(angles.size() == 1);
  CHECK(angles[0] == doctest::Approx(0.0));
  auto g = AnalyticFn::product({AnalyticFn::power(-1.0, 0.5), half_one_minus_z()});
  angles = g.boundary_singular_angles();
  REQUIRE(angles.size() == 2);
  CHECK(angles[0] == doctest::Approx(0.0));
  CHECK(angles[1] == doctest::Approx(kPi));
}

TEST_CASE("sup-norm estimates of the stated examples") {
  CHECK(sup_norm_estimate(AnalyticFn::constant(0.7), kSpec).value == doctest::Approx(0.7));
  auto est = sup_norm_estimate(half_one_minus_z(), kSpec);
  CHECK(est.value == doctest::Approx(1.0).epsilon(2e-4));
  CHECK(est.value <= 1.0);
  CHECK(est.grid_radius >= 1.0 - 1e-4);
  auto z2 = AnalyticFn::polynomial({0.0, 0.0, 1.0});
  CHECK(sup_norm_estimate(z2, kSpec).value == doctest::Approx(1.0).epsilon(3e-4));
}

TEST_CASE("product combinator differentiates by the product rule") {
  auto a = share(half_one_minus_z());
  auto b = share(AnalyticFn::polynomial({0.0, 0.0, 1.0}));
  ProductFn p(a, b);
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    cplx z = std::polar(0.8 * u(rng), kTwoPi * u(rng));
    cplx expect = 0.5 * (1.0 - z) * 2.0 * z + (-0.5) * z * z;
    CHECK(std::abs(p.derivative(z) - expect) <= 1e-12);
  }
}

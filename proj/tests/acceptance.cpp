// Acceptance suite: runs every top-level criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code = number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dmu/certify.hpp"
#include "dmu/dirichlet.hpp"
#include "dmu/iterlog.hpp"
#include "dmu/json_io.hpp"
#include "dmu/measure.hpp"
#include "dmu/outer.hpp"

using namespace dmu;
namespace fs = std::filesystem;

namespace {

const QuadratureSpec kSpec{};

AnalyticFn half() { return AnalyticFn::power(1.0, 1.0, 0.5); }
AnalyticFn half_sqrt() { return AnalyticFn::power(1.0, 0.5, 0.5); }
AnalyticFn monomial(int k) {
  std::vector<cplx> c(k + 1, 0.0);
  c[k] = 1.0;
  return AnalyticFn::polynomial(c);
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
};

#define REQUIRE_NEAR(out, value, target, tol, label)                                   \
  do {                                                                                 \
    double v_ = (value), t_ = (target);                                                \
    if (!(std::abs(v_ - t_) <= (tol))) {                                               \
      out.pass = false;                                                                \
      out.detail << " [" << label << ": " << v_ << " vs " << t_ << " tol " << (tol)    \
                 << "]";                                                               \
    }                                                                                  \
  } while (0)

#define REQUIRE_TRUE(out, cond, label)          \
  do {                                          \
    if (!(cond)) {                              \
      out.pass = false;                         \
      out.detail << " [failed: " << label << "]"; \
    }                                           \
  } while (0)

Outcome criterion1_poisson_identity() {
  Outcome out;
  auto mu = CircleMeasure::lebesgue();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    cplx z = std::polar(0.99 * std::sqrt(u(rng)), kTwoPi * u(rng));
    REQUIRE_NEAR(out, poisson_integral(mu, z, kSpec), 1.0, 1e-8, "P(z)");
  }
  return out;
}

Outcome criterion2_local_dirichlet() {
  Outcome out;
  const std::vector<cplx> zetas = {cplx(1, 0), cplx(0, 1), cplx(-1, 0)};
  for (const cplx& zeta : zetas) {
    auto rid = local_dirichlet_boundary(AnalyticFn::identity(), zeta, kSpec);
    REQUIRE_NEAR(out, rid.area_value, 1.0, 1e-6, "area id");
    REQUIRE_TRUE(out, rid.boundary_available && rid.boundary_converged, "boundary id usable");
    REQUIRE_NEAR(out, rid.boundary_value, 1.0, 1e-6, "boundary id");

    auto rz2 = local_dirichlet_boundary(monomial(2), zeta, kSpec);
    REQUIRE_NEAR(out, rz2.area_value, 2.0, 1e-6, "area z^2");
    REQUIRE_NEAR(out, rz2.boundary_value, 2.0, 1e-6, "boundary z^2");
  }

  std::vector<std::pair<std::string, AnalyticFn>> corpus;
  corpus.emplace_back("z", monomial(1));
  corpus.emplace_back("z^2", monomial(2));
  corpus.emplace_back("z^3", monomial(3));
  corpus.emplace_back("z^4", monomial(4));
  corpus.emplace_back("poly4", AnalyticFn::polynomial({0.3, 0.5, 0.0, -0.2, 0.1}));
  corpus.emplace_back("(1-z)^0.5", AnalyticFn::power(1.0, 0.5));
  corpus.emplace_back("(1-z)^1", AnalyticFn::power(1.0, 1.0));
  corpus.emplace_back("(1-z)^2", AnalyticFn::power(1.0, 2.0));
  for (const auto& [name, f] : corpus) {
    for (const cplx& zeta : {cplx(1, 0), cplx(-1, 0)}) {
      auto r = local_dirichlet_boundary(f, zeta, kSpec);
      if (r.area_divergent) {
        // both routes must agree that the integral blows up
        REQUIRE_TRUE(out, !(r.boundary_available && r.boundary_converged),
                     name + " divergence consistency");
        continue;
      }
      REQUIRE_TRUE(out, r.boundary_available && r.boundary_converged,
                   name + " boundary usable");
      double rel = r.discrepancy / std::max(1.0, r.boundary_value);
      REQUIRE_TRUE(out, rel <= 1e-4, name + " form discrepancy");
    }
  }
  return out;
}

Outcome criterion3_cutoff() {
  Outcome out;
  const cplx zeta(-1.0, 0.0);
  for (const auto& h : {half(), half_sqrt()}) {
    for (double n : {1.0, 2.0, 10.0, 100.0}) {
      auto rep = verify_cutoff(h, zeta, n, kSpec);
      REQUIRE_TRUE(out, rep.passed(), "cutoff PASS at n = " + std::to_string(n));
      if (!rep.passed())
        out.detail << " [lhs/rhs " << rep.samples_lr[0][0] << "/" << rep.samples_lr[0][1]
                   << "]";
    }
  }
  return out;
}

Outcome criterion4_norm_inequality() {
  Outcome out;
  std::vector<std::tuple<std::string, AnalyticFn, AnalyticFn, double>> pairs;
  pairs.emplace_back("g=1,h=half,n=2", AnalyticFn::constant(1.0), half(), 2.0);
  pairs.emplace_back("g=id,h=half,n=10", AnalyticFn::identity(), half(), 10.0);
  pairs.emplace_back("g=half,h=half,n=2", half(), half(), 2.0);
  pairs.emplace_back("g=z^2,h=half,n=100", monomial(2), half(), 100.0);
  // the half factor in g keeps g h inside the space even when an atom sits at
  // the boundary zero of the square-root factor
  pairs.emplace_back("g=half,h=halfsqrt,n=10", half(), half_sqrt(), 10.0);
  pairs.emplace_back("g=(1+z)/2,h=half,n=1", AnalyticFn::polynomial({0.5, 0.5}), half(), 1.0);

  std::vector<std::pair<std::string, CircleMeasure>> measures;
  measures.emplace_back("lebesgue", CircleMeasure::lebesgue());
  measures.emplace_back("atom(pi)", CircleMeasure::dirac(kPi));
  measures.emplace_back("atom(0)+atom(pi)",
                        CircleMeasure::from_atoms({{0.0, kTwoPi}, {kPi, kTwoPi}}));

  for (const auto& [mname, mu] : measures) {
    for (const auto& [pname, g, h, n] : pairs) {
      auto rep = verify_norm_ineq(g, h, mu, n, kSpec);
      REQUIRE_TRUE(out, rep.passed(), pname + " with " + mname);
    }
  }
  return out;
}

Outcome criterion5_deriv_bound() {
  Outcome out;
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    double x = std::pow(10.0, -3.0 + 7.0 * u(rng));
    double y = (u(rng) - 0.5) * 2.0 * std::pow(10.0, -3.0 + 7.0 * u(rng));
    cplx z(x, y);
    for (int n = 0; n <= 6; ++n) worst = std::max(worst, std::abs(iterlog_deriv(n, z)));
  }
  REQUIRE_TRUE(out, worst <= 1.0 + 1e-12, "sup of |G_n'|");
  out.detail << " worst |G_n'| = " << worst;
  return out;
}

// independent oracle for M_1: dense log-spaced grid plus golden refinement
double m1_oracle(double m0) {
  auto ratio = [m0](double x) { return std::log1p(kPi / 2.0 + m0 * x) / std::log1p(x); };
  double lo = std::log(2.0);
  double best = 0.0, bx = lo;
  for (int i = 0; i <= 400000; ++i) {
    double x = std::exp(std::log(lo) + (std::log(1e6) - std::log(lo)) * i / 400000.0);
    double v = ratio(x);
    if (v > best) {
      best = v;
      bx = x;
    }
  }
  double a = std::max(lo, bx * 0.999), b = bx * 1.001;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 400; ++it) {
    double c = b - gr * (b - a), d = a + gr * (b - a);
    if (ratio(c) > ratio(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  return std::max(best, ratio(0.5 * (a + b)));
}

Outcome criterion6_gn_bound() {
  Outcome out;
  auto f = AnalyticFn::quotient(AnalyticFn::polynomial({1.0, 1.0}), AnalyticFn::power(1.0, 1.0));
  auto rep = verify_gn_bound(f, 4, kSpec, 100, 100, 1.0 - 1e-6);
  REQUIRE_TRUE(out, rep.passed(), "half-plane map bound");
  auto rep1 = verify_gn_bound(AnalyticFn::constant(1.0), 4, kSpec, 100, 100, 1.0 - 1e-6);
  REQUIRE_TRUE(out, rep1.passed(), "constant bound");

  auto table = compute_M(1, 4.0);
  double oracle = m1_oracle(4.0);
  REQUIRE_NEAR(out, table.M[1], oracle, 1e-4 * oracle, "M_1 vs oracle");
  REQUIRE_NEAR(out, table.M[1], 3.18, 0.01, "M_1 magnitude");
  out.detail << " M_1 = " << table.M[1];
  return out;
}

// adaptive Simpson oracle for 2 int_0^{pi/2} arctan(y)/y dy
double arctan_ratio_integral() {
  struct S {
    static double f(double y) { return y == 0.0 ? 1.0 : std::atan(y) / y; }
    static double rec(double a, double b, double fa, double fb, double fm, double whole,
                      int depth) {
      double m = 0.5 * (a + b);
      double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
      double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth > 48 || std::abs(left + right - whole) < 1e-14)
        return left + right + (left + right - whole) / 15.0;
      return rec(a, m, fa, fm, flm, left, depth + 1) +
             rec(m, b, fm, fb, frm, right, depth + 1);
    }
  };
  double a = 0.0, b = kPi / 2.0;
  double fa = S::f(a), fb = S::f(b), fm = S::f(0.5 * (a + b));
  return 2.0 * S::rec(a, b, fa, fb, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb), 0);
}

Outcome criterion7_g2_area() {
  Outcome out;
  double oracle = arctan_ratio_integral();
  double value = g2_halfplane_area();
  REQUIRE_NEAR(out, value, oracle, 1e-6 * oracle, "area vs 1-D reduction");
  REQUIRE_NEAR(out, value, 2.64, 0.01, "area magnitude");
  out.detail << " area = " << value;
  return out;
}

Outcome criterion8_certificates() {
  Outcome out;
  using clock = std::chrono::steady_clock;

  auto timed = [&](const char* label, const std::function<Certificate()>& run) {
    auto t0 = clock::now();
    Certificate cert = run();
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    REQUIRE_TRUE(out, secs < 10.0, std::string(label) + " under 10 s");
    out.detail << " [" << label << ": " << to_string(cert.verdict) << ", " << secs << " s]";
    return cert;
  };

  auto c1 = timed("iterlog n=2", [] {
    return certify_iterlog(half(), CircleMeasure::lebesgue(), 2, kSpec);
  });
  REQUIRE_TRUE(out, c1.verdict == Verdict::kSufficientCyclic, "iterlog n=2 sufficient");

  auto c2 = timed("log lebesgue", [] {
    return certify_log(half(), CircleMeasure::lebesgue(), kSpec);
  });
  REQUIRE_TRUE(out, c2.verdict != Verdict::kSufficientCyclic, "log route not sufficient");
  bool tail_divergent_or_inconclusive = false;
  for (const auto& q : c2.quantities)
    if (q.name == "energy_log_g")
      tail_divergent_or_inconclusive = !q.tail.convergent();
  REQUIRE_TRUE(out, tail_divergent_or_inconclusive, "log route energy tail not convergent");

  auto c3 = timed("log atom(pi)", [] {
    return certify_log(half(), CircleMeasure::dirac(kPi), kSpec);
  });
  REQUIRE_TRUE(out, c3.verdict == Verdict::kSufficientCyclic, "log atom sufficient");
  return out;
}

Outcome criterion9_figure_curves() {
  Outcome out;
  auto csv_path = fs::temp_directory_path() / "dmu_acceptance_fig1.csv";
  auto problem_path = fs::temp_directory_path() / "dmu_acceptance_fig1.json";
  std::ofstream(problem_path) << "{\"count\":10000,\"t_min\":1e-4,\"t_max\":1e4}";
  std::string cmd = std::string(DMU_CLI_PATH) + " figure1 --problem " + problem_path.string() +
                    " --out " + csv_path.string() + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE_TRUE(out, WIFEXITED(status) && WEXITSTATUS(status) == 0, "figure1 exit code");

  std::ifstream csv(csv_path);
  std::string line;
  REQUIRE_TRUE(out, static_cast<bool>(std::getline(csv, line)), "csv header");
  int rows = 0;
  bool bounds_ok = true;
  while (std::getline(csv, line)) {
    ++rows;
    std::vector<double> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(std::strtod(cell.c_str(), nullptr));
    if (cols.size() != 11) {
      bounds_ok = false;
      break;
    }
    double t = cols[0], a2 = cols[3], a3 = cols[6], a4 = cols[9];
    double a1 = std::abs(iterlog(1, cplx(0.0, t)));
    bool row_ok = a2 <= std::log1p(a1) + kPi / 2.0 + 1e-12 &&
                  a3 <= std::log1p(a2) + kPi / 2.0 + 1e-12 &&
                  a4 <= std::log1p(a3) + kPi / 2.0 + 1e-12 && cols[10] == 1.0;
    bounds_ok = bounds_ok && row_ok;
  }
  REQUIRE_TRUE(out, rows == 10000, "row count");
  REQUIRE_TRUE(out, bounds_ok, "row-wise step bound");
  return out;
}

Outcome criterion10_outer_roundtrip() {
  Outcome out;
  const int n = 4096;
  std::vector<double> samples(n);
  for (int j = 0; j < n; ++j) {
    double t = kTwoPi * (j + 0.5) / n;
    samples[j] = std::log(std::abs(1.0 - std::polar(1.0, t))) - std::log(2.0);
  }
  auto o = outer_from_log_modulus(samples);
  double worst = 0.0;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    cplx z = std::polar(0.9 * std::sqrt(u(rng)), kTwoPi * u(rng));
    worst = std::max(worst, std::abs(o.value(z) - 0.5 * (1.0 - z)));
  }
  for (int j = 0; j < 256; ++j) {
    cplx z = std::polar(0.9, kTwoPi * (j + 0.5) / 256);
    worst = std::max(worst, std::abs(o.value(z) - 0.5 * (1.0 - z)));
  }
  REQUIRE_TRUE(out, worst <= 1e-6, "max reconstruction error");
  out.detail << " max error = " << worst;
  return out;
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  struct Entry {
    int id;
    const char* label;
    std::function<Outcome()> run;
    double budget_seconds;
  };
  std::vector<Entry> entries = {
      {1, "poisson identity for the arc-length preset", criterion1_poisson_identity, 1.0},
      {2, "local Dirichlet exactness and form agreement", criterion2_local_dirichlet, 30.0},
      {3, "cut-off bound over the n sweep", criterion3_cutoff, 60.0},
      {4, "product-norm bound over pairs and measures", criterion4_norm_inequality, 120.0},
      {5, "iterated-log derivative bound", criterion5_deriv_bound, 60.0},
      {6, "pointwise iterated-log bound and M_1 oracle", criterion6_gn_bound, 60.0},
      {7, "half-plane area of the second iterate", criterion7_g2_area, 60.0},
      {8, "cyclicity certificates", criterion8_certificates, 30.0},
      {9, "curve table with the row-wise step bound", criterion9_figure_curves, 60.0},
      {10, "outer reconstruction round trip", criterion10_outer_roundtrip, 60.0},
  };

  int failures = 0;
  for (auto& e : entries) {
    auto t0 = clock::now();
    Outcome out;
    try {
      out = e.run();
    } catch (const std::exception& ex) {
      out.pass = false;
      out.detail << " [exception: " << ex.what() << "]";
    }
    double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (secs >= e.budget_seconds) {
      out.pass = false;
      out.detail << " [over budget: " << secs << " s >= " << e.budget_seconds << " s]";
    }
    std::printf("CRITERION %2d: %s  %s (%.2f s)%s\n", e.id, out.pass ? "PASS" : "FAIL",
                e.label, secs, out.detail.str().c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}

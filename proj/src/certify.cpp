#include "dmu/certify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dmu {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kSufficientCyclic: return "SUFFICIENT_CYCLIC";
    case Verdict::kInconclusive: return "INCONCLUSIVE";
    case Verdict::kDivergentEvidence: return "DIVERGENT_EVIDENCE";
  }
  return "INCONCLUSIVE";
}

std::string to_string(InequalityReport::Status s) {
  switch (s) {
    case InequalityReport::Status::kPass: return "PASS";
    case InequalityReport::Status::kFail: return "FAIL";
    case InequalityReport::Status::kSkip: return "SKIP";
  }
  return "SKIP";
}

bool Certificate::preconditions_ok() const {
  return std::all_of(preconditions.begin(), preconditions.end(),
                     [](const Precondition& p) { return p.passed; });
}

namespace {

constexpr double kOuterTol = 1e-3;
constexpr double kSupTol = 1e-6;
constexpr double kIneqRelTol = 1e-6;

Precondition outer_precondition(const AnalyticFn& g, const QuadratureSpec& spec) {
  auto chk = is_outer(g, kOuterTol, spec);
  return {"outer", chk.outer, chk.reason};
}

Precondition nonvanishing_precondition(const AnalyticFn& g, const QuadratureSpec& spec) {
  if (g.vanishes_nowhere())
    return {"nonvanishing", true, "certified by the expression structure"};
  double minv = std::abs(g.value(0.0));
  double maxv = minv;
  const int n = std::max(512, spec.angular_nodes);
  for (double r : {0.3, 0.6, 0.9, 1.0 - 1e-3, 1.0 - 1e-5}) {
    for (int j = 0; j < n; ++j) {
      double v = std::abs(g.value(std::polar(r, kTwoPi * (j + 0.5) / n)));
      minv = std::min(minv, v);
      maxv = std::max(maxv, v);
    }
  }
  bool ok = minv > 1e-13 * (1.0 + maxv);
  std::ostringstream os;
  os << "sampled min |g| = " << minv;
  return {"nonvanishing", ok, os.str()};
}

Precondition sup_precondition(const AnalyticFn& g, const QuadratureSpec& spec, double* sup) {
  auto est = sup_norm_estimate(g, spec);
  if (sup) *sup = est.value;
  std::ostringstream os;
  os << "sup estimate " << est.value << " at grid radius " << est.grid_radius;
  return {"sup_norm_le_1", est.value <= 1.0 + kSupTol, os.str()};
}

Verdict verdict_from_tails(const Certificate& cert, const TailProfile& a,
                           const TailProfile& b) {
  if (!cert.preconditions_ok()) return Verdict::kInconclusive;
  if (a.convergent() && b.convergent()) return Verdict::kSufficientCyclic;
  if (a.divergent() || b.divergent()) return Verdict::kDivergentEvidence;
  return Verdict::kInconclusive;
}

/// G_n composed with log(1/g) as a function on the disc (chain-rule exact).
class IterLogOfLogInverse : public HoloFn {
 public:
  IterLogOfLogInverse(const AnalyticFn& g, int n) : g_(g), n_(n) {}

  cplx value(const cplx& z) const override {
    return iterlog(n_, log_inverse(z));
  }
  cplx derivative(const cplx& z) const override {
    cplx gv = g_.value(z);
    return iterlog_deriv(n_, log_inverse(z)) * (-g_.derivative(z) / gv);
  }
  std::vector<double> boundary_singular_angles() const override {
    return g_.boundary_singular_angles();
  }

  cplx log_inverse(const cplx& z) const {
    cplx gv = g_.value(z);
    if (std::abs(gv) < 1e-300) throw std::domain_error("g vanished while forming log(1/g)");
    cplx L = -std::log(gv);
    // |g| <= 1 puts Re L >= 0; clamp the rounding fringe
    if (L.real() < 0.0) {
      if (L.real() < -1e-6) throw std::domain_error("log(1/g) left the right half-plane");
      L = cplx(0.0, L.imag());
    }
    return L;
  }

 private:
  const AnalyticFn& g_;
  int n_;
};

}  // namespace

Certificate certify_log(const AnalyticFn& g, const CircleMeasure& mu,
                        const QuadratureSpec& spec) {
  spec.validate();
  Certificate cert;
  cert.rule = "log-membership";
  cert.preconditions.push_back(outer_precondition(g, spec));
  cert.preconditions.push_back(nonvanishing_precondition(g, spec));
  if (!cert.preconditions_ok()) {
    cert.verdict = Verdict::kInconclusive;
    cert.detail = "verdict withheld: preconditions failed";
    return cert;
  }

  try {
    AnalyticFn log_g = AnalyticFn::log_of(g);
    auto h2t = h2_tail(log_g, spec);
    double h2v = h2_norm_sq(log_g, spec);
    auto semi = dmu_seminorm(log_g, mu, spec);
    cert.quantities.push_back({"h2_log_g", h2v, h2t});
    cert.quantities.push_back({"energy_log_g", semi.value, semi.tail});
    cert.verdict = verdict_from_tails(cert, h2t, semi.tail);
    cert.detail = "log g membership test: H^2 tail " + to_string(h2t.verdict) +
                  ", weighted energy tail " + to_string(semi.tail.verdict);
  } catch (const std::exception& e) {
    cert.preconditions.push_back({"log_domain", false, e.what()});
    cert.verdict = Verdict::kInconclusive;
    cert.detail = "verdict withheld: log g could not be evaluated";
  }
  return cert;
}

Certificate certify_iterlog(const AnalyticFn& g, const CircleMeasure& mu, int n,
                            const QuadratureSpec& spec) {
  spec.validate();
  if (n < 0) throw std::invalid_argument("iterated-log index must be nonnegative");
  Certificate cert;
  cert.rule = "iterated-log-membership";
  double sup = 0.0;
  cert.preconditions.push_back(sup_precondition(g, spec, &sup));
  cert.preconditions.push_back(outer_precondition(g, spec));
  cert.preconditions.push_back(nonvanishing_precondition(g, spec));
  if (!cert.preconditions_ok()) {
    cert.verdict = Verdict::kInconclusive;
    cert.detail = "verdict withheld: preconditions failed";
    return cert;
  }

  try {
    IterLogOfLogInverse gn(g, n);
    auto h2t = h2_tail(gn, spec);
    auto deriv_sq = [&](const cplx& z) { return std::norm(gn.derivative(z)); };
    auto semi = weighted_energy(deriv_sq, mu, spec, g.concentration_angles());
    std::ostringstream qn;
    qn << "energy_g" << n << "_log_inv";
    cert.quantities.push_back({"h2_gn_log_inv", h2_norm_sq(gn, spec), h2t});
    cert.quantities.push_back({qn.str(), semi.value, semi.tail});
    cert.verdict = verdict_from_tails(cert, h2t, semi.tail);
    cert.detail = "G_n(log 1/g) membership test at n = " + std::to_string(n) +
                  ": H^2 tail " + to_string(h2t.verdict) + ", weighted energy tail " +
                  to_string(semi.tail.verdict);
  } catch (const std::exception& e) {
    cert.preconditions.push_back({"chain_domain", false, e.what()});
    cert.verdict = Verdict::kInconclusive;
    cert.detail = "verdict withheld: the chain-rule integrand could not be evaluated";
  }
  return cert;
}

TailProfile growth_tail(const DiscIntegrand& deriv_sq, int n, const QuadratureSpec& spec,
                        const std::vector<double>& conc) {
  auto F = [&](const cplx& z) {
    double m = iterlog_majorant(n, std::norm(z));
    return deriv_sq(z) * m * m;
  };
  return tail_profile(F, spec, conc);
}

Certificate certify_growth(const AnalyticFn& g, int n, const QuadratureSpec& spec) {
  spec.validate();
  if (n < 0) throw std::invalid_argument("iterated-log index must be nonnegative");
  Certificate cert;
  cert.rule = "derivative-growth";
  double sup = 0.0;
  cert.preconditions.push_back(sup_precondition(g, spec, &sup));
  cert.preconditions.push_back(nonvanishing_precondition(g, spec));
  if (!cert.preconditions_ok()) {
    cert.verdict = Verdict::kInconclusive;
    cert.detail = "verdict withheld: preconditions failed";
    return cert;
  }

  auto deriv_sq = [&](const cplx& z) { return std::norm(g.derivative(z)); };
  auto tail = growth_tail(deriv_sq, n, spec, g.concentration_angles());
  double partial = 0.0;
  for (double a : tail.annulus_integrals) partial += a;
  cert.quantities.push_back({"growth_integral", partial, tail});
  if (tail.convergent()) {
    cert.membership_certified = true;
    cert.equivalence_list_applies = true;
    cert.verdict = Verdict::kInconclusive;
    cert.detail =
        "growth integral convergent: g (G_n o log 1/g) lies in the space and the "
        "equivalence list applies; this route does not certify cyclicity by itself";
  } else if (tail.divergent()) {
    cert.verdict = Verdict::kDivergentEvidence;
    cert.detail = "growth integral diverges numerically";
  } else {
    cert.verdict = Verdict::kInconclusive;
    cert.detail = "growth integral tail inconclusive";
  }
  return cert;
}

namespace {

class RefProductFn : public HoloFn {
 public:
  RefProductFn(const HoloFn& a, const HoloFn& b) : a_(a), b_(b) {}
  cplx value(const cplx& z) const override { return a_.value(z) * b_.value(z); }
  cplx derivative(const cplx& z) const override {
    return a_.derivative(z) * b_.value(z) + a_.value(z) * b_.derivative(z);
  }
  std::vector<double> boundary_singular_angles() const override {
    return merge_angles(a_.boundary_singular_angles(), b_.boundary_singular_angles());
  }
  std::vector<double> concentration_angles() const override {
    return merge_angles(a_.concentration_angles(), b_.concentration_angles());
  }

 private:
  const HoloFn& a_;
  const HoloFn& b_;
};

}  // namespace

InequalityReport verify_h1h2(const HoloFn& g, const HoloFn& h1, const HoloFn& h2,
                             const cplx& zeta, double c, const QuadratureSpec& spec) {
  spec.validate();
  if (!(c > 0.0)) throw std::invalid_argument("h1h2 bound requires c > 0");
  InequalityReport rep;
  rep.lemma = "h1h2-local-bound";
  {
    std::ostringstream os;
    os << "zeta angle " << std::arg(zeta) << ", c = " << c;
    rep.sample_description = os.str();
  }

  double sup1 = sup_norm_estimate(h1, spec).value;
  double sup2 = sup_norm_estimate(h2, spec).value;
  if (sup1 > sup2 * (1.0 + kIneqRelTol) + 1e-12) {
    rep.status = InequalityReport::Status::kSkip;
    rep.notes.push_back("hypothesis failed: ||h1|| > ||h2|| on the sup grid");
    return rep;
  }

  bool fin_g = false, fin_h1 = false, fin_h2 = false;
  double err_g = 0.0, err_h1 = 0.0, err_h2 = 0.0;
  double d_g = local_dirichlet_value(g, zeta, spec, &fin_g, &err_g);
  if (!fin_g) {
    rep.status = InequalityReport::Status::kSkip;
    rep.notes.push_back("hypothesis failed: D_zeta(g) is not numerically finite");
    return rep;
  }
  double d_h1 = local_dirichlet_value(h1, zeta, spec, &fin_h1, &err_h1);
  double d_h2 = local_dirichlet_value(h2, zeta, spec, &fin_h2, &err_h2);
  if (fin_h2 && !fin_h1) {
    rep.status = InequalityReport::Status::kSkip;
    rep.notes.push_back("hypothesis failed: D_zeta(h1) infinite while D_zeta(h2) finite");
    return rep;
  }
  if (fin_h1 && fin_h2 &&
      d_h1 > c * d_h2 * (1.0 + kIneqRelTol) + err_h1 + c * err_h2 + 1e-12) {
    rep.status = InequalityReport::Status::kSkip;
    rep.notes.push_back("hypothesis failed: D_zeta(h1) > c D_zeta(h2)");
    return rep;
  }

  RefProductFn gh1(g, h1), gh2(g, h2);
  bool fin_gh1 = false, fin_gh2 = false;
  double err_gh1 = 0.0, err_gh2 = 0.0;
  double lhs = local_dirichlet_value(gh1, zeta, spec, &fin_gh1, &err_gh1);
  double rhs_d = local_dirichlet_value(gh2, zeta, spec, &fin_gh2, &err_gh2);
  if (!fin_gh2) {
    rep.status = InequalityReport::Status::kPass;
    rep.notes.push_back("D_zeta(g h2) is numerically infinite; the bound holds trivially");
    return rep;
  }
  double rhs = 4.0 * c * rhs_d + (2.0 + 4.0 * c) * sup2 * sup2 * d_g;
  rep.samples_lr.push_back({lhs, rhs});
  rep.tolerance = kIneqRelTol * std::max(1.0, rhs) + err_gh1 + 4.0 * c * err_gh2 +
                  (2.0 + 4.0 * c) * sup2 * sup2 * err_g;
  rep.max_violation = lhs - rhs;
  rep.status = rep.max_violation <= rep.tolerance ? InequalityReport::Status::kPass
                                                  : InequalityReport::Status::kFail;
  return rep;
}

namespace {

InequalityReport cutoff_report(const HoloFn& h, const OuterFn& houter, const cplx& zeta,
                               double n, const QuadratureSpec& spec) {
  InequalityReport rep;
  rep.lemma = "cutoff-min";
  {
    std::ostringstream os;
    os << "h wedge " << n << " h^2 at zeta angle " << std::arg(zeta);
    rep.sample_description = os.str();
  }
  OuterFn m = cutoff_min(houter, n);
  bool fin_h = false, fin_m = false;
  double err_h = 0.0, err_m = 0.0;
  double d_h = local_dirichlet_value(h, zeta, spec, &fin_h, &err_h);
  if (!fin_h) {
    rep.status = InequalityReport::Status::kPass;
    rep.notes.push_back("D_zeta(h) is numerically infinite; the bound holds trivially");
    return rep;
  }
  double lhs = local_dirichlet_value(m, zeta, spec, &fin_m, &err_m);
  double rhs = 4.0 * d_h;
  rep.samples_lr.push_back({lhs, rhs});
  rep.tolerance = kIneqRelTol * std::max(1.0, rhs) + err_m + 4.0 * err_h;
  rep.max_violation = lhs - rhs;
  rep.status = rep.max_violation <= rep.tolerance ? InequalityReport::Status::kPass
                                                  : InequalityReport::Status::kFail;
  return rep;
}

}  // namespace

InequalityReport verify_cutoff(const AnalyticFn& h, const cplx& zeta, double n,
                               const QuadratureSpec& spec) {
  spec.validate();
  auto chk = is_outer(h, kOuterTol, spec);
  if (!chk.outer)
    throw std::invalid_argument("cut-off bound requires an outer function: " + chk.reason);
  return cutoff_report(h, to_outer(h, spec), zeta, n, spec);
}

InequalityReport verify_cutoff(const OuterFn& h, const cplx& zeta, double n,
                               const QuadratureSpec& spec) {
  spec.validate();
  return cutoff_report(h, h, zeta, n, spec);
}

InequalityReport verify_norm_ineq(const AnalyticFn& g, const AnalyticFn& h,
                                  const CircleMeasure& mu, double n,
                                  const QuadratureSpec& spec) {
  spec.validate();
  InequalityReport rep;
  rep.lemma = "product-norm-bound";
  {
    std::ostringstream os;
    os << "||g (h wedge " << n << " h^2)||^2 against 16 ||g h||^2 + 18 ||h||^2 ||g||^2";
    rep.sample_description = os.str();
  }

  auto houter_chk = is_outer(h, kOuterTol, spec);
  if (!houter_chk.outer) {
    rep.status = InequalityReport::Status::kSkip;
    rep.notes.push_back("hypothesis failed: h is not outer (" + houter_chk.reason + ")");
    return rep;
  }

  // degenerate g == 0: every norm vanishes
  bool g_zero = true;
  for (int j = 0; j < 64 && g_zero; ++j)
    if (std::abs(g.value(std::polar(0.7, kTwoPi * (j + 0.5) / 64.0))) > 1e-300) g_zero = false;
  if (g_zero) {
    rep.samples_lr.push_back({0.0, 0.0});
    rep.status = InequalityReport::Status::kPass;
    rep.notes.push_back("g vanishes identically; 0 <= 0");
    return rep;
  }

  auto g_semi = dmu_seminorm(g, mu, spec);
  auto g_h2t = h2_tail(g, spec);
  if (!(g_semi.tail.convergent() && g_h2t.convergent())) {
    rep.status = InequalityReport::Status::kSkip;
    rep.notes.push_back("hypothesis failed: g not numerically in the space");
    return rep;
  }
  RefProductFn gh(g, h);
  auto gh_semi = dmu_seminorm(gh, mu, spec);
  auto gh_h2t = h2_tail(gh, spec);
  if (!(gh_semi.tail.convergent() && gh_h2t.convergent())) {
    rep.status = InequalityReport::Status::kSkip;
    rep.notes.push_back("hypothesis failed: g h not numerically in the space");
    return rep;
  }

  double sup_h = sup_norm_estimate(h, spec).value;
  OuterFn m = cutoff_min(to_outer(h, spec), n);
  RefProductFn gm(g, m);

  double norm_g = h2_norm_sq(g, spec) + g_semi.value;
  double norm_gh = h2_norm_sq(gh, spec) + gh_semi.value;
  auto gm_semi = dmu_seminorm(gm, mu, spec);
  double lhs = h2_norm_sq(gm, spec) + gm_semi.value;

  double rhs = 16.0 * norm_gh + 18.0 * sup_h * sup_h * norm_g;
  rep.samples_lr.push_back({lhs, rhs});
  rep.tolerance = kIneqRelTol * std::max(1.0, rhs) + gm_semi.error +
                  16.0 * gh_semi.error + 18.0 * sup_h * sup_h * g_semi.error;
  rep.max_violation = lhs - rhs;
  rep.status = rep.max_violation <= rep.tolerance ? InequalityReport::Status::kPass
                                                  : InequalityReport::Status::kFail;
  {
    std::ostringstream os;
    os << "norms: lhs = " << lhs << ", ||gh||^2 = " << norm_gh << ", ||g||^2 = " << norm_g
       << ", sup|h| = " << sup_h;
    rep.notes.push_back(os.str());
  }
  return rep;
}

InequalityReport verify_gn_bound(const AnalyticFn& f, int n_max, const QuadratureSpec& spec,
                                 int radial_grid, int angular_grid, double r_max) {
  spec.validate();
  if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  if (radial_grid < 2 || angular_grid < 1) throw std::invalid_argument("grid too small");

  cplx f0 = f.value(0.0);
  if (!(f0.real() > 0.0) || std::abs(f0.imag()) > 1e-10 * std::abs(f0))
    throw std::invalid_argument("bound requires f(0) real and positive");
  const double f0r = f0.real();

  IterLogTable table = compute_M(n_max, 4.0 * f0r);

  InequalityReport rep;
  rep.lemma = "herglotz-iterlog-bound";
  {
    std::ostringstream os;
    os << radial_grid << "x" << angular_grid << " polar grid up to |z| = " << r_max
       << ", n <= " << n_max << ", M_0 = " << 4.0 * f0r;
    rep.sample_description = os.str();
  }

  std::vector<double> worst_lhs(n_max + 2, 0.0), worst_rhs(n_max + 2, 0.0);
  std::vector<double> worst_gap(n_max + 2, -1e300);
  double max_rhs_scale = 1.0;
  for (int i = 0; i < radial_grid; ++i) {
    double one_minus_r = std::pow(1.0 - r_max, static_cast<double>(i) / (radial_grid - 1));
    double r = 1.0 - one_minus_r;
    for (int j = 0; j < angular_grid; ++j) {
      cplx z = std::polar(r, kTwoPi * (j + 0.5) / angular_grid);
      cplx fz = f.value(z);
      if (!(fz.real() > 0.0)) {
        std::ostringstream os;
        os << "Re f <= 0 at z = (" << z.real() << ", " << z.imag() << ")";
        throw std::invalid_argument(os.str());
      }
      double r2 = std::norm(z);
      for (int n = 0; n <= n_max; ++n) {
        double lhs = std::abs(iterlog(n, fz));
        double rhs = kPi / 2.0 + table.M[n] * iterlog_majorant(n, r2);
        max_rhs_scale = std::max(max_rhs_scale, rhs);
        if (lhs - rhs > worst_gap[n]) {
          worst_gap[n] = lhs - rhs;
          worst_lhs[n] = lhs;
          worst_rhs[n] = rhs;
        }
      }
      // growth bound from the boundary-measure representation
      double lhs = std::abs(fz);
      double rhs = 4.0 * f0r / (1.0 - r2);
      if (lhs - rhs > worst_gap[n_max + 1]) {
        worst_gap[n_max + 1] = lhs - rhs;
        worst_lhs[n_max + 1] = lhs;
        worst_rhs[n_max + 1] = rhs;
      }
    }
  }

  rep.max_violation = -1e300;
  for (int k = 0; k < static_cast<int>(worst_gap.size()); ++k) {
    rep.samples_lr.push_back({worst_lhs[k], worst_rhs[k]});
    rep.max_violation = std::max(rep.max_violation, worst_gap[k]);
  }
  rep.notes.push_back("last sample row is the growth bound |f| <= 4 f(0) / (1 - |z|^2)");
  rep.tolerance = 1e-9 * max_rhs_scale + 1e-12;
  rep.status = rep.max_violation <= rep.tolerance ? InequalityReport::Status::kPass
                                                  : InequalityReport::Status::kFail;
  return rep;
}

}  // namespace dmu

#pragma once

#include <array>
#include <string>
#include <vector>

#include "dmu/dirichlet.hpp"
#include "dmu/function.hpp"
#include "dmu/iterlog.hpp"
#include "dmu/measure.hpp"
#include "dmu/outer.hpp"

namespace dmu {

enum class Verdict { kSufficientCyclic, kInconclusive, kDivergentEvidence };

std::string to_string(Verdict v);

struct Precondition {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct NamedQuantity {
  std::string name;
  double value = 0.0;
  TailProfile tail;
};

/// Outcome of a cyclicity sufficiency test. SUFFICIENT_CYCLIC is only issued
/// when every precondition passed and the decisive tails are CONVERGENT; the
/// tests are one-sided, so a negative outcome is evidence, never a proof of
/// non-cyclicity.
struct Certificate {
  Verdict verdict = Verdict::kInconclusive;
  std::string rule;  ///< "log-membership", "iterated-log-membership", "derivative-growth"
  std::vector<Precondition> preconditions;
  std::vector<NamedQuantity> quantities;
  bool membership_certified = false;     ///< derivative-growth route: g (G_n o log 1/g) in D(mu)
  bool equivalence_list_applies = false; ///< growth route conclusion flag
  std::string detail;

  bool preconditions_ok() const;
};

/// Sufficiency via log g in D(mu): requires g outer and zero-free; checks the
/// H^2 tail and the weighted energy tail of log g.
Certificate certify_log(const AnalyticFn& g, const CircleMeasure& mu,
                        const QuadratureSpec& spec);

/// Sufficiency via G_n(log 1/g) in D(mu) for bounded-by-1 outer g; the decisive
/// integrand is |G_n'(log 1/g)|^2 |g'/g|^2 P_mu via the chain rule. n = 0
/// reduces to the log route.
Certificate certify_iterlog(const AnalyticFn& g, const CircleMeasure& mu, int n,
                            const QuadratureSpec& spec);

/// Derivative growth test: finiteness of int |g'|^2 |G_n(1/(1-|z|^2))|^2 dA
/// certifies g (G_n o log 1/g) in D(mu) and that the equivalence list applies
/// to g. Not a cyclicity verdict by itself.
Certificate certify_growth(const AnalyticFn& g, int n, const QuadratureSpec& spec);

/// Same with an injected |g'|^2 surrogate (shared tail machinery; used to
/// exercise the classifier on closed-form profiles).
TailProfile growth_tail(const DiscIntegrand& deriv_sq, int n, const QuadratureSpec& spec,
                        const std::vector<double>& concentration_angles = {});

struct InequalityReport {
  enum class Status { kPass, kFail, kSkip };

  std::string lemma;
  std::string sample_description;
  Status status = Status::kSkip;
  std::vector<std::array<double, 2>> samples_lr;  ///< (lhs, rhs) per sample
  double max_violation = 0.0;  ///< max over samples of lhs - rhs (negative = satisfied)
  double tolerance = 0.0;
  std::vector<std::string> notes;

  bool passed() const { return status == Status::kPass; }
  bool skipped() const { return status == Status::kSkip; }
};

std::string to_string(InequalityReport::Status s);

/// D_zeta(g h1) <= 4c D_zeta(g h2) + (2 + 4c) ||h2||_inf^2 D_zeta(g), under the
/// hypotheses ||h1||_inf <= ||h2||_inf and D_zeta(h1) <= c D_zeta(h2).
/// Hypothesis failures yield SKIP, not FAIL.
InequalityReport verify_h1h2(const HoloFn& g, const HoloFn& h1, const HoloFn& h2,
                             const cplx& zeta, double c, const QuadratureSpec& spec);

/// Cut-off bound D_zeta(h wedge n h^2) <= 4 D_zeta(h) for outer h.
InequalityReport verify_cutoff(const AnalyticFn& h, const cplx& zeta, double n,
                               const QuadratureSpec& spec);
InequalityReport verify_cutoff(const OuterFn& h, const cplx& zeta, double n,
                               const QuadratureSpec& spec);

/// Norm bound ||g (h wedge n h^2)||_mu^2 <= 16 ||g h||_mu^2 + 18 ||h||_inf^2 ||g||_mu^2.
InequalityReport verify_norm_ineq(const AnalyticFn& g, const AnalyticFn& h,
                                  const CircleMeasure& mu, double n,
                                  const QuadratureSpec& spec);

/// Pointwise bound |G_n(f(z))| <= pi/2 + M_n F_n(|z|^2) for functions with
/// positive real part and f(0) > 0, with M_0 = 4 f(0); also checks the growth
/// bound |f(z)| <= 4 f(0) / (1 - |z|^2).
InequalityReport verify_gn_bound(const AnalyticFn& f, int n_max, const QuadratureSpec& spec,
                                 int radial_grid = 100, int angular_grid = 100,
                                 double r_max = 1.0 - 1e-6);

}  // namespace dmu

#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace dmu {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Grid and tolerance parameters shared by all integrals.
struct QuadratureSpec {
  int angular_nodes = 512;          ///< base angular resolution for circle integrals
  int radial_levels = 40;           ///< geometric annuli filling the disc
  double refinement_factor = 0.5;   ///< ratio of (1 - r) between consecutive annulus edges
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  double singular_exclusion = 1e-3; ///< initial angular half-width excluded around singular angles
  int tail_annuli = 24;             ///< dyadic annuli used for tail profiling

  void validate() const;  // throws std::invalid_argument on bad parameters
};

enum class TailVerdict { kConvergent, kDivergent, kInconclusive };

std::string to_string(TailVerdict v);

/// Dyadic-annulus decomposition of a disc integral near |z| = 1 together with
/// a ratio-test classification of the tail.
///
/// a_k is the integral over {1 - 2^-k <= |z| < 1 - 2^-(k-1)} ... indices follow
/// annulus_integrals[i] = integral over {1 - 2^-(i+1) <= |z| < 1 - 2^-(i+2)}.
/// The verdict looks at the ratios a_{k+1}/a_k over the trailing window:
/// all ratios <= kRatioConvergent   -> CONVERGENT,
/// all ratios >= kRatioDivergent or non-decaying -> DIVERGENT,
/// anything in between             -> INCONCLUSIVE.
struct TailProfile {
  std::vector<double> annulus_integrals;
  TailVerdict verdict = TailVerdict::kInconclusive;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double ratio_mean = 0.0;
  double tail_estimate = 0.0;  ///< geometric tail sum estimate when convergent
  int window = 8;
  std::string note;

  bool convergent() const { return verdict == TailVerdict::kConvergent; }
  bool divergent() const { return verdict == TailVerdict::kDivergent; }
};

/// Ratio thresholds for the tail classifier.
inline constexpr double kRatioConvergent = 0.97;
inline constexpr double kRatioDivergent = 0.99;

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;  ///< false marks an INCONCLUSIVE computation
  std::string note;
};

using DiscIntegrand = std::function<double(const cplx&)>;
using CircleIntegrand = std::function<double(double)>;

/// Area integral over the unit disc of a real integrand (no 1/pi factor).
///
/// Polar tensor quadrature: annuli with geometrically clustered radial edges
/// r_k = 1 - refinement_factor^k, Gauss-Legendre in r and in graded angular
/// panels. `concentration_angles` are boundary angles toward which the
/// integrand concentrates at scale 1 - |z| (Poisson-kernel peaks, boundary
/// zeros); panels are graded geometrically toward them. The missing mass
/// beyond the last annulus is estimated by geometric extrapolation of the
/// annulus sums and folded into value and error estimate.
IntegralResult disc_integral(const DiscIntegrand& F, const QuadratureSpec& spec,
                             const std::vector<double>& concentration_angles = {});

/// Per-annulus integrals of F for levels k = 0..levels-1 over
/// {1 - ratio^k <= |z| < 1 - ratio^(k+1)}.
std::vector<double> annulus_integrals(const DiscIntegrand& F, int levels, double ratio,
                                      const QuadratureSpec& spec,
                                      const std::vector<double>& concentration_angles = {});

/// Dyadic decomposition with value, error and tail classification in one pass:
/// the workhorse behind the weighted Dirichlet energies. Levels use ratio 1/2;
/// level 0 covers the disc core and is excluded from the tail profile.
struct AnnuliResult {
  std::vector<double> levels;
  double value = 0.0;   ///< sum of levels plus geometric tail estimate
  double error = 0.0;
  bool tail_bounded = true;
  TailProfile profile;
};

AnnuliResult disc_annuli(const DiscIntegrand& F, const QuadratureSpec& spec,
                         const std::vector<double>& concentration_angles = {},
                         int levels = 0);

/// Integral of F(theta) over [0, 2pi) (no 1/2pi factor).
///
/// Composite Gauss-Legendre panels graded toward each singular angle, with a
/// symmetric exclusion window around each that shrinks geometrically until the
/// value stabilizes or the window floor is reached. The bound on the excluded
/// mass is added to the error estimate. Failure to stabilize is reported with
/// converged = false rather than as a value.
IntegralResult circle_integral(const CircleIntegrand& F,
                               const std::vector<double>& singular_angles,
                               const QuadratureSpec& spec);

/// Dyadic tail decomposition of a nonnegative disc integrand with the
/// ratio-test classification described on TailProfile.
TailProfile tail_profile(const DiscIntegrand& F, const QuadratureSpec& spec,
                         const std::vector<double>& concentration_angles = {});

/// Classify an already-computed nonnegative annulus sequence.
TailProfile classify_tail(std::vector<double> annulus_values, int window = 8);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

}  // namespace dmu

#pragma once

#include <string>
#include <vector>

#include "dmu/function.hpp"
#include "dmu/quadrature.hpp"

namespace dmu {

/// Boundary factor |1 - e^{i(t-angle)}|^alpha of an outer function: a zero
/// (alpha > 0) or pole-like spike (alpha < 0) of the boundary modulus. Its
/// analytic completion is alpha * log(1 - z e^{-i angle}), which the evaluator
/// uses in closed form.
struct BoundaryFactor {
  double angle = 0.0;
  double alpha = 0.0;
};

/// Outer function represented by sampled boundary log-modulus.
///
/// The samples live on the offset grid t_j = 2 pi (j + 1/2) / N with N a power
/// of two. Logarithmic boundary singularities are detected (or hinted), fitted
/// as BoundaryFactor components and subtracted; the analytic completion of the
/// smooth residual comes from its Fourier coefficients. The value at 0 equals
/// exp of the boundary mean of the represented log-modulus, so the function is
/// outer by construction.
class OuterFn : public HoloFn {
 public:
  OuterFn() = default;

  cplx value(const cplx& z) const override;
  cplx derivative(const cplx& z) const override;

  /// Analytic completion u(z) with Re u = boundary log-modulus; f = exp(u).
  cplx log_value(const cplx& z) const;
  cplx log_derivative(const cplx& z) const;

  /// Boundary log-modulus of the representation at any angle.
  double boundary_log_modulus(double t) const;
  std::vector<double> boundary_log_modulus_grid(int n) const;

  /// Boundary mean of the represented log-modulus; value(0) = exp of this.
  double mean_log_modulus() const;

  int grid_size() const { return n_; }
  const std::vector<double>& raw_samples() const { return samples_; }
  const std::vector<BoundaryFactor>& factors() const { return factors_; }
  const std::vector<cplx>& residual_coefficients() const { return coeff_; }

  std::vector<double> boundary_singular_angles() const override;
  std::vector<double> concentration_angles() const override;

  friend OuterFn outer_from_log_modulus(const std::vector<double>& samples,
                                        const std::vector<double>& hint_angles);
  friend OuterFn outer_min(const OuterFn& f, const OuterFn& g);
  friend OuterFn outer_power_scale(const OuterFn& h, double power, double log_factor);

 private:
  void eval_log(const cplx& z, bool need_deriv, cplx* u, cplx* du) const;
  void rebuild_eval_state();

  int n_ = 0;
  std::vector<double> samples_;           // raw input samples on the offset grid
  std::vector<BoundaryFactor> factors_;
  std::vector<cplx> coeff_;               // residual coefficients c_k, k = 0..K
  std::vector<double> cre_, cim_;         // split copies of coeff_ (hot loop)
  std::vector<double> suffix_abs_;        // sum_{j>=k} 2|c_j| (value truncation)
  std::vector<double> suffix_abs_deriv_;  // sum_{j>=k} 2 j |c_j|
  std::vector<double> kinks_;             // crossing angles from outer_min
};

/// Build an outer function from uniform samples of the boundary log-modulus
/// (offset grid, length a power of two). `hint_angles` marks known boundary
/// singularities; further ones are auto-detected from the samples.
OuterFn outer_from_log_modulus(const std::vector<double>& samples,
                               const std::vector<double>& hint_angles = {});

/// Sample the boundary log-modulus of f by radial extrapolation toward |z| = 1
/// and build the outer function with the same boundary modulus. The singular
/// angles declared by f seed the factor fit.
OuterFn to_outer(const HoloFn& f, const QuadratureSpec& spec, int grid_size = 4096);

/// Outer function with boundary modulus min(|f|, |g|) pointwise, computed on
/// the common refinement of the two grids.
OuterFn outer_min(const OuterFn& f, const OuterFn& g);
OuterFn outer_min(const HoloFn& f, const HoloFn& g, const QuadratureSpec& spec);

/// Outer function with log-modulus  power * log|h| + log_factor  (exact
/// transform of the representation; e.g. n h^2 has power 2, log_factor log n).
OuterFn outer_power_scale(const OuterFn& h, double power, double log_factor);

/// h wedge (n h^2): the cut-off minimum used throughout the certificates.
OuterFn cutoff_min(const OuterFn& h, double n);

struct OuterCheck {
  bool outer = false;
  double log_value_at_zero = 0.0;
  double boundary_mean = 0.0;
  double deviation = 0.0;
  std::string reason;
};

/// Outer test: compares log|f(0)| with the boundary mean of log|f| obtained by
/// radial (Richardson) extrapolation on an offset angular grid.
OuterCheck is_outer(const HoloFn& f, double tol, const QuadratureSpec& spec);

}  // namespace dmu

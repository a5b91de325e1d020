#pragma once

#include <string>
#include <vector>

#include "dmu/function.hpp"
#include "dmu/measure.hpp"
#include "dmu/quadrature.hpp"

namespace dmu {

/// Local Dirichlet integral D_zeta(f) at a boundary point, in both forms:
/// the weighted area integral
///   D_zeta(f) = int_{|w|<1} |f'(w)|^2 (1-|w|^2)/|1 - conj(zeta) w|^2 dA(w)/pi
/// and the boundary difference-quotient integral
///   int |f(e^{it}) - f(zeta)|^2 / |e^{it} - zeta|^2 dt / (2 pi),
/// which agree whenever the radial limit f(zeta) exists.
struct LocalDirichletResult {
  double area_value = 0.0;
  bool area_divergent = false;     ///< tail classified DIVERGENT: treat as +infinity
  TailProfile area_tail;
  double area_error = 0.0;

  bool boundary_available = false; ///< radial limit stable enough to form the quotient
  bool boundary_converged = false;
  double boundary_value = 0.0;
  double boundary_error = 0.0;

  double discrepancy = 0.0;        ///< |area - boundary| when both are usable
  cplx boundary_point{};
  cplx limit_value_used{};         ///< extrapolated f(zeta)
  double limit_residual = 0.0;
  std::string note;
};

/// H^2 norm squared: mean of |f(r e^{it})|^2 extrapolated r -> 1.
double h2_norm_sq(const HoloFn& f, const QuadratureSpec& spec);

/// Circle means of |f|^2 at the dyadic radii 1 - 2^-k, k = 1..levels
/// (growth diagnostics for H^2 membership).
std::vector<double> h2_radial_means(const HoloFn& f, int levels, const QuadratureSpec& spec);

/// Classification of H^2 membership from the increments of the radial means.
TailProfile h2_tail(const HoloFn& f, const QuadratureSpec& spec);

struct SeminormResult {
  double value = 0.0;
  TailProfile tail;       ///< combined dyadic profile of the weighted energy
  double error = 0.0;
};

/// int_D |f'|^2 P_mu dA / pi. Atoms are integrated through the local Dirichlet
/// area engine (exact angular treatment of each Poisson peak); the density
/// part uses the smooth Poisson weight directly.
double dmu_seminorm_sq(const HoloFn& f, const CircleMeasure& mu, const QuadratureSpec& spec);
SeminormResult dmu_seminorm(const HoloFn& f, const CircleMeasure& mu, const QuadratureSpec& spec);

/// int_D deriv_sq(z) P_mu(z) dA / pi with the combined dyadic tail; the
/// seminorm is this with deriv_sq = |f'|^2, and the certificate routes feed it
/// chain-rule integrands directly.
SeminormResult weighted_energy(const DiscIntegrand& deriv_sq, const CircleMeasure& mu,
                               const QuadratureSpec& spec,
                               const std::vector<double>& concentration_angles);

/// ||f||_mu^2 = ||f||_{H^2}^2 + seminorm.
double dmu_norm_sq(const HoloFn& f, const CircleMeasure& mu, const QuadratureSpec& spec);

/// Weighted area form of D_zeta(f); the dyadic tail profile is attached.
double local_dirichlet_area(const HoloFn& f, const cplx& zeta, const QuadratureSpec& spec,
                            TailProfile* tail = nullptr, double* error = nullptr);

/// Both forms with discrepancy diagnostics.
LocalDirichletResult local_dirichlet_boundary(const HoloFn& f, const cplx& zeta,
                                              const QuadratureSpec& spec);

/// Preferred finite value for inequality checks: the boundary form when the
/// radial limit is stable, otherwise the area form. `finite` reports whether
/// the integral is numerically finite (tail not DIVERGENT, quotient stable).
double local_dirichlet_value(const HoloFn& f, const cplx& zeta, const QuadratureSpec& spec,
                             bool* finite = nullptr, double* error = nullptr);

}  // namespace dmu

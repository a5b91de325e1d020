#pragma once

#include <string>
#include <vector>

#include "dmu/quadrature.hpp"

namespace dmu {

/// Iterated logarithms on the closed right half-plane:
/// G_0(z) = z, G_{n+1}(z) = log(1 + G_n(z)) with principal branches.
/// Values have nonnegative real part there, and |G_n'| <= 1 for Re z > 0.
cplx iterlog(int n, const cplx& z);

/// G_n'(z) = prod_{k=0}^{n-1} 1 / (1 + G_k(z)).
cplx iterlog_deriv(int n, const cplx& z);

/// Real majorant F_n(r) = G_n(1 / (1 - r)) on [0, 1): positive, increasing in
/// r, decreasing in n.
double iterlog_majorant(int n, double r);

/// Constants M_n of the majorant recursion
///   M_n = sup_{x >= F_n(0)} log(1 + pi/2 + M_{n-1} x) / log(1 + x),
/// computed by a coarse log-spaced scan plus golden-section refinement. The
/// implied inequality log(1 + pi/2 + M_{n-1} F_{n-1}(r)) <= M_n F_n(r) is
/// re-validated on an r-grid; failure throws with diagnostics.
struct IterLogTable {
  int n_max = 0;
  double m0 = 0.0;
  std::vector<double> M;             ///< M_0..M_{n_max}
  std::vector<double> sup_location;  ///< x where each sup was attained (x = 0 for M_0)
};

IterLogTable compute_M(int n_max, double m0);

/// sup over [lo, infinity) of log(1 + pi/2 + m_prev x)/log(1 + x); the ratio
/// tends to 1 at infinity, so the scan is truncated at `x_cap`.
double majorant_sup(double m_prev, double lo, double* arg_at_sup = nullptr,
                    double x_cap = 1e6);

/// Finite area of G_2 over the right half-plane after the change of variables
/// w = G_1(z):  int_0^inf int_{-pi/2}^{pi/2} dx dy / ((1+x)^2 + y^2).
double g2_halfplane_area();

/// One row of the iterated-logarithm curve table: G_2, G_3, G_4 at z = i t.
struct IterLogCurveRow {
  double t = 0.0;
  cplx g2{}, g3{}, g4{};
  bool step_bound_ok = false;  ///< |G_{n+1}(it)| <= log(1 + |G_n(it)|) + pi/2 for n = 1, 2, 3
};

/// Log-spaced sample rows for t in [t_min, t_max].
std::vector<IterLogCurveRow> iterlog_curves(int count, double t_min = 1e-4,
                                            double t_max = 1e4);

/// CSV serialization of the curve table (17 significant digits, deterministic).
std::string iterlog_curves_csv(const std::vector<IterLogCurveRow>& rows);

}  // namespace dmu

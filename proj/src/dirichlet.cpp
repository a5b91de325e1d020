#include "dmu/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dmu {

namespace {

constexpr double kBoundaryEps = 1e-7;
constexpr double kLimitResidualThreshold = 1e-5;

// Richardson extrapolation of f toward the boundary point r -> 1.
cplx boundary_value(const HoloFn& f, double t, double eps = kBoundaryEps) {
  cplx v1 = f.value(std::polar(1.0 - eps, t));
  cplx v2 = f.value(std::polar(1.0 - 0.5 * eps, t));
  return 2.0 * v2 - v1;
}

double circle_mean_sq(const HoloFn& f, double r, const std::vector<double>& sing,
                      const QuadratureSpec& spec, bool* converged, double* error) {
  auto res = circle_integral(
      [&](double t) { return std::norm(f.value(std::polar(r, t))); }, sing, spec);
  if (converged) *converged = res.converged;
  if (error) *error = res.error_estimate / kTwoPi;
  return res.value / kTwoPi;
}

}  // namespace

double h2_norm_sq(const HoloFn& f, const QuadratureSpec& spec) {
  spec.validate();
  auto sing = f.boundary_singular_angles();
  const double eps = 1e-4;
  double m1 = circle_mean_sq(f, 1.0 - eps, sing, spec, nullptr, nullptr);
  double m2 = circle_mean_sq(f, 1.0 - 0.5 * eps, sing, spec, nullptr, nullptr);
  return 2.0 * m2 - m1;
}

std::vector<double> h2_radial_means(const HoloFn& f, int levels, const QuadratureSpec& spec) {
  spec.validate();
  const int n = std::max(spec.angular_nodes, 4096);
  std::vector<double> means;
  means.reserve(levels);
  for (int k = 1; k <= levels; ++k) {
    double r = 1.0 - std::pow(0.5, k);
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      double t = kTwoPi * (j + 0.5) / n;
      acc += std::norm(f.value(std::polar(r, t)));
    }
    means.push_back(acc / n);
  }
  return means;
}

TailProfile h2_tail(const HoloFn& f, const QuadratureSpec& spec) {
  const int levels = 12;
  auto means = h2_radial_means(f, levels, spec);
  std::vector<double> inc;
  for (size_t k = 0; k + 1 < means.size(); ++k)
    inc.push_back(std::max(0.0, means[k + 1] - means[k]));
  // short-circuit: means already flat to rounding
  double final_mean = means.back();
  double late_growth = final_mean - means[means.size() / 2];
  if (late_growth <= std::max(spec.abs_tol, 1e-9 * (1.0 + std::abs(final_mean)))) {
    TailProfile tp;
    tp.annulus_integrals = std::move(inc);
    tp.verdict = TailVerdict::kConvergent;
    tp.note = "radial means stabilized";
    return tp;
  }
  auto tp = classify_tail(std::move(inc), 6);
  return tp;
}

double local_dirichlet_area(const HoloFn& f, const cplx& zeta, const QuadratureSpec& spec,
                            TailProfile* tail, double* error) {
  spec.validate();
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12)
    throw std::invalid_argument("local Dirichlet integral requires |zeta| = 1");
  const cplx zc = std::conj(zeta);
  auto conc = merge_angles(f.concentration_angles(), {std::arg(zeta)});
  auto F = [&](const cplx& z) {
    double w = (1.0 - std::norm(z)) / std::norm(1.0 - zc * z);
    return std::norm(f.derivative(z)) * w;
  };
  auto res = disc_annuli(F, spec, conc);
  if (tail) *tail = res.profile;
  if (error) *error = res.error / kPi;
  return res.value / kPi;
}

LocalDirichletResult local_dirichlet_boundary(const HoloFn& f, const cplx& zeta,
                                              const QuadratureSpec& spec) {
  spec.validate();
  if (std::abs(std::abs(zeta) - 1.0) > 1e-12)
    throw std::invalid_argument("local Dirichlet integral requires |zeta| = 1");
  LocalDirichletResult out;
  out.boundary_point = zeta;

  out.area_value = local_dirichlet_area(f, zeta, spec, &out.area_tail, &out.area_error);
  out.area_divergent = out.area_tail.divergent();

  // radial limit at zeta with a Richardson-difference residual
  const double tz = std::arg(zeta);
  const double eps = kBoundaryEps;
  cplx v1 = f.value(std::polar(1.0 - eps, tz));
  cplx v2 = f.value(std::polar(1.0 - 0.5 * eps, tz));
  cplx v3 = f.value(std::polar(1.0 - 0.25 * eps, tz));
  cplx extr1 = 2.0 * v2 - v1;
  cplx extr2 = 2.0 * v3 - v2;
  out.limit_value_used = extr2;
  out.limit_residual = std::abs(extr2 - extr1);
  out.boundary_available =
      out.limit_residual <= kLimitResidualThreshold * std::max(1.0, std::abs(extr2));
  if (!out.boundary_available) {
    out.note = "radial limit at zeta did not stabilize; boundary form unavailable";
    return out;
  }

  const cplx fz = out.limit_value_used;
  auto sing = merge_angles(f.boundary_singular_angles(), {tz});
  auto G = [&](double t) {
    cplx w = std::polar(1.0, t);
    cplx fb = boundary_value(f, t);
    return std::norm(fb - fz) / std::norm(w - zeta);
  };
  auto res = circle_integral(G, sing, spec);
  out.boundary_value = res.value / kTwoPi;
  out.boundary_error = res.error_estimate / kTwoPi;
  out.boundary_converged = res.converged;
  if (!res.converged) out.note = "boundary form did not stabilize: " + res.note;
  if (!out.area_divergent)
    out.discrepancy = std::abs(out.area_value - out.boundary_value);
  return out;
}

double local_dirichlet_value(const HoloFn& f, const cplx& zeta, const QuadratureSpec& spec,
                             bool* finite, double* error) {
  auto r = local_dirichlet_boundary(f, zeta, spec);
  bool bd_ok = r.boundary_available && r.boundary_converged;
  bool fin = r.area_divergent ? false : (bd_ok || r.area_tail.convergent());
  if (finite) *finite = fin;
  if (error) *error = bd_ok ? r.boundary_error : r.area_error;
  return bd_ok ? r.boundary_value : r.area_value;
}

SeminormResult weighted_energy(const DiscIntegrand& deriv_sq, const CircleMeasure& mu,
                               const QuadratureSpec& spec,
                               const std::vector<double>& concentration_angles) {
  spec.validate();
  SeminormResult out;
  const int levels = spec.tail_annuli + 1;
  std::vector<double> combined(levels, 0.0);

  // each atom contributes (mass / 2pi) times the local Dirichlet area integral
  for (const Atom& a : mu.atoms()) {
    if (a.mass <= 0.0) continue;
    const cplx zc = std::polar(1.0, -a.angle);
    auto conc = merge_angles(concentration_angles, {a.angle});
    auto F = [&](const cplx& z) {
      double w = (1.0 - std::norm(z)) / std::norm(1.0 - zc * z);
      return deriv_sq(z) * w;
    };
    auto res = disc_annuli(F, spec, conc, levels);
    double scale = a.mass / (kTwoPi * kPi);
    for (int k = 0; k < levels; ++k) combined[k] += scale * res.levels[k];
    out.value += scale * res.value;
    out.error += scale * res.error;
  }

  if (mu.has_density()) {
    auto F = [&](const cplx& z) { return deriv_sq(z) * mu.poisson_density(z); };
    auto res = disc_annuli(F, spec, concentration_angles, levels);
    for (int k = 0; k < levels; ++k) combined[k] += res.levels[k] / kPi;
    out.value += res.value / kPi;
    out.error += res.error / kPi;
  }

  std::vector<double> dyadic(combined.begin() + 1, combined.end());
  out.tail = classify_tail(std::move(dyadic));
  return out;
}

SeminormResult dmu_seminorm(const HoloFn& f, const CircleMeasure& mu,
                            const QuadratureSpec& spec) {
  return weighted_energy([&f](const cplx& z) { return std::norm(f.derivative(z)); }, mu,
                         spec, f.concentration_angles());
}

double dmu_seminorm_sq(const HoloFn& f, const CircleMeasure& mu, const QuadratureSpec& spec) {
  return dmu_seminorm(f, mu, spec).value;
}

double dmu_norm_sq(const HoloFn& f, const CircleMeasure& mu, const QuadratureSpec& spec) {
  return h2_norm_sq(f, spec) + dmu_seminorm_sq(f, mu, spec);
}

}  // namespace dmu

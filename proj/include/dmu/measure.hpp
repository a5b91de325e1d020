#pragma once

#include <string>
#include <vector>

#include "dmu/quadrature.hpp"

namespace dmu {

struct Atom {
  double angle = 0.0;  ///< radians in [0, 2pi)
  double mass = 0.0;   ///< nonnegative
};

/// Finite nonnegative Borel measure on the unit circle: point masses plus an
/// absolutely continuous part d(mu) = rho(t) dt. Presets use arc-length
/// normalization, so the Lebesgue preset has total mass 2*pi and Poisson
/// integral identically 1.
///
/// The density is held as a closed form (zero/constant/trigonometric
/// polynomial) or as uniform samples; either way the Poisson integral of the
/// density is evaluated through its Fourier coefficients, which keeps the
/// evaluation stable arbitrarily close to the boundary.
class CircleMeasure {
 public:
  enum class DensityKind { kZero, kConstant, kSamples, kTrigPoly };

  CircleMeasure() = default;

  static CircleMeasure zero();
  static CircleMeasure lebesgue();                              ///< density 1 (arc length)
  static CircleMeasure dirac(double angle, double mass = kTwoPi);
  static CircleMeasure from_atoms(std::vector<Atom> atoms);
  static CircleMeasure constant_density(double value, std::vector<Atom> atoms = {});
  /// Uniform samples of rho at t_j = 2*pi*j/N.
  static CircleMeasure sampled_density(std::vector<double> samples, std::vector<Atom> atoms = {});
  /// rho(t) = mean + sum_k cos_coeff[k-1] cos(k t) + sin_coeff[k-1] sin(k t).
  static CircleMeasure trig_poly_density(double mean, std::vector<double> cos_coeff,
                                         std::vector<double> sin_coeff,
                                         std::vector<Atom> atoms = {});

  const std::vector<Atom>& atoms() const { return atoms_; }
  DensityKind density_kind() const { return kind_; }
  double constant_value() const { return constant_; }
  const std::vector<double>& density_samples() const { return samples_; }
  bool has_density() const;
  bool is_zero() const;
  std::string mass_convention() const { return "arc-length"; }

  double density_value(double t) const;

  /// Atom sum plus density integral.
  double total_mass() const;

  /// Poisson integral P_mu(z) for |z| < 1; strictly positive when mu != 0.
  double poisson(const cplx& z) const;

  /// Poisson integral of the density part alone (atoms excluded).
  double poisson_density(const cplx& z) const;

  /// Angles of the atoms (quadrature concentration hints).
  std::vector<double> atom_angles() const;

  /// Pointwise sum and nonnegative scaling (test and composition helpers).
  friend CircleMeasure operator+(const CircleMeasure& a, const CircleMeasure& b);
  CircleMeasure scaled(double factor) const;

 private:
  void validate_and_build();

  std::vector<Atom> atoms_;
  DensityKind kind_ = DensityKind::kZero;
  double constant_ = 0.0;
  std::vector<double> samples_;
  std::vector<cplx> fourier_;  ///< rho_hat_k = (1/2pi) int rho e^{-ikt} dt, k = 0..K
};

/// P_mu(z) = int (1-|z|^2)/|1 - z conj(w)|^2 dmu(w) / (2 pi), |z| < 1.
double poisson_integral(const CircleMeasure& mu, const cplx& z, const QuadratureSpec& spec);

double total_mass(const CircleMeasure& mu, const QuadratureSpec& spec);

}  // namespace dmu

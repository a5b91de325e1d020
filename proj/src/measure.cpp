#include "dmu/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dmu {

namespace {

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

}  // namespace

CircleMeasure CircleMeasure::zero() { return CircleMeasure(); }

CircleMeasure CircleMeasure::lebesgue() { return constant_density(1.0); }

CircleMeasure CircleMeasure::dirac(double angle, double mass) {
  return from_atoms({{wrap_angle(angle), mass}});
}

CircleMeasure CircleMeasure::from_atoms(std::vector<Atom> atoms) {
  CircleMeasure mu;
  mu.atoms_ = std::move(atoms);
  mu.kind_ = DensityKind::kZero;
  mu.validate_and_build();
  return mu;
}

CircleMeasure CircleMeasure::constant_density(double value, std::vector<Atom> atoms) {
  CircleMeasure mu;
  mu.atoms_ = std::move(atoms);
  mu.kind_ = DensityKind::kConstant;
  mu.constant_ = value;
  mu.validate_and_build();
  return mu;
}

CircleMeasure CircleMeasure::sampled_density(std::vector<double> samples,
                                             std::vector<Atom> atoms) {
  CircleMeasure mu;
  mu.atoms_ = std::move(atoms);
  mu.kind_ = DensityKind::kSamples;
  mu.samples_ = std::move(samples);
  mu.validate_and_build();
  return mu;
}

CircleMeasure CircleMeasure::trig_poly_density(double mean, std::vector<double> cos_coeff,
                                               std::vector<double> sin_coeff,
                                               std::vector<Atom> atoms) {
  CircleMeasure mu;
  mu.atoms_ = std::move(atoms);
  mu.kind_ = DensityKind::kTrigPoly;
  size_t k = std::max(cos_coeff.size(), sin_coeff.size());
  mu.fourier_.assign(k + 1, cplx{});
  mu.fourier_[0] = mean;
  for (size_t i = 0; i < k; ++i) {
    double a = i < cos_coeff.size() ? cos_coeff[i] : 0.0;
    double b = i < sin_coeff.size() ? sin_coeff[i] : 0.0;
    // a cos(kt) + b sin(kt) = 2 Re[ rho_hat_k e^{ikt} ], rho_hat_k = (a - i b)/2
    mu.fourier_[i + 1] = cplx(0.5 * a, -0.5 * b);
  }
  mu.validate_and_build();
  return mu;
}

void CircleMeasure::validate_and_build() {
  for (const Atom& a : atoms_) {
    if (!(a.mass >= 0.0) || !std::isfinite(a.mass))
      throw std::invalid_argument("measure: atom masses must be finite and nonnegative");
    if (!std::isfinite(a.angle)) throw std::invalid_argument("measure: atom angle not finite");
  }
  for (Atom& a : atoms_) a.angle = wrap_angle(a.angle);

  switch (kind_) {
    case DensityKind::kZero:
      break;
    case DensityKind::kConstant:
      if (!(constant_ >= 0.0) || !std::isfinite(constant_))
        throw std::invalid_argument("measure: density must be finite and nonnegative");
      fourier_.assign(1, cplx(constant_, 0.0));
      break;
    case DensityKind::kSamples: {
      if (samples_.empty()) throw std::invalid_argument("measure: empty density samples");
      for (double s : samples_)
        if (!(s >= 0.0) || !std::isfinite(s))
          throw std::invalid_argument("measure: density samples must be finite and nonnegative");
      // rho_hat_k from the sample DFT; the represented density is the
      // trigonometric interpolant of the samples
      const size_t n = samples_.size();
      const size_t kmax = n / 2;
      fourier_.assign(kmax + 1, cplx{});
      for (size_t k = 0; k <= kmax; ++k) {
        cplx acc = 0.0;
        for (size_t j = 0; j < n; ++j) {
          double t = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
          acc += samples_[j] * std::polar(1.0, -static_cast<double>(k) * t);
        }
        fourier_[k] = acc / static_cast<double>(n);
      }
      break;
    }
    case DensityKind::kTrigPoly: {
      // nonnegativity checked on a fine grid
      const int n = 4096;
      for (int j = 0; j < n; ++j) {
        double v = density_value(kTwoPi * j / n);
        if (v < -1e-12 * (1.0 + std::abs(fourier_[0].real())))
          throw std::invalid_argument("measure: trig-poly density is negative");
      }
      break;
    }
  }
  double m = total_mass();
  if (!std::isfinite(m)) throw std::invalid_argument("measure: total mass not finite");
}

bool CircleMeasure::has_density() const {
  if (kind_ == DensityKind::kZero) return false;
  if (kind_ == DensityKind::kConstant) return constant_ > 0.0;
  return true;
}

bool CircleMeasure::is_zero() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.mass;
  return !has_density() && m <= 0.0;
}

double CircleMeasure::density_value(double t) const {
  switch (kind_) {
    case DensityKind::kZero:
      return 0.0;
    case DensityKind::kConstant:
      return constant_;
    case DensityKind::kSamples:
    case DensityKind::kTrigPoly: {
      double v = fourier_.empty() ? 0.0 : fourier_[0].real();
      for (size_t k = 1; k < fourier_.size(); ++k)
        v += 2.0 * (fourier_[k] * std::polar(1.0, static_cast<double>(k) * t)).real();
      return v;
    }
  }
  return 0.0;
}

double CircleMeasure::total_mass() const {
  double m = 0.0;
  for (const Atom& a : atoms_) m += a.mass;
  if (kind_ == DensityKind::kConstant) {
    m += kTwoPi * constant_;
  } else if (!fourier_.empty() && kind_ != DensityKind::kZero) {
    m += kTwoPi * fourier_[0].real();
  }
  return m;
}

double CircleMeasure::poisson_density(const cplx& z) const {
  if (!has_density()) return 0.0;
  if (kind_ == DensityKind::kConstant) return constant_;
  // P(z) = rho_hat_0 + 2 Re sum_k rho_hat_k z^k
  cplx acc = 0.0;
  cplx zk = 1.0;
  for (size_t k = 1; k < fourier_.size(); ++k) {
    zk *= z;
    acc += fourier_[k] * zk;
  }
  return fourier_.empty() ? 0.0 : fourier_[0].real() + 2.0 * acc.real();
}

double CircleMeasure::poisson(const cplx& z) const {
  double r2 = std::norm(z);
  if (r2 >= 1.0) throw std::domain_error("poisson integral requires |z| < 1");
  double v = poisson_density(z);
  for (const Atom& a : atoms_) {
    if (a.mass == 0.0) continue;
    cplx d = 1.0 - z * std::polar(1.0, -a.angle);
    v += a.mass / kTwoPi * (1.0 - r2) / std::norm(d);
  }
  return v;
}

std::vector<double> CircleMeasure::atom_angles() const {
  std::vector<double> out;
  out.reserve(atoms_.size());
  for (const Atom& a : atoms_)
    if (a.mass > 0.0) out.push_back(a.angle);
  return out;
}

CircleMeasure operator+(const CircleMeasure& a, const CircleMeasure& b) {
  std::vector<Atom> atoms = a.atoms_;
  atoms.insert(atoms.end(), b.atoms_.begin(), b.atoms_.end());
  if (!a.has_density() && !b.has_density()) return CircleMeasure::from_atoms(std::move(atoms));
  if (a.kind_ == CircleMeasure::DensityKind::kConstant &&
      b.kind_ == CircleMeasure::DensityKind::kConstant)
    return CircleMeasure::constant_density(a.constant_ + b.constant_, std::move(atoms));
  // general case: sample both densities on a common grid
  const int n = 2048;
  std::vector<double> samples(n);
  for (int j = 0; j < n; ++j) {
    double t = kTwoPi * j / n;
    samples[j] = std::max(0.0, a.density_value(t) + b.density_value(t));
  }
  return CircleMeasure::sampled_density(std::move(samples), std::move(atoms));
}

CircleMeasure CircleMeasure::scaled(double factor) const {
  if (!(factor >= 0.0)) throw std::invalid_argument("measure scaling must be nonnegative");
  CircleMeasure mu = *this;
  for (Atom& a : mu.atoms_) a.mass *= factor;
  mu.constant_ *= factor;
  for (cplx& c : mu.fourier_) c *= factor;
  for (double& s : mu.samples_) s *= factor;
  return mu;
}

double poisson_integral(const CircleMeasure& mu, const cplx& z, const QuadratureSpec& spec) {
  spec.validate();
  return mu.poisson(z);
}

double total_mass(const CircleMeasure& mu, const QuadratureSpec& spec) {
  spec.validate();
  return mu.total_mass();
}

}  // namespace dmu

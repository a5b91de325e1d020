#include "dmu/outer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dmu {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

double wrap_pm_pi(double t) {
  t = std::fmod(t, kTwoPi);
  if (t > kPi) t -= kTwoPi;
  if (t < -kPi) t += kTwoPi;
  return t;
}

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

double offset_node(int j, int n) { return kTwoPi * (j + 0.5) / n; }

/// log|1 - e^{i(t - tau)}| = log(2 |sin((t - tau)/2)|): the boundary
/// log-modulus basis whose analytic completion is log(1 - z e^{-i tau}).
double log_sin_basis(double t, double tau) {
  double s = std::abs(2.0 * std::sin(0.5 * (t - tau)));
  return std::log(s);
}

// radix-2 FFT, kernel exp(sign * 2 pi i j k / n)
void fft(std::vector<cplx>& a, int sign) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = sign * kTwoPi / static_cast<double>(len);
    for (size_t i = 0; i < n; i += len) {
      for (size_t j = 0; j < len / 2; ++j) {
        cplx w = std::polar(1.0, ang * static_cast<double>(j));
        cplx u = a[i + j];
        cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
      }
    }
  }
}

// least-squares fit of samples in a window around tau against
// {log-sin basis, 1, dt, dt^2}; returns alpha and the residual sum of squares
struct FactorFit {
  double alpha = 0.0;
  double ssr = 0.0;
  bool ok = false;
};

FactorFit fit_factor(const std::vector<double>& s, const std::vector<int>& window, double tau,
                     int n) {
  const int m = static_cast<int>(window.size());
  if (m < 6) return {};
  constexpr int kBasis = 4;
  double ata[kBasis][kBasis] = {};
  double atb[kBasis] = {};
  std::vector<std::array<double, kBasis>> rows(m);
  for (int i = 0; i < m; ++i) {
    double t = offset_node(window[i], n);
    double dt = wrap_pm_pi(t - tau);
    if (std::abs(dt) < 1e-12) return {};  // singular node collided with a sample
    rows[i] = {log_sin_basis(t, tau), 1.0, dt, dt * dt};
    for (int a = 0; a < kBasis; ++a) {
      for (int b = 0; b < kBasis; ++b) ata[a][b] += rows[i][a] * rows[i][b];
      atb[a] += rows[i][a] * s[window[i]];
    }
  }
  // gaussian elimination with partial pivoting
  double aug[kBasis][kBasis + 1];
  for (int a = 0; a < kBasis; ++a) {
    for (int b = 0; b < kBasis; ++b) aug[a][b] = ata[a][b];
    aug[a][kBasis] = atb[a];
  }
  for (int col = 0; col < kBasis; ++col) {
    int piv = col;
    for (int rr = col + 1; rr < kBasis; ++rr)
      if (std::abs(aug[rr][col]) > std::abs(aug[piv][col])) piv = rr;
    if (std::abs(aug[piv][col]) < 1e-14) return {};
    if (piv != col)
      for (int b = 0; b <= kBasis; ++b) std::swap(aug[piv][b], aug[col][b]);
    for (int rr = 0; rr < kBasis; ++rr) {
      if (rr == col) continue;
      double f = aug[rr][col] / aug[col][col];
      for (int b = col; b <= kBasis; ++b) aug[rr][b] -= f * aug[col][b];
    }
  }
  double coef[kBasis];
  for (int a = 0; a < kBasis; ++a) coef[a] = aug[a][kBasis] / aug[a][a];

  FactorFit fit;
  fit.alpha = coef[0];
  fit.ok = true;
  for (int i = 0; i < m; ++i) {
    double pred = 0.0;
    for (int a = 0; a < kBasis; ++a) pred += coef[a] * rows[i][a];
    double r = s[window[i]] - pred;
    fit.ssr += r * r;
  }
  return fit;
}

std::vector<int> fit_window(int center, int half, int n,
                            const std::vector<double>& other_angles, double tau) {
  std::vector<int> idx;
  for (int j = center - half; j <= center + half; ++j) {
    int jj = ((j % n) + n) % n;
    double t = offset_node(jj, n);
    bool near_other = false;
    for (double a : other_angles)
      if (std::abs(wrap_pm_pi(t - a)) < 3.0 * kTwoPi / n && std::abs(wrap_pm_pi(a - tau)) > 1e-9)
        near_other = true;
    if (!near_other) idx.push_back(jj);
  }
  return idx;
}

}  // namespace

OuterFn outer_from_log_modulus(const std::vector<double>& samples,
                               const std::vector<double>& hint_angles) {
  const int n = static_cast<int>(samples.size());
  if (!is_pow2(n) || n < 8)
    throw std::invalid_argument("log-modulus grid size must be a power of two, >= 8");
  for (double s : samples)
    if (!std::isfinite(s))
      throw std::invalid_argument("log-modulus samples must be finite");

  const double h = kTwoPi / n;

  // candidate singular angles: hints first, then dips detected from the
  // cyclic second differences
  std::vector<double> candidates;
  for (double a : hint_angles) candidates.push_back(wrap_angle(a));
  {
    std::vector<double> d(n);
    for (int j = 0; j < n; ++j) {
      double prev = samples[(j + n - 1) % n];
      double next = samples[(j + 1) % n];
      d[j] = std::abs(prev - 2.0 * samples[j] + next);
    }
    std::vector<double> tmp = d;
    std::nth_element(tmp.begin(), tmp.begin() + n / 2, tmp.end());
    double med = tmp[n / 2];
    double threshold = std::max(0.02, 50.0 * med);
    std::vector<int> flagged;
    for (int j = 0; j < n; ++j)
      if (d[j] > threshold) flagged.push_back(j);
    // group contiguous runs (cyclically) and keep the strongest index of each
    std::vector<int> centers;
    for (size_t i = 0; i < flagged.size();) {
      size_t e = i;
      while (e + 1 < flagged.size() && flagged[e + 1] - flagged[e] <= 2) ++e;
      int best = flagged[i];
      for (size_t k = i; k <= e; ++k)
        if (d[flagged[k]] > d[best]) best = flagged[k];
      centers.push_back(best);
      i = e + 1;
    }
    if (centers.size() >= 2 && centers.front() == 0 &&
        centers.back() == n - 1)  // wrap-around run
      centers.pop_back();
    for (int c : centers) {
      double t = offset_node(c, n);
      bool near_hint = false;
      for (double a : candidates)
        if (std::abs(wrap_pm_pi(t - a)) < 2.5 * h) near_hint = true;
      if (near_hint) continue;
      // refine the location over the bracketing interval by least-squares
      double lo = t - h, hi = t + h;
      auto ssr_at = [&](double tau) {
        auto w = fit_window(c, 6, n, candidates, tau);
        auto f = fit_factor(samples, w, tau, n);
        return f.ok ? f.ssr : 1e300;
      };
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double a = lo, b = hi;
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
      for (int it = 0; it < 80 && (b - a) > 1e-13; ++it) {
        if (ssr_at(x1) < ssr_at(x2)) {
          b = x2;
        } else {
          a = x1;
        }
        x1 = b - gr * (b - a);
        x2 = a + gr * (b - a);
      }
      candidates.push_back(wrap_angle(0.5 * (a + b)));
    }
  }
  candidates = merge_angles(std::move(candidates), {}, 1e-9);

  // fit the factors (two passes so neighbouring factors decouple)
  std::vector<double> residual = samples;
  std::vector<BoundaryFactor> factors;
  for (double tau : candidates) factors.push_back({tau, 0.0});
  for (int pass = 0; pass < 2; ++pass) {
    for (auto& f : factors) {
      // data with every factor but this one removed
      std::vector<double> work = samples;
      for (const auto& g : factors) {
        if (&g == &f || g.alpha == 0.0) continue;
        for (int j = 0; j < n; ++j) work[j] -= g.alpha * log_sin_basis(offset_node(j, n), g.angle);
      }
      int center = static_cast<int>(std::floor(f.angle / h));  // nearest sample pair
      std::vector<double> others;
      for (const auto& g : factors)
        if (&g != &f) others.push_back(g.angle);
      auto w = fit_window(center, 6, n, others, f.angle);
      auto fit = fit_factor(work, w, f.angle, n);
      f.alpha = fit.ok ? fit.alpha : 0.0;
    }
  }
  factors.erase(std::remove_if(factors.begin(), factors.end(),
                               [](const BoundaryFactor& f) { return std::abs(f.alpha) < 1e-3; }),
                factors.end());
  std::sort(factors.begin(), factors.end(),
            [](const BoundaryFactor& a, const BoundaryFactor& b) { return a.angle < b.angle; });

  for (int j = 0; j < n; ++j) {
    double t = offset_node(j, n);
    for (const auto& f : factors) residual[j] -= f.alpha * log_sin_basis(t, f.angle);
  }

  // analytic completion of the residual from its offset-grid DFT
  std::vector<cplx> buf(residual.begin(), residual.end());
  fft(buf, -1);
  const int kmax = n / 2 - 1;
  std::vector<cplx> coeff(kmax + 1);
  for (int k = 0; k <= kmax; ++k)
    coeff[k] = buf[k] / static_cast<double>(n) * std::polar(1.0, -kPi * k / n);
  coeff[0] = cplx(coeff[0].real(), 0.0);

  OuterFn out;
  out.n_ = n;
  out.samples_ = samples;
  out.factors_ = std::move(factors);
  out.coeff_ = std::move(coeff);
  out.rebuild_eval_state();
  return out;
}

void OuterFn::rebuild_eval_state() {
  const int kmax = static_cast<int>(coeff_.size()) - 1;
  cre_.resize(coeff_.size());
  cim_.resize(coeff_.size());
  for (size_t k = 0; k < coeff_.size(); ++k) {
    cre_[k] = coeff_[k].real();
    cim_[k] = coeff_[k].imag();
  }
  suffix_abs_.assign(coeff_.size() + 1, 0.0);
  suffix_abs_deriv_.assign(coeff_.size() + 1, 0.0);
  for (int k = kmax; k >= 1; --k) {
    suffix_abs_[k] = suffix_abs_[k + 1] + 2.0 * std::abs(coeff_[k]);
    suffix_abs_deriv_[k] = suffix_abs_deriv_[k + 1] + 2.0 * k * std::abs(coeff_[k]);
  }
}

// Fused evaluation of the residual series and (optionally) its derivative in
// one pass over the modes with shared powers of z; the truncation bound uses
// the suffix sums of |c_k|.
void OuterFn::eval_log(const cplx& z, bool need_deriv, cplx* u, cplx* du) const {
  if (n_ == 0) throw std::logic_error("empty outer function");
  const double zr = z.real(), zi = z.imag();
  const double r2 = zr * zr + zi * zi;
  if (r2 >= 1.0) throw std::domain_error("evaluation requires |z| < 1");
  const double r = std::sqrt(r2);

  double ur = cre_[0], ui = 0.0;
  double dr = 0.0, di = 0.0;
  double pr = 1.0, pim = 0.0;  // z^{k-1}
  double rk = 1.0;
  const size_t kmax = coeff_.size() - 1;
  for (size_t k = 1; k <= kmax; ++k) {
    if (need_deriv) {
      double w = 2.0 * static_cast<double>(k);
      dr += w * (cre_[k] * pr - cim_[k] * pim);
      di += w * (cre_[k] * pim + cim_[k] * pr);
    }
    double npr = pr * zr - pim * zi;
    pim = pr * zi + pim * zr;
    pr = npr;  // now z^k
    rk *= r;
    ur += 2.0 * (cre_[k] * pr - cim_[k] * pim);
    ui += 2.0 * (cre_[k] * pim + cim_[k] * pr);
    double tail = suffix_abs_[k + 1] + (need_deriv ? suffix_abs_deriv_[k + 1] : 0.0);
    if (tail * rk * r < 1e-14 * (1.0 + std::abs(ur) + std::abs(ui))) break;
  }
  cplx uv(ur, ui), dv(dr, di);
  for (const auto& f : factors_) {
    cplx e = std::polar(1.0, -f.angle);
    cplx base = 1.0 - z * e;
    uv += f.alpha * std::log(base);
    if (need_deriv) dv += f.alpha * (-e) / base;
  }
  *u = uv;
  if (need_deriv && du) *du = dv;
}

cplx OuterFn::log_value(const cplx& z) const {
  cplx u;
  eval_log(z, false, &u, nullptr);
  return u;
}

cplx OuterFn::log_derivative(const cplx& z) const {
  cplx u, du;
  eval_log(z, true, &u, &du);
  return du;
}

cplx OuterFn::value(const cplx& z) const { return std::exp(log_value(z)); }

cplx OuterFn::derivative(const cplx& z) const {
  cplx u, du;
  eval_log(z, true, &u, &du);
  return std::exp(u) * du;
}

double OuterFn::boundary_log_modulus(double t) const {
  if (n_ == 0) throw std::logic_error("empty outer function");
  double v = coeff_[0].real();
  for (size_t k = 1; k < coeff_.size(); ++k)
    v += 2.0 * (coeff_[k] * std::polar(1.0, static_cast<double>(k) * t)).real();
  for (const auto& f : factors_) v += f.alpha * log_sin_basis(t, f.angle);
  return v;
}

std::vector<double> OuterFn::boundary_log_modulus_grid(int m) const {
  if (!is_pow2(m) || m < n_)
    throw std::invalid_argument("grid size must be a power of two, >= the native grid");
  std::vector<cplx> buf(m, cplx{});
  buf[0] = coeff_[0].real();
  for (size_t k = 1; k < coeff_.size(); ++k)
    buf[k] = 2.0 * coeff_[k] * std::polar(1.0, kPi * static_cast<double>(k) / m);
  fft(buf, +1);
  std::vector<double> out(m);
  for (int j = 0; j < m; ++j) {
    out[j] = buf[j].real();
    double t = offset_node(j, m);
    for (const auto& f : factors_) out[j] += f.alpha * log_sin_basis(t, f.angle);
  }
  return out;
}

double OuterFn::mean_log_modulus() const {
  if (n_ == 0) throw std::logic_error("empty outer function");
  return coeff_[0].real();
}

std::vector<double> OuterFn::boundary_singular_angles() const {
  std::vector<double> out;
  for (const auto& f : factors_) out.push_back(f.angle);
  return out;
}

std::vector<double> OuterFn::concentration_angles() const {
  return merge_angles(boundary_singular_angles(), kinks_);
}

OuterFn to_outer(const HoloFn& f, const QuadratureSpec& spec, int grid_size) {
  spec.validate();
  if (const auto* o = dynamic_cast<const OuterFn*>(&f)) return *o;
  if (!is_pow2(grid_size) || grid_size < 8)
    throw std::invalid_argument("outer grid size must be a power of two, >= 8");
  const double eps = 1e-7;
  const double r1 = 1.0 - eps, r2 = 1.0 - 0.5 * eps;
  std::vector<double> samples(grid_size);
  for (int j = 0; j < grid_size; ++j) {
    double t = offset_node(j, grid_size);
    double u1 = std::log(std::abs(f.value(std::polar(r1, t))));
    double u2 = std::log(std::abs(f.value(std::polar(r2, t))));
    samples[j] = 2.0 * u2 - u1;
    if (!std::isfinite(samples[j])) {
      std::ostringstream os;
      os << "boundary log-modulus not finite near angle " << t
         << " (interior zero or pole?)";
      throw std::invalid_argument(os.str());
    }
  }
  return outer_from_log_modulus(samples, f.boundary_singular_angles());
}

OuterFn outer_min(const OuterFn& f, const OuterFn& g) {
  const int m = std::max(f.grid_size(), g.grid_size());
  auto sf = f.boundary_log_modulus_grid(m);
  auto sg = g.boundary_log_modulus_grid(m);
  std::vector<double> s(m);
  std::vector<double> kinks;
  int prev_branch = sf[m - 1] <= sg[m - 1] ? 0 : 1;
  for (int j = 0; j < m; ++j) {
    int branch = sf[j] <= sg[j] ? 0 : 1;
    s[j] = branch == 0 ? sf[j] : sg[j];
    if (branch != prev_branch && kinks.size() < 64) kinks.push_back(kTwoPi * j / m);
    prev_branch = branch;
  }
  auto hints = merge_angles(f.boundary_singular_angles(), g.boundary_singular_angles());
  OuterFn out = outer_from_log_modulus(s, hints);
  out.kinks_ = std::move(kinks);
  return out;
}

OuterFn outer_min(const HoloFn& f, const HoloFn& g, const QuadratureSpec& spec) {
  return outer_min(to_outer(f, spec), to_outer(g, spec));
}

OuterFn outer_power_scale(const OuterFn& h, double power, double log_factor) {
  if (!std::isfinite(power) || !std::isfinite(log_factor))
    throw std::invalid_argument("outer power/scale must be finite");
  OuterFn out = h;
  for (auto& f : out.factors_) f.alpha *= power;
  for (auto& c : out.coeff_) c *= power;
  out.coeff_[0] += log_factor;
  for (auto& s : out.samples_) s = power * s + log_factor;
  out.rebuild_eval_state();
  return out;
}

OuterFn cutoff_min(const OuterFn& h, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("cut-off parameter must be positive");
  return outer_min(h, outer_power_scale(h, 2.0, std::log(n)));
}

OuterCheck is_outer(const HoloFn& f, double tol, const QuadratureSpec& spec) {
  spec.validate();
  OuterCheck check;
  if (const auto* o = dynamic_cast<const OuterFn*>(&f)) {
    check.outer = true;
    check.log_value_at_zero = o->mean_log_modulus();
    check.boundary_mean = o->mean_log_modulus();
    check.deviation = 0.0;
    check.reason = "outer by construction";
    return check;
  }
  cplx f0 = f.value(0.0);
  if (std::abs(f0) < 1e-300) {
    check.outer = false;
    check.reason = "vanishes at the origin";
    return check;
  }
  check.log_value_at_zero = std::log(std::abs(f0));

  const int n = std::max(4096, spec.angular_nodes);
  const double eps = 1e-7;
  const double r1 = 1.0 - eps, r2 = 1.0 - 0.5 * eps;
  double mean = 0.0;
  int used = 0;
  for (int j = 0; j < n; ++j) {
    double t = offset_node(j, n);
    double u1 = std::log(std::abs(f.value(std::polar(r1, t))));
    double u2 = std::log(std::abs(f.value(std::polar(r2, t))));
    double s = 2.0 * u2 - u1;
    if (std::isfinite(s)) {
      mean += s;
      ++used;
    }
  }
  if (used == 0) {
    check.outer = false;
    check.reason = "boundary log-modulus not finite anywhere on the grid";
    return check;
  }
  mean /= used;
  check.boundary_mean = mean;
  check.deviation = std::abs(check.log_value_at_zero - mean);
  check.outer = check.deviation <= tol;
  std::ostringstream os;
  os << "log|f(0)| = " << check.log_value_at_zero << ", boundary mean = " << mean
     << ", deviation = " << check.deviation << (check.outer ? " <= " : " > ") << tol;
  check.reason = os.str();
  return check;
}

}  // namespace dmu

#include "dmu/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dmu {

void QuadratureSpec::validate() const {
  if (angular_nodes < 1 || radial_levels < 1 || tail_annuli < 1)
    throw std::invalid_argument("quadrature spec: counts must be >= 1");
  if (!(refinement_factor > 0.0 && refinement_factor < 1.0))
    throw std::invalid_argument("quadrature spec: refinement_factor must lie in (0, 1)");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw std::invalid_argument("quadrature spec: tolerances must be positive");
  if (!(singular_exclusion > 0.0) || singular_exclusion >= 1.0)
    throw std::invalid_argument("quadrature spec: singular_exclusion must lie in (0, 1)");
}

std::string to_string(TailVerdict v) {
  switch (v) {
    case TailVerdict::kConvergent: return "CONVERGENT";
    case TailVerdict::kDivergent: return "DIVERGENT";
    case TailVerdict::kInconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

namespace {

// Legendre nodes by Newton iteration on P_n; cached per order.
std::pair<std::vector<double>, std::vector<double>> build_gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double p0 = 0, p1 = 0;
    for (int iter = 0; iter < 100; ++iter) {
      p0 = 1.0;
      p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1.0);
      double dt = p0 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int k = 0; k < n; ++k) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
    }
    double dp = n * (t * p0 - p1) / (t * t - 1.0);
    x[n - 1 - i] = t;
    w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
  return {x, w};
}

std::mutex g_gl_mutex;
std::map<int, std::pair<std::vector<double>, std::vector<double>>> g_gl_cache;

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

// Angular panels on [0, 2pi), graded geometrically toward each concentration
// angle starting at half-width `scale`, with panel widths capped at max_width.
struct Panel {
  double a, b;
};

void push_graded_edges(double from, double to, double scale, double max_width,
                       std::vector<double>& edges) {
  // edges within (from, to), growing geometrically away from `from`
  double off = std::min(scale, to - from);
  while (from + off < to - 1e-15) {
    edges.push_back(from + off);
    double step = std::min(off, max_width);
    off += step;
  }
}

std::vector<Panel> angular_panels(std::vector<double> angles, double scale, double max_width) {
  std::vector<Panel> panels;
  if (angles.empty()) {
    int m = std::max(1, static_cast<int>(std::ceil(kTwoPi / max_width)));
    panels.reserve(m);
    for (int i = 0; i < m; ++i)
      panels.push_back({kTwoPi * i / m, kTwoPi * (i + 1) / m});
    return panels;
  }
  for (double& a : angles) a = wrap_angle(a);
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               angles.end());
  // collapse wrap-around duplicates (0 and 2pi)
  if (angles.size() > 1 && angles.front() + kTwoPi - angles.back() < 1e-12) angles.pop_back();

  const int m = static_cast<int>(angles.size());
  for (int i = 0; i < m; ++i) {
    double lo = angles[i];
    double hi = (i + 1 < m) ? angles[i + 1] : angles[0] + kTwoPi;
    double mid = 0.5 * (lo + hi);
    std::vector<double> edges;
    edges.push_back(lo);
    push_graded_edges(lo, mid, scale, max_width, edges);
    edges.push_back(mid);
    std::vector<double> back;
    push_graded_edges(0.0, mid - lo, scale, max_width, back);
    for (auto it = back.rbegin(); it != back.rend(); ++it) edges.push_back(hi - *it);
    edges.push_back(hi);
    for (size_t k = 0; k + 1 < edges.size(); ++k)
      if (edges[k + 1] - edges[k] > 1e-15) panels.push_back({edges[k], edges[k + 1]});
  }
  return panels;
}

struct RingSums {
  std::vector<double> per_level;
};

[[noreturn]] void throw_nonfinite(const cplx& z, double v) {
  std::ostringstream os;
  os << "non-finite integrand value " << v << " at z = (" << z.real() << ", " << z.imag()
     << ")";
  throw std::domain_error(os.str());
}

// One resolution pass over the annulus decomposition.
std::vector<double> annuli_pass(const DiscIntegrand& F, int levels, double ratio,
                                const std::vector<double>& conc, int q_r, int q_a,
                                int base_panels) {
  const auto& [xr, wr] = gauss_legendre(q_r);
  const auto& [xa, wa] = gauss_legendre(q_a);
  const double max_width = kTwoPi / base_panels;

  std::vector<double> out(levels, 0.0);
  double edge0 = 0.0;
  for (int k = 0; k < levels; ++k) {
    // annuli beyond double resolution of 1 - r are left empty rather than
    // truncated; trailing empty levels carry no information
    double edge1 = 1.0 - std::pow(ratio, k + 1);
    if (edge1 > 1.0 - 1e-14 || edge1 <= edge0) continue;
    double s = std::max(1.0 - edge1, 1e-13);
    auto panels = angular_panels(conc, s, max_width);
    double acc = 0.0;
    for (int ir = 0; ir < q_r; ++ir) {
      double r = 0.5 * (edge0 + edge1) + 0.5 * (edge1 - edge0) * xr[ir];
      double rw = 0.5 * (edge1 - edge0) * wr[ir] * r;
      double ring = 0.0;
      for (const Panel& p : panels) {
        double half = 0.5 * (p.b - p.a);
        double mid = 0.5 * (p.a + p.b);
        for (int ia = 0; ia < q_a; ++ia) {
          double th = mid + half * xa[ia];
          cplx z = std::polar(r, th);
          double v = F(z);
          if (!std::isfinite(v)) throw_nonfinite(z, v);
          ring += half * wa[ia] * v;
        }
      }
      acc += rw * ring;
    }
    out[k] = acc;
    edge0 = edge1;
  }
  return out;
}

struct TailEstimate {
  double value = 0.0;
  double uncertainty = 0.0;
  bool bounded = true;
};

TailEstimate estimate_tail(const std::vector<double>& a, double abs_tol) {
  TailEstimate te;
  const size_t n = a.size();
  if (n < 3) {
    te.bounded = false;
    return te;
  }
  double last = a[n - 1], prev = a[n - 2], prev2 = a[n - 3];
  if (last <= abs_tol) return te;  // negligible tail
  if (prev <= 0.0 || prev2 <= 0.0) {
    te.bounded = false;
    te.uncertainty = std::abs(last);
    return te;
  }
  double q = last / prev;
  double q2 = prev / prev2;
  if (q <= 0.0 || q > 0.95) {
    te.bounded = false;
    te.uncertainty = std::abs(last);
    return te;
  }
  te.value = last * q / (1.0 - q);
  double spread = std::abs(q - q2) / (1.0 - q);
  te.uncertainty = te.value * std::clamp(4.0 * spread + 0.25, 0.25, 1.0);
  return te;
}

}  // namespace

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  std::lock_guard lock(g_gl_mutex);
  auto it = g_gl_cache.find(n);
  if (it == g_gl_cache.end()) it = g_gl_cache.emplace(n, build_gauss_legendre(n)).first;
  return it->second;
}

std::vector<double> annulus_integrals(const DiscIntegrand& F, int levels, double ratio,
                                      const QuadratureSpec& spec,
                                      const std::vector<double>& conc) {
  spec.validate();
  int base = std::max(8, spec.angular_nodes / 32);
  return annuli_pass(F, levels, ratio, conc, 6, 10, base);
}

IntegralResult disc_integral(const DiscIntegrand& F, const QuadratureSpec& spec,
                             const std::vector<double>& conc) {
  spec.validate();
  const int base = std::max(8, spec.angular_nodes / 32);
  auto fine = annuli_pass(F, spec.radial_levels, spec.refinement_factor, conc, 6, 10, base);
  auto coarse = annuli_pass(F, spec.radial_levels, spec.refinement_factor, conc, 4, 7,
                            std::max(5, base / 2));
  double sum = 0.0, diff = 0.0;
  for (int k = 0; k < spec.radial_levels; ++k) {
    sum += fine[k];
    diff += std::abs(fine[k] - coarse[k]);
  }
  TailEstimate tail = estimate_tail(fine, spec.abs_tol);

  IntegralResult res;
  res.value = sum + tail.value;
  res.error_estimate = diff + tail.uncertainty + spec.abs_tol;
  res.converged = tail.bounded;
  if (!tail.bounded) res.note = "tail not geometrically bounded at the last level";
  return res;
}

TailProfile tail_profile(const DiscIntegrand& F, const QuadratureSpec& spec,
                         const std::vector<double>& conc) {
  spec.validate();
  const int base = std::max(8, spec.angular_nodes / 32);
  // levels 0..tail_annuli with ratio 1/2; level 0 covers the disc core and is
  // not part of the dyadic tail
  auto a = annuli_pass(F, spec.tail_annuli + 1, 0.5, conc, 6, 10, base);
  a.erase(a.begin());
  return classify_tail(std::move(a));
}

AnnuliResult disc_annuli(const DiscIntegrand& F, const QuadratureSpec& spec,
                         const std::vector<double>& conc, int levels) {
  spec.validate();
  // the geometric tail estimate covers the levels beyond the profiling depth
  if (levels <= 0) levels = spec.tail_annuli + 1;
  const int base = std::max(8, spec.angular_nodes / 32);
  AnnuliResult res;
  res.levels = annuli_pass(F, levels, 0.5, conc, 5, 8, base);
  auto coarse = annuli_pass(F, levels, 0.5, conc, 3, 5, std::max(5, base / 2));
  double sum = 0.0, diff = 0.0;
  for (int k = 0; k < levels; ++k) {
    sum += res.levels[k];
    diff += std::abs(res.levels[k] - coarse[k]);
  }
  TailEstimate tail = estimate_tail(res.levels, spec.abs_tol);
  res.value = sum + tail.value;
  res.error = diff + tail.uncertainty + spec.abs_tol;
  res.tail_bounded = tail.bounded;
  std::vector<double> dyadic(res.levels.begin() + 1, res.levels.end());
  res.profile = classify_tail(std::move(dyadic));
  return res;
}

TailProfile classify_tail(std::vector<double> a, int window) {
  TailProfile tp;
  tp.annulus_integrals = std::move(a);
  std::vector<double> v = tp.annulus_integrals;
  if (!v.empty()) {
    double vmax = *std::max_element(v.begin(), v.end());
    if (vmax <= 1e-250) {
      tp.verdict = TailVerdict::kConvergent;
      tp.note = "tail numerically zero";
      return tp;
    }
  }
  // annuli past double resolution come back empty; they carry no information
  while (!v.empty() && v.back() == 0.0) v.pop_back();
  const int n = static_cast<int>(v.size());
  if (n < 3) {
    tp.note = "too few annuli";
    return tp;
  }
  tp.window = std::min(window, n - 1);

  std::vector<double> ratios;
  for (int k = n - tp.window - 1; k + 1 < n; ++k) {
    double num = v[k + 1], den = v[k];
    if (den <= 1e-300) {
      ratios.push_back(num > 1e-300 ? 2.0 : 0.0);
    } else {
      ratios.push_back(num / den);
    }
  }
  tp.ratio_min = *std::min_element(ratios.begin(), ratios.end());
  tp.ratio_max = *std::max_element(ratios.begin(), ratios.end());
  tp.ratio_mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / ratios.size();

  if (tp.ratio_max <= kRatioConvergent) {
    tp.verdict = TailVerdict::kConvergent;
    double q = std::min(tp.ratio_mean, 0.97);
    tp.tail_estimate = v.back() * q / (1.0 - q);
    tp.note = "ratios below " + std::to_string(kRatioConvergent) + " over the window";
  } else if (tp.ratio_min >= kRatioDivergent || tp.ratio_mean >= 1.0) {
    tp.verdict = TailVerdict::kDivergent;
    tp.note = "annulus integrals not decaying";
  } else {
    tp.verdict = TailVerdict::kInconclusive;
    tp.note = "ratio window straddles the decision band";
  }
  return tp;
}

namespace {

struct PanelSums {
  double value = 0.0;
  double abs_value = 0.0;
};

PanelSums integrate_panels(const CircleIntegrand& F, const std::vector<Panel>& panels,
                           int q_a) {
  const auto& [xa, wa] = gauss_legendre(q_a);
  PanelSums s;
  for (const Panel& p : panels) {
    double half = 0.5 * (p.b - p.a);
    double mid = 0.5 * (p.a + p.b);
    for (int ia = 0; ia < q_a; ++ia) {
      double th = mid + half * xa[ia];
      double v = F(wrap_angle(th));
      if (!std::isfinite(v)) throw_nonfinite(std::polar(1.0, th), v);
      s.value += half * wa[ia] * v;
      s.abs_value += half * wa[ia] * std::abs(v);
    }
  }
  return s;
}

// Panels covering [0, 2pi) minus the windows [angle - delta, angle + delta],
// graded geometrically away from each window edge.
std::vector<Panel> backbone_panels(const std::vector<double>& angles, double delta,
                                   double max_width) {
  std::vector<Panel> panels;
  const int m = static_cast<int>(angles.size());
  for (int i = 0; i < m; ++i) {
    double lo = angles[i] + delta;
    double hi = ((i + 1 < m) ? angles[i + 1] : angles[0] + kTwoPi) - delta;
    if (hi <= lo) continue;  // windows overlap; gap fully excluded
    double mid = 0.5 * (lo + hi);
    std::vector<double> edges;
    edges.push_back(lo);
    double off = delta;
    while (lo + off < mid - 1e-15) {
      edges.push_back(lo + off);
      off += std::min(off, max_width);
    }
    edges.push_back(mid);
    std::vector<double> back;
    off = delta;
    while (off < mid - lo - 1e-15) {
      back.push_back(off);
      off += std::min(off, max_width);
    }
    for (auto it = back.rbegin(); it != back.rend(); ++it) edges.push_back(hi - *it);
    edges.push_back(hi);
    for (size_t k = 0; k + 1 < edges.size(); ++k)
      if (edges[k + 1] - edges[k] > 1e-15) panels.push_back({edges[k], edges[k + 1]});
  }
  return panels;
}

// Graded panels on [angle + inner, angle + outer] and the mirror interval.
std::vector<Panel> strip_panels(double angle, double inner, double outer) {
  std::vector<Panel> panels;
  std::vector<double> edges;
  edges.push_back(inner);
  double off = inner;
  while (off * 2.0 < outer * (1.0 - 1e-12)) {
    off *= 2.0;
    edges.push_back(off);
  }
  edges.push_back(outer);
  for (size_t k = 0; k + 1 < edges.size(); ++k) {
    if (edges[k + 1] - edges[k] <= 1e-18) continue;
    panels.push_back({angle + edges[k], angle + edges[k + 1]});
    panels.push_back({angle - edges[k + 1], angle - edges[k]});
  }
  return panels;
}

std::vector<double> normalized_angles(const std::vector<double>& sing) {
  std::vector<double> angles = sing;
  for (double& a : angles) a = wrap_angle(a);
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               angles.end());
  if (angles.size() > 1 && angles.front() + kTwoPi - angles.back() < 1e-12) angles.pop_back();
  return angles;
}

}  // namespace

IntegralResult circle_integral(const CircleIntegrand& F, const std::vector<double>& sing,
                               const QuadratureSpec& spec) {
  spec.validate();
  const double max_width = kTwoPi / std::max(16, spec.angular_nodes / 8);
  IntegralResult res;
  if (sing.empty()) {
    auto fine = integrate_panels(F, angular_panels({}, max_width, max_width), 10);
    auto coarse = integrate_panels(F, angular_panels({}, max_width * 2.0, max_width * 2.0), 7);
    res.value = fine.value;
    res.error_estimate = std::abs(fine.value - coarse.value) + spec.abs_tol;
    res.converged = true;
    return res;
  }

  auto angles = normalized_angles(sing);
  // keep the initial window clear of the smallest gap between singular angles
  double min_gap = kTwoPi;
  for (size_t i = 0; i < angles.size(); ++i) {
    double next = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + kTwoPi;
    min_gap = std::min(min_gap, next - angles[i]);
  }
  const double floor_delta = 1e-11;
  double delta0 = std::clamp(spec.singular_exclusion, floor_delta, 0.25 * min_gap);

  auto panels = backbone_panels(angles, delta0, max_width);
  auto fine = integrate_panels(F, panels, 10);
  auto coarse = integrate_panels(F, panels, 7);

  double value = fine.value;
  double abs_value = fine.abs_value;
  double delta = delta0;
  bool stabilized = false;
  double last_strip = 0.0, prev_strip = -1.0;
  while (delta > floor_delta) {
    double next = std::max(delta * 0.25, floor_delta);
    double strip = 0.0, strip_abs = 0.0;
    for (double a : angles) {
      auto sp = strip_panels(a, next, delta);
      auto s = integrate_panels(F, sp, 10);
      strip += s.value;
      strip_abs += s.abs_value;
    }
    value += strip;
    abs_value += strip_abs;
    prev_strip = last_strip;
    last_strip = strip_abs;
    delta = next;
    double tol = std::max(spec.abs_tol, spec.rel_tol * std::max(std::abs(value), abs_value));
    // geometric estimate of what the remaining shrink levels would add
    double remaining = last_strip;
    if (prev_strip > 0.0 && last_strip < 0.9 * prev_strip) {
      double q = last_strip / prev_strip;
      remaining = last_strip * q / (1.0 - q);
    }
    if (remaining <= tol) {
      stabilized = true;
      break;
    }
  }

  // bound on the excluded windows from edge values
  double window_bound = 0.0;
  for (double a : angles) {
    double e1 = std::abs(F(wrap_angle(a + delta)));
    double e2 = std::abs(F(wrap_angle(a - delta)));
    window_bound += 2.0 * delta * std::max(e1, e2) * 1.5;
  }

  res.value = value;
  res.error_estimate = std::abs(fine.value - coarse.value) + window_bound + spec.abs_tol;
  res.converged = stabilized;
  if (!stabilized) {
    res.note = "value did not stabilize while shrinking the exclusion windows";
    res.error_estimate += last_strip;
  }
  return res;
}

}  // namespace dmu

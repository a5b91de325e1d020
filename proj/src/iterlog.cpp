#include "dmu/iterlog.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace dmu {

cplx iterlog(int n, const cplx& z) {
  if (n < 0) throw std::invalid_argument("iterated-log index must be nonnegative");
  if (z.real() < 0.0) throw std::domain_error("iterated log requires Re z >= 0");
  cplx w = z;
  for (int k = 0; k < n; ++k) w = std::log(1.0 + w);
  return w;
}

cplx iterlog_deriv(int n, const cplx& z) {
  if (n < 0) throw std::invalid_argument("iterated-log index must be nonnegative");
  if (z.real() < 0.0) throw std::domain_error("iterated log requires Re z >= 0");
  // G_{k+1}' = G_k' / (1 + G_k), so G_n'(z) = prod_k 1/(1 + G_k(z))
  cplx w = z;
  cplx d = 1.0;
  for (int k = 0; k < n; ++k) {
    cplx base = 1.0 + w;
    if (std::abs(base) < 1e-300) throw std::domain_error("iterated-log chain degenerated");
    d /= base;
    w = std::log(base);
  }
  return d;
}

double iterlog_majorant(int n, double r) {
  if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("majorant argument must lie in [0, 1)");
  double x = 1.0 / (1.0 - r);
  for (int k = 0; k < n; ++k) x = std::log1p(x);
  return x;
}

double majorant_sup(double m_prev, double lo, double* arg_at_sup, double x_cap) {
  if (!(m_prev > 0.0) || !(lo > 0.0))
    throw std::invalid_argument("majorant sup requires positive seed and left endpoint");
  auto ratio = [m_prev](double x) {
    return std::log1p(kPi / 2.0 + m_prev * x) / std::log1p(x);
  };
  // coarse log-spaced scan; the ratio tends to 1 at infinity, which is below
  // any admissible candidate, so the cap only needs to be generous
  const int grid = 2000;
  double best = ratio(lo), best_x = lo;
  double llo = std::log(lo), lhi = std::log(x_cap);
  for (int i = 0; i <= grid; ++i) {
    double x = std::exp(llo + (lhi - llo) * i / grid);
    double v = ratio(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  // golden-section refinement around the grid maximum
  double a = std::max(lo, best_x * std::exp(-(lhi - llo) / grid));
  double b = std::min(x_cap, best_x * std::exp((lhi - llo) / grid));
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 200 && (b - a) > 1e-13 * (1.0 + b); ++it) {
    if (ratio(c) > ratio(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  double xm = 0.5 * (a + b);
  double vm = ratio(xm);
  if (vm > best) {
    best = vm;
    best_x = xm;
  }
  if (arg_at_sup) *arg_at_sup = best_x;
  return best;
}

IterLogTable compute_M(int n_max, double m0) {
  if (n_max < 0) throw std::invalid_argument("n_max must be nonnegative");
  if (!(m0 > 0.0)) throw std::invalid_argument("M_0 must be positive");
  IterLogTable table;
  table.n_max = n_max;
  table.m0 = m0;
  table.M.push_back(m0);
  table.sup_location.push_back(0.0);
  for (int n = 1; n <= n_max; ++n) {
    double lo = iterlog_majorant(n, 0.0);  // F_n(0)
    double where = 0.0;
    double mn = majorant_sup(table.M[n - 1], lo, &where);
    table.M.push_back(mn);
    table.sup_location.push_back(where);
  }
  // re-validate log(1 + pi/2 + M_{n-1} F_{n-1}(r)) <= M_n F_n(r) on an r-grid
  for (int n = 1; n <= n_max; ++n) {
    for (int i = 0; i <= 400; ++i) {
      double one_minus_r = std::pow(10.0, -8.0 * i / 400.0);
      double r = 1.0 - one_minus_r;
      double lhs = std::log1p(kPi / 2.0 + table.M[n - 1] * iterlog_majorant(n - 1, r));
      double rhs = table.M[n] * iterlog_majorant(n, r);
      if (lhs > rhs * (1.0 + 1e-12) + 1e-12) {
        std::ostringstream os;
        os << "majorant recursion validation failed at n = " << n << ", r = " << r
           << ": " << lhs << " > " << rhs;
        throw std::runtime_error(os.str());
      }
    }
  }
  return table;
}

double g2_halfplane_area() {
  // int_0^X int_{-pi/2}^{pi/2} dy dx / ((1+x)^2 + y^2) plus the analytic tail
  // int_X^inf ~ pi/(1+X)
  const double x_cap = 4e6;
  const auto& [xn, xw] = gauss_legendre(12);
  const auto& [yn, yw] = gauss_legendre(16);
  double acc = 0.0;
  double a = 0.0, b = 0.25;
  while (a < x_cap) {
    if (b > x_cap) b = x_cap;
    for (size_t i = 0; i < xn.size(); ++i) {
      double x = 0.5 * (a + b) + 0.5 * (b - a) * xn[i];
      double wx = 0.5 * (b - a) * xw[i];
      double inner = 0.0;
      for (size_t j = 0; j < yn.size(); ++j) {
        double y = 0.5 * kPi * yn[j];
        double wy = 0.5 * kPi * yw[j];
        inner += wy / ((1.0 + x) * (1.0 + x) + y * y);
      }
      acc += wx * inner;
    }
    double width = (b - a) * 1.35;
    a = b;
    b = a + width;
  }
  return acc + kPi / (1.0 + x_cap);
}

std::vector<IterLogCurveRow> iterlog_curves(int count, double t_min, double t_max) {
  if (count < 2) throw std::invalid_argument("curve table needs at least two rows");
  if (!(t_min > 0.0) || !(t_max > t_min))
    throw std::invalid_argument("curve range must satisfy 0 < t_min < t_max");
  std::vector<IterLogCurveRow> rows;
  rows.reserve(count);
  const double l0 = std::log10(t_min), l1 = std::log10(t_max);
  for (int i = 0; i < count; ++i) {
    double t = std::pow(10.0, l0 + (l1 - l0) * i / (count - 1));
    IterLogCurveRow row;
    row.t = t;
    cplx z(0.0, t);
    cplx g1 = iterlog(1, z);
    row.g2 = iterlog(2, z);
    row.g3 = iterlog(3, z);
    row.g4 = iterlog(4, z);
    auto ok = [](const cplx& next, const cplx& prev) {
      return std::abs(next) <= std::log1p(std::abs(prev)) + kPi / 2.0 + 1e-12;
    };
    row.step_bound_ok = ok(row.g2, g1) && ok(row.g3, row.g2) && ok(row.g4, row.g3);
    rows.push_back(row);
  }
  return rows;
}

std::string iterlog_curves_csv(const std::vector<IterLogCurveRow>& rows) {
  std::string out =
      "t,re_g2,im_g2,abs_g2,re_g3,im_g3,abs_g3,re_g4,im_g4,abs_g4,step_bound_ok\n";
  char buf[512];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.t,
                  r.g2.real(), r.g2.imag(), std::abs(r.g2), r.g3.real(), r.g3.imag(),
                  std::abs(r.g3), r.g4.real(), r.g4.imag(), std::abs(r.g4),
                  r.step_bound_ok ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace dmu

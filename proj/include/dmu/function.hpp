#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "dmu/quadrature.hpp"

namespace dmu {

/// A holomorphic function on the unit disc together with its derivative and
/// the boundary angles where its modulus degenerates. This is the interface
/// the integral engines consume; closed-form expression trees and outer
/// functions both implement it.
class HoloFn {
 public:
  virtual ~HoloFn() = default;

  virtual cplx value(const cplx& z) const = 0;
  virtual cplx derivative(const cplx& z) const = 0;

  /// Boundary angles where |f| tends to 0 or infinity. Circle integrals
  /// exclude shrinking windows around these.
  virtual std::vector<double> boundary_singular_angles() const { return {}; }

  /// Angles toward which quadrature should concentrate nodes; defaults to the
  /// singular set.
  virtual std::vector<double> concentration_angles() const {
    return boundary_singular_angles();
  }
};

namespace detail {

enum class NodeKind {
  kConst,
  kIdentity,
  kSum,
  kProduct,
  kQuotient,
  kScale,
  kPower,  // c * (1 - lambda z)^alpha with |lambda| = 1
  kExp,
  kLog,      // principal branch
  kGn,       // G_n composed with the child, range(child) in closed right half-plane
  kGnDeriv,  // G_n' composed with the child (internal, produced by differentiation)
};

struct Node {
  NodeKind kind = NodeKind::kConst;
  cplx c{};        // constant value / scale factor / power prefactor
  cplx lambda{};   // power rotation, |lambda| = 1
  double alpha = 0.0;
  int n = 0;       // iterated-log index
  std::vector<std::shared_ptr<const Node>> kids;
  bool vanishes_nowhere = false;

  mutable std::shared_ptr<const Node> deriv;  // built on first request
  mutable std::once_flag deriv_once;

  Node() = default;
  // moves happen only during construction, before any sharing; the derivative
  // cache starts fresh
  Node(Node&& o) noexcept
      : kind(o.kind),
        c(o.c),
        lambda(o.lambda),
        alpha(o.alpha),
        n(o.n),
        kids(std::move(o.kids)),
        vanishes_nowhere(o.vanishes_nowhere) {}
  Node& operator=(Node&&) = delete;
  Node(const Node&) = delete;
};

using NodePtr = std::shared_ptr<const Node>;

}  // namespace detail

/// Closed-form analytic function on the disc: an immutable expression tree
/// with exact derivative trees (built lazily, cached per node).
///
/// Construction certifies structural invariants: quotient denominators and
/// logarithm arguments must be certified zero-free on the open disc (constant,
/// power, exp, products and quotients of such); G_n may only be composed with
/// subtrees whose range stays in the closed right half-plane, which is checked
/// at evaluation time.
class AnalyticFn : public HoloFn {
 public:
  static AnalyticFn constant(const cplx& c);
  static AnalyticFn identity();
  static AnalyticFn sum(std::vector<AnalyticFn> terms);
  static AnalyticFn product(std::vector<AnalyticFn> factors);
  static AnalyticFn quotient(AnalyticFn num, AnalyticFn den);
  static AnalyticFn scale(const cplx& factor, AnalyticFn arg);
  /// scale * (1 - lambda z)^alpha, |lambda| = 1, alpha real.
  static AnalyticFn power(const cplx& lambda, double alpha, const cplx& scale = 1.0);
  static AnalyticFn exp_of(AnalyticFn arg);
  static AnalyticFn log_of(AnalyticFn arg);
  static AnalyticFn gn_compose(int n, AnalyticFn arg);
  /// coeffs[0] + coeffs[1] z + ... as a tree of the kinds above.
  static AnalyticFn polynomial(std::vector<cplx> coeffs);

  cplx value(const cplx& z) const override;
  cplx derivative(const cplx& z) const override;
  std::vector<double> boundary_singular_angles() const override;

  /// The derivative as a function of its own.
  AnalyticFn derivative_fn() const;

  bool vanishes_nowhere() const;

  explicit AnalyticFn(detail::NodePtr node);
  detail::NodePtr node() const { return node_; }

 private:
  detail::NodePtr node_;
};

/// Pointwise product of two functions; owns shared copies of both.
class ProductFn : public HoloFn {
 public:
  ProductFn(std::shared_ptr<const HoloFn> a, std::shared_ptr<const HoloFn> b);

  cplx value(const cplx& z) const override;
  cplx derivative(const cplx& z) const override;
  std::vector<double> boundary_singular_angles() const override;
  std::vector<double> concentration_angles() const override;

 private:
  std::shared_ptr<const HoloFn> a_, b_;
};

template <class F>
std::shared_ptr<const HoloFn> share(F f) {
  return std::make_shared<F>(std::move(f));
}

struct SupNormEstimate {
  double value = 0.0;
  double grid_radius = 0.0;
  double attained_angle = 0.0;
};

/// Max of |f| over a boundary-adjacent grid at radius 1 - 1e-4, refined toward
/// the declared singular angles.
SupNormEstimate sup_norm_estimate(const HoloFn& f, const QuadratureSpec& spec);

/// Merge angle lists modulo 2 pi, deduplicating within `tol`.
std::vector<double> merge_angles(std::vector<double> a, const std::vector<double>& b,
                                 double tol = 1e-12);

}  // namespace dmu

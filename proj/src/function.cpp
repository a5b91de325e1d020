#include "dmu/function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dmu/iterlog.hpp"

namespace dmu {

namespace detail {
namespace {

NodePtr make_node(Node&& n) { return std::make_shared<Node>(std::move(n)); }

NodePtr const_node(const cplx& c) {
  Node n;
  n.kind = NodeKind::kConst;
  n.c = c;
  n.vanishes_nowhere = (c != cplx{});
  return make_node(std::move(n));
}

[[noreturn]] void domain_fail(const char* what, const cplx& z) {
  std::ostringstream os;
  os << what << " at z = (" << z.real() << ", " << z.imag() << ")";
  throw std::domain_error(os.str());
}

cplx eval(const Node& node, const cplx& z);

cplx eval_kid(const Node& node, size_t i, const cplx& z) { return eval(*node.kids[i], z); }

cplx eval(const Node& node, const cplx& z) {
  switch (node.kind) {
    case NodeKind::kConst:
      return node.c;
    case NodeKind::kIdentity:
      return z;
    case NodeKind::kSum: {
      cplx acc = 0.0;
      for (const auto& k : node.kids) acc += eval(*k, z);
      return acc;
    }
    case NodeKind::kProduct: {
      cplx acc = 1.0;
      for (const auto& k : node.kids) acc *= eval(*k, z);
      return acc;
    }
    case NodeKind::kQuotient: {
      cplx den = eval_kid(node, 1, z);
      if (std::abs(den) < 1e-300) domain_fail("quotient denominator vanished", z);
      return eval_kid(node, 0, z) / den;
    }
    case NodeKind::kScale:
      return node.c * eval_kid(node, 0, z);
    case NodeKind::kPower: {
      cplx base = 1.0 - node.lambda * z;
      if (node.alpha == 0.0) return node.c;
      if (base == cplx{}) {
        if (node.alpha > 0.0) return cplx{};
        domain_fail("negative power of a vanishing factor", z);
      }
      return node.c * std::pow(base, node.alpha);
    }
    case NodeKind::kExp:
      return std::exp(eval_kid(node, 0, z));
    case NodeKind::kLog: {
      cplx w = eval_kid(node, 0, z);
      if (std::abs(w) < 1e-300) domain_fail("log of a vanishing value", z);
      if (w.real() < 0.0 && std::abs(w.imag()) <= 1e-14 * std::abs(w.real()))
        domain_fail("log argument on the branch cut", z);
      return std::log(w);
    }
    case NodeKind::kGn: {
      cplx w = eval_kid(node, 0, z);
      if (w.real() < -1e-9 * (1.0 + std::abs(w)))
        domain_fail("iterated log argument left the right half-plane", z);
      if (w.real() < 0.0) w = cplx(0.0, w.imag());
      return iterlog(node.n, w);
    }
    case NodeKind::kGnDeriv: {
      cplx w = eval_kid(node, 0, z);
      if (w.real() < -1e-9 * (1.0 + std::abs(w)))
        domain_fail("iterated log argument left the right half-plane", z);
      if (w.real() < 0.0) w = cplx(0.0, w.imag());
      return iterlog_deriv(node.n, w);
    }
  }
  return {};
}

NodePtr derivative_of(const NodePtr& node);

NodePtr sum_node(std::vector<NodePtr> kids) {
  Node n;
  n.kind = NodeKind::kSum;
  n.kids = std::move(kids);
  return make_node(std::move(n));
}

NodePtr product_node(std::vector<NodePtr> kids) {
  Node n;
  n.kind = NodeKind::kProduct;
  n.vanishes_nowhere =
      std::all_of(kids.begin(), kids.end(), [](const NodePtr& k) { return k->vanishes_nowhere; });
  n.kids = std::move(kids);
  return make_node(std::move(n));
}

NodePtr scale_node(const cplx& c, NodePtr kid) {
  Node n;
  n.kind = NodeKind::kScale;
  n.c = c;
  n.vanishes_nowhere = (c != cplx{}) && kid->vanishes_nowhere;
  n.kids = {std::move(kid)};
  return make_node(std::move(n));
}

NodePtr quotient_node(NodePtr num, NodePtr den) {
  if (!den->vanishes_nowhere)
    throw std::invalid_argument(
        "quotient denominator is not certified zero-free on the disc; "
        "use power/exp/product forms for the denominator");
  Node n;
  n.kind = NodeKind::kQuotient;
  n.vanishes_nowhere = num->vanishes_nowhere;
  n.kids = {std::move(num), std::move(den)};
  return make_node(std::move(n));
}

NodePtr power_node(const cplx& lambda, double alpha, const cplx& scale) {
  if (std::abs(std::abs(lambda) - 1.0) > 1e-12)
    throw std::invalid_argument("power factor requires |lambda| = 1");
  if (!std::isfinite(alpha)) throw std::invalid_argument("power exponent must be finite");
  Node n;
  n.kind = NodeKind::kPower;
  n.lambda = lambda;
  n.alpha = alpha;
  n.c = scale;
  n.vanishes_nowhere = (scale != cplx{});  // (1 - lambda z) != 0 on the open disc
  return make_node(std::move(n));
}

NodePtr derivative_of(const NodePtr& node) {
  std::call_once(node->deriv_once, [&] {
    switch (node->kind) {
      case NodeKind::kConst:
      case NodeKind::kIdentity:
        node->deriv = const_node(node->kind == NodeKind::kIdentity ? 1.0 : 0.0);
        break;
      case NodeKind::kSum: {
        std::vector<NodePtr> kids;
        kids.reserve(node->kids.size());
        for (const auto& k : node->kids) kids.push_back(derivative_of(k));
        node->deriv = sum_node(std::move(kids));
        break;
      }
      case NodeKind::kProduct: {
        std::vector<NodePtr> terms;
        for (size_t i = 0; i < node->kids.size(); ++i) {
          std::vector<NodePtr> factors;
          for (size_t j = 0; j < node->kids.size(); ++j)
            factors.push_back(i == j ? derivative_of(node->kids[j]) : node->kids[j]);
          terms.push_back(product_node(std::move(factors)));
        }
        node->deriv = sum_node(std::move(terms));
        break;
      }
      case NodeKind::kQuotient: {
        const auto& u = node->kids[0];
        const auto& v = node->kids[1];
        auto num = sum_node({product_node({derivative_of(u), v}),
                             scale_node(-1.0, product_node({u, derivative_of(v)}))});
        node->deriv = quotient_node(std::move(num), product_node({v, v}));
        break;
      }
      case NodeKind::kScale:
        node->deriv = scale_node(node->c, derivative_of(node->kids[0]));
        break;
      case NodeKind::kPower:
        // d/dz [c (1 - lambda z)^a] = (-c a lambda) (1 - lambda z)^(a-1)
        node->deriv = power_node(node->lambda, node->alpha - 1.0,
                                 -node->c * node->alpha * node->lambda);
        break;
      case NodeKind::kExp: {
        Node self;
        self.kind = NodeKind::kExp;
        self.vanishes_nowhere = true;
        self.kids = {node->kids[0]};
        node->deriv = product_node({make_node(std::move(self)), derivative_of(node->kids[0])});
        break;
      }
      case NodeKind::kLog:
        node->deriv = quotient_node(derivative_of(node->kids[0]), node->kids[0]);
        break;
      case NodeKind::kGn: {
        Node gd;
        gd.kind = NodeKind::kGnDeriv;
        gd.n = node->n;
        gd.vanishes_nowhere = true;
        gd.kids = {node->kids[0]};
        node->deriv = product_node({make_node(std::move(gd)), derivative_of(node->kids[0])});
        break;
      }
      case NodeKind::kGnDeriv:
        throw std::logic_error("second derivative of an iterated-log chain is not supported");
    }
  });
  return node->deriv;
}

void collect_singular_angles(const Node& node, std::vector<double>& out) {
  if (node.kind == NodeKind::kPower && node.alpha != 0.0 && node.c != cplx{}) {
    // boundary zero of (1 - lambda z) at z = conj(lambda)
    out.push_back(std::arg(std::conj(node.lambda)));
  }
  for (const auto& k : node.kids) collect_singular_angles(*k, out);
}

}  // namespace
}  // namespace detail

AnalyticFn::AnalyticFn(detail::NodePtr node) : node_(std::move(node)) {
  if (!node_) throw std::invalid_argument("null expression tree");
}

AnalyticFn AnalyticFn::constant(const cplx& c) { return AnalyticFn(detail::const_node(c)); }

AnalyticFn AnalyticFn::identity() {
  detail::Node n;
  n.kind = detail::NodeKind::kIdentity;
  return AnalyticFn(std::make_shared<detail::Node>(std::move(n)));
}

AnalyticFn AnalyticFn::sum(std::vector<AnalyticFn> terms) {
  if (terms.empty()) throw std::invalid_argument("sum of no terms");
  std::vector<detail::NodePtr> kids;
  kids.reserve(terms.size());
  for (auto& t : terms) kids.push_back(t.node());
  return AnalyticFn(detail::sum_node(std::move(kids)));
}

AnalyticFn AnalyticFn::product(std::vector<AnalyticFn> factors) {
  if (factors.empty()) throw std::invalid_argument("product of no factors");
  std::vector<detail::NodePtr> kids;
  kids.reserve(factors.size());
  for (auto& f : factors) kids.push_back(f.node());
  return AnalyticFn(detail::product_node(std::move(kids)));
}

AnalyticFn AnalyticFn::quotient(AnalyticFn num, AnalyticFn den) {
  return AnalyticFn(detail::quotient_node(num.node(), den.node()));
}

AnalyticFn AnalyticFn::scale(const cplx& factor, AnalyticFn arg) {
  return AnalyticFn(detail::scale_node(factor, arg.node()));
}

AnalyticFn AnalyticFn::power(const cplx& lambda, double alpha, const cplx& scale) {
  return AnalyticFn(detail::power_node(lambda, alpha, scale));
}

AnalyticFn AnalyticFn::exp_of(AnalyticFn arg) {
  detail::Node n;
  n.kind = detail::NodeKind::kExp;
  n.vanishes_nowhere = true;
  n.kids = {arg.node()};
  return AnalyticFn(std::make_shared<detail::Node>(std::move(n)));
}

AnalyticFn AnalyticFn::log_of(AnalyticFn arg) {
  if (!arg.node()->vanishes_nowhere)
    throw std::invalid_argument(
        "log requires an argument certified zero-free on the disc "
        "(power/exp/product/quotient forms)");
  detail::Node n;
  n.kind = detail::NodeKind::kLog;
  n.kids = {arg.node()};
  return AnalyticFn(std::make_shared<detail::Node>(std::move(n)));
}

AnalyticFn AnalyticFn::gn_compose(int n, AnalyticFn arg) {
  if (n < 0) throw std::invalid_argument("iterated-log index must be nonnegative");
  detail::Node node;
  node.kind = detail::NodeKind::kGn;
  node.n = n;
  node.vanishes_nowhere = arg.node()->vanishes_nowhere;  // G_n(w) = 0 iff w = 0
  node.kids = {arg.node()};
  return AnalyticFn(std::make_shared<detail::Node>(std::move(node)));
}

AnalyticFn AnalyticFn::polynomial(std::vector<cplx> coeffs) {
  while (coeffs.size() > 1 && coeffs.back() == cplx{}) coeffs.pop_back();
  if (coeffs.empty()) return constant(0.0);
  std::vector<AnalyticFn> terms;
  terms.push_back(constant(coeffs[0]));
  AnalyticFn zk = identity();
  for (size_t k = 1; k < coeffs.size(); ++k) {
    if (k > 1) zk = product({zk, identity()});
    if (coeffs[k] != cplx{}) terms.push_back(scale(coeffs[k], zk));
  }
  if (terms.size() == 1) return terms[0];
  return sum(std::move(terms));
}

cplx AnalyticFn::value(const cplx& z) const {
  if (std::abs(z) >= 1.0 + 1e-15) throw std::domain_error("evaluation requires |z| < 1");
  return detail::eval(*node_, z);
}

cplx AnalyticFn::derivative(const cplx& z) const {
  if (std::abs(z) >= 1.0 + 1e-15) throw std::domain_error("evaluation requires |z| < 1");
  return detail::eval(*detail::derivative_of(node_), z);
}

AnalyticFn AnalyticFn::derivative_fn() const {
  return AnalyticFn(detail::derivative_of(node_));
}

bool AnalyticFn::vanishes_nowhere() const { return node_->vanishes_nowhere; }

std::vector<double> AnalyticFn::boundary_singular_angles() const {
  std::vector<double> out;
  detail::collect_singular_angles(*node_, out);
  return merge_angles(std::move(out), {});
}

ProductFn::ProductFn(std::shared_ptr<const HoloFn> a, std::shared_ptr<const HoloFn> b)
    : a_(std::move(a)), b_(std::move(b)) {
  if (!a_ || !b_) throw std::invalid_argument("null product factor");
}

cplx ProductFn::value(const cplx& z) const { return a_->value(z) * b_->value(z); }

cplx ProductFn::derivative(const cplx& z) const {
  return a_->derivative(z) * b_->value(z) + a_->value(z) * b_->derivative(z);
}

std::vector<double> ProductFn::boundary_singular_angles() const {
  return merge_angles(a_->boundary_singular_angles(), b_->boundary_singular_angles());
}

std::vector<double> ProductFn::concentration_angles() const {
  return merge_angles(a_->concentration_angles(), b_->concentration_angles());
}

std::vector<double> merge_angles(std::vector<double> a, const std::vector<double>& b,
                                 double tol) {
  a.insert(a.end(), b.begin(), b.end());
  for (double& t : a) {
    t = std::fmod(t, kTwoPi);
    if (t < 0) t += kTwoPi;
  }
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end(),
                      [tol](double x, double y) { return std::abs(x - y) < tol; }),
          a.end());
  if (a.size() > 1 && a.front() + kTwoPi - a.back() < tol) a.pop_back();
  return a;
}

SupNormEstimate sup_norm_estimate(const HoloFn& f, const QuadratureSpec& spec) {
  spec.validate();
  const double r = 1.0 - 1e-4;
  SupNormEstimate est;
  est.grid_radius = r;
  auto angles = f.concentration_angles();
  const int n = std::max(spec.angular_nodes, 2048);
  for (int j = 0; j < n; ++j) {
    double t = kTwoPi * (j + 0.5) / n;
    double v = std::abs(f.value(std::polar(r, t)));
    if (v > est.value) {
      est.value = v;
      est.attained_angle = t;
    }
  }
  // refine near declared singular angles where the modulus may spike
  for (double a : angles) {
    for (int j = -64; j <= 64; ++j) {
      double t = a + j * (kTwoPi / n) / 64.0;
      double v = std::abs(f.value(std::polar(r, t)));
      if (v > est.value) {
        est.value = v;
        est.attained_angle = t;
      }
    }
  }
  return est;
}

}  // namespace dmu

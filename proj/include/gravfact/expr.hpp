#pragma once

// Small analytic scalar expressions in chart coordinates. Expressions are
// immutable DAGs evaluated either on plain doubles or on jets, which is how
// every derivative in the geometry pipeline is obtained.

#include <cmath>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "gravfact/jet.hpp"

namespace gravfact {

class Expr;

namespace detail {

struct ExprNode {
  enum Kind { kConst, kCoord, kAdd, kSub, kMul, kDiv, kNeg, kSin, kCos, kExp, kLog, kSqrt, kPow } kind;
  double value = 0.0;  // kConst, or exponent for kPow
  int coord = -1;      // kCoord
  std::shared_ptr<const ExprNode> a, b;

  template <class T>
  T eval(const std::vector<T>& x) const {
    using std::cos;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sqrt;
    switch (kind) {
      case kConst: return constantLike(x, value);
      case kCoord: return x[coord];
      case kAdd: return a->eval(x) + b->eval(x);
      case kSub: return a->eval(x) - b->eval(x);
      case kMul: return a->eval(x) * b->eval(x);
      case kDiv: return a->eval(x) / b->eval(x);
      case kNeg: return -a->eval(x);
      case kSin: return sin(a->eval(x));
      case kCos: return cos(a->eval(x));
      case kExp: return exp(a->eval(x));
      case kLog: return log(a->eval(x));
      case kSqrt: return sqrt(a->eval(x));
      case kPow: return pow(a->eval(x), value);
    }
    return constantLike(x, 0.0);
  }

  Jet evalCached(const std::vector<Jet>& x,
                 std::unordered_map<const ExprNode*, Jet>& memo) const {
    auto it = memo.find(this);
    if (it != memo.end()) return it->second;
    Jet r = [&] {
      switch (kind) {
        case kConst: return constantLike(x, value);
        case kCoord: return x[coord];
        case kAdd: return a->evalCached(x, memo) + b->evalCached(x, memo);
        case kSub: return a->evalCached(x, memo) - b->evalCached(x, memo);
        case kMul: return a->evalCached(x, memo) * b->evalCached(x, memo);
        case kDiv: return a->evalCached(x, memo) / b->evalCached(x, memo);
        case kNeg: return -a->evalCached(x, memo);
        case kSin: return sin(a->evalCached(x, memo));
        case kCos: return cos(a->evalCached(x, memo));
        case kExp: return exp(a->evalCached(x, memo));
        case kLog: return log(a->evalCached(x, memo));
        case kSqrt: return sqrt(a->evalCached(x, memo));
        case kPow: return pow(a->evalCached(x, memo), value);
      }
      return constantLike(x, 0.0);
    }();
    memo.emplace(this, r);
    return r;
  }

  static double constantLike(const std::vector<double>&, double v) { return v; }
  static Jet constantLike(const std::vector<Jet>& x, double v) {
    return Jet::constant(x[0].dim(), x[0].order(), v);
  }
};

}  // namespace detail

class Expr {
 public:
  Expr() : Expr(0.0) {}
  Expr(double c) {
    auto n = std::make_shared<detail::ExprNode>();
    n->kind = detail::ExprNode::kConst;
    n->value = c;
    node_ = n;
  }

  static Expr coord(int i) {
    auto n = std::make_shared<detail::ExprNode>();
    n->kind = detail::ExprNode::kCoord;
    n->coord = i;
    return Expr(n);
  }

  double eval(const std::vector<double>& x) const { return node_->eval(x); }
  Jet eval(const std::vector<Jet>& x) const { return node_->eval(x); }

  // Shared-subtree evaluation: nodes reached more than once (directly or via
  // other expressions sharing structure) are evaluated a single time.
  using JetMemo = std::unordered_map<const detail::ExprNode*, Jet>;
  Jet evalCached(const std::vector<Jet>& x, JetMemo& memo) const {
    return node_->evalCached(x, memo);
  }

  // Jet of this expression at a chart point, to the given order.
  Jet jet(const std::vector<double>& x, int order) const {
    std::vector<Jet> seeds;
    seeds.reserve(x.size());
    for (size_t i = 0; i < x.size(); ++i)
      seeds.push_back(Jet::variable(static_cast<int>(x.size()), order, static_cast<int>(i), x[i]));
    return eval(seeds);
  }

  bool isZeroConst() const {
    return node_->kind == detail::ExprNode::kConst && node_->value == 0.0;
  }

  friend Expr operator+(const Expr& a, const Expr& b) { return binary(detail::ExprNode::kAdd, a, b); }
  friend Expr operator-(const Expr& a, const Expr& b) { return binary(detail::ExprNode::kSub, a, b); }
  friend Expr operator*(const Expr& a, const Expr& b) { return binary(detail::ExprNode::kMul, a, b); }
  friend Expr operator/(const Expr& a, const Expr& b) { return binary(detail::ExprNode::kDiv, a, b); }
  friend Expr operator-(const Expr& a) { return unary(detail::ExprNode::kNeg, a); }

  friend Expr sin(const Expr& a) { return unary(detail::ExprNode::kSin, a); }
  friend Expr cos(const Expr& a) { return unary(detail::ExprNode::kCos, a); }
  friend Expr exp(const Expr& a) { return unary(detail::ExprNode::kExp, a); }
  friend Expr log(const Expr& a) { return unary(detail::ExprNode::kLog, a); }
  friend Expr sqrt(const Expr& a) { return unary(detail::ExprNode::kSqrt, a); }
  friend Expr pow(const Expr& a, double p) { return unary(detail::ExprNode::kPow, a, p); }

  // Symbolic partial derivative with respect to coordinate i.
  Expr d(int i) const {
    using N = detail::ExprNode;
    Expr a = node_->a ? Expr(node_->a) : Expr(0.0);
    Expr b = node_->b ? Expr(node_->b) : Expr(0.0);
    switch (node_->kind) {
      case N::kConst: return Expr(0.0);
      case N::kCoord: return Expr(node_->coord == i ? 1.0 : 0.0);
      case N::kAdd: return a.d(i) + b.d(i);
      case N::kSub: return a.d(i) - b.d(i);
      case N::kMul: return a.d(i) * b + a * b.d(i);
      case N::kDiv: return (a.d(i) * b - a * b.d(i)) / (b * b);
      case N::kNeg: return -a.d(i);
      case N::kSin: return cos(a) * a.d(i);
      case N::kCos: return -sin(a) * a.d(i);
      case N::kExp: return exp(a) * a.d(i);
      case N::kLog: return a.d(i) / a;
      case N::kSqrt: return a.d(i) / (Expr(2.0) * sqrt(a));
      case N::kPow: return Expr(node_->value) * pow(a, node_->value - 1.0) * a.d(i);
    }
    return Expr(0.0);
  }

 private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> n) : node_(std::move(n)) {}

  static Expr unary(detail::ExprNode::Kind k, const Expr& a, double value = 0.0) {
    auto n = std::make_shared<detail::ExprNode>();
    n->kind = k;
    n->a = a.node_;
    n->value = value;
    return Expr(n);
  }
  static Expr binary(detail::ExprNode::Kind k, const Expr& a, const Expr& b) {
    auto n = std::make_shared<detail::ExprNode>();
    n->kind = k;
    n->a = a.node_;
    n->b = b.node_;
    return Expr(n);
  }

  std::shared_ptr<const detail::ExprNode> node_;
};

}  // namespace gravfact

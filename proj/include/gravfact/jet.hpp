#pragma once

// Truncated multivariate Taylor arithmetic (forward-mode AD to arbitrary
// mixed order). A Jet stores the Taylor coefficients c_alpha = d^alpha f / alpha!
// of a scalar function at a point, for all multi-indices |alpha| <= order.
// All elementary operations propagate every mixed partial exactly, so nested
// derivatives of analytic expressions are exact to roundoff.

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <memory>
#include <map>
#include <mutex>
#include <vector>

namespace gravfact {

namespace detail {

// Index tables for a given (dim, order), shared and immutable once built.
struct JetTable {
  int dim = 0;
  int order = 0;
  std::vector<std::array<int, 4>> exps;  // multi-index per slot (dim <= 4)
  std::vector<int> degree;               // |alpha| per slot
  std::vector<int> keyToIndex;           // packed exponent key -> slot, -1 if absent
  int keyStride = 0;                     // base for packing (order+1)

  int pack(const std::array<int, 4>& e) const {
    int k = 0;
    for (int i = dim - 1; i >= 0; --i) k = k * keyStride + e[i];
    return k;
  }

  JetTable(int d, int ord) : dim(d), order(ord), keyStride(ord + 1) {
    assert(d >= 1 && d <= 4);
    std::array<int, 4> e{0, 0, 0, 0};
    // enumerate by total degree, lexicographic within each degree
    for (int deg = 0; deg <= ord; ++deg) {
      enumerate(e, 0, deg);
    }
    int keySpace = 1;
    for (int i = 0; i < dim; ++i) keySpace *= keyStride;
    keyToIndex.assign(keySpace, -1);
    for (size_t s = 0; s < exps.size(); ++s) keyToIndex[pack(exps[s])] = static_cast<int>(s);
  }

 private:
  void enumerate(std::array<int, 4>& e, int pos, int remaining) {
    if (pos == dim - 1) {
      e[pos] = remaining;
      exps.push_back(e);
      degree.push_back(sumExp(e));
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      e[pos] = v;
      enumerate(e, pos + 1, remaining - v);
    }
    e[pos] = 0;
  }
  int sumExp(const std::array<int, 4>& e) const {
    int s = 0;
    for (int i = 0; i < dim; ++i) s += e[i];
    return s;
  }
};

inline const JetTable& jetTable(int dim, int order) {
  static std::map<std::pair<int, int>, std::unique_ptr<JetTable>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(dim, order);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<JetTable>(dim, order)).first;
  }
  return *it->second;
}

}  // namespace detail

class Jet {
 public:
  Jet() = default;
  Jet(int dim, int order, double value = 0.0) : tab_(&detail::jetTable(dim, order)) {
    c_.assign(tab_->exps.size(), 0.0);
    c_[0] = value;
  }

  static Jet constant(int dim, int order, double v) { return Jet(dim, order, v); }

  // Seed for coordinate i: value x_i, unit first derivative in direction i.
  static Jet variable(int dim, int order, int i, double xi) {
    Jet j(dim, order, xi);
    if (order >= 1) {
      std::array<int, 4> e{0, 0, 0, 0};
      e[i] = 1;
      j.c_[j.tab_->keyToIndex[j.tab_->pack(e)]] = 1.0;
    }
    return j;
  }

  int dim() const { return tab_->dim; }
  int order() const { return tab_->order; }
  double value() const { return c_[0]; }

  // d^alpha f for a multi-index (not divided by alpha!).
  double partial(const std::array<int, 4>& alpha) const {
    int key = tab_->pack(alpha);
    int s = tab_->keyToIndex[key];
    if (s < 0) return 0.0;
    double fact = 1.0;
    for (int i = 0; i < tab_->dim; ++i)
      for (int k = 2; k <= alpha[i]; ++k) fact *= k;
    return c_[s] * fact;
  }
  double partial(std::initializer_list<int> alpha) const {
    std::array<int, 4> a{0, 0, 0, 0};
    int i = 0;
    for (int v : alpha) a[i++] = v;
    return partial(a);
  }

  // Taylor coefficient access (c_alpha = d^alpha f / alpha!).
  double coeff(const std::array<int, 4>& alpha) const {
    int s = tab_->keyToIndex[tab_->pack(alpha)];
    return s < 0 ? 0.0 : c_[s];
  }

  // First partial d_i as a jet of order-1.
  Jet deriv(int i) const {
    assert(order() >= 1);
    Jet out(dim(), order() - 1);
    const auto& ot = *out.tab_;
    for (size_t s = 0; s < ot.exps.size(); ++s) {
      std::array<int, 4> e = ot.exps[s];
      e[i] += 1;
      int src = tab_->keyToIndex[tab_->pack(e)];
      out.c_[s] = (src < 0) ? 0.0 : c_[src] * e[i];
    }
    return out;
  }

  // Truncate to a lower order.
  double maxAbsCoeff() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  Jet truncated(int newOrder) const {
    assert(newOrder <= order());
    if (newOrder == order()) return *this;
    Jet out(dim(), newOrder);
    for (size_t s = 0; s < out.tab_->exps.size(); ++s) out.c_[s] = c_[s];
    return out;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    int ord = std::min(a.order(), b.order());
    Jet x = a.truncated(ord), y = b.truncated(ord);
    for (size_t s = 0; s < x.c_.size(); ++s) x.c_[s] += y.c_[s];
    return x;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    int ord = std::min(a.order(), b.order());
    Jet x = a.truncated(ord), y = b.truncated(ord);
    for (size_t s = 0; s < x.c_.size(); ++s) x.c_[s] -= y.c_[s];
    return x;
  }
  friend Jet operator-(Jet a) {
    for (double& v : a.c_) v = -v;
    return a;
  }
  friend Jet operator+(Jet a, double b) {
    a.c_[0] += b;
    return a;
  }
  friend Jet operator+(double b, Jet a) {
    a.c_[0] += b;
    return a;
  }
  friend Jet operator-(Jet a, double b) {
    a.c_[0] -= b;
    return a;
  }
  friend Jet operator-(double b, const Jet& a) { return -a + b; }
  friend Jet operator*(Jet a, double b) {
    for (double& v : a.c_) v *= b;
    return a;
  }
  friend Jet operator*(double b, Jet a) { return a * b; }
  friend Jet operator/(Jet a, double b) { return a * (1.0 / b); }

  friend Jet operator*(const Jet& a, const Jet& b) {
    int ord = std::min(a.order(), b.order());
    Jet out(a.dim(), ord);
    const auto& t = *out.tab_;
    const auto& ta = *a.tab_;
    const auto& tb = *b.tab_;
    size_t na = 0, nb = 0;
    // only slots of degree <= ord contribute
    for (na = 0; na < ta.exps.size() && ta.degree[na] <= ord; ++na) {}
    for (nb = 0; nb < tb.exps.size() && tb.degree[nb] <= ord; ++nb) {}
    for (size_t i = 0; i < na; ++i) {
      double ai = a.c_[i];
      if (ai == 0.0) continue;
      int di = ta.degree[i];
      for (size_t j = 0; j < nb && tb.degree[j] + di <= ord; ++j) {
        double bj = b.c_[j];
        if (bj == 0.0) continue;
        std::array<int, 4> e = ta.exps[i];
        for (int k = 0; k < t.dim; ++k) e[k] += tb.exps[j][k];
        out.c_[t.keyToIndex[t.pack(e)]] += ai * bj;
      }
    }
    return out;
  }

  friend Jet operator/(const Jet& a, const Jet& b) { return a * b.reciprocal(); }
  friend Jet operator/(double a, const Jet& b) { return b.reciprocal() * a; }

  Jet reciprocal() const {
    double v = value();
    assert(v != 0.0);
    std::vector<double> d(order() + 1);
    double p = 1.0 / v;
    for (int k = 0; k <= order(); ++k) {
      d[k] = p;  // f^(k)(v)/k! for f = 1/x is (-1)^k / v^{k+1}
      p *= -1.0 / v;
    }
    return compose(d);
  }

  // Compose with a univariate analytic function given its scaled derivatives
  // taylor[k] = f^(k)(value())/k!.
  Jet compose(const std::vector<double>& taylor) const {
    Jet delta = *this;
    delta.c_[0] = 0.0;
    Jet out(dim(), order(), taylor[0]);
    Jet pow(dim(), order(), 1.0);
    for (int k = 1; k <= order() && k < static_cast<int>(taylor.size()); ++k) {
      pow = pow * delta;
      out = out + pow * taylor[k];
    }
    return out;
  }

  friend Jet sin(const Jet& a);
  friend Jet cos(const Jet& a);
  friend Jet exp(const Jet& a);
  friend Jet log(const Jet& a);
  friend Jet sqrt(const Jet& a);
  friend Jet pow(const Jet& a, double p);
  friend Jet tanh(const Jet& a);

 private:
  const detail::JetTable* tab_ = nullptr;
  std::vector<double> c_;
};

inline Jet sin(const Jet& a) {
  double v = a.value();
  std::vector<double> d(a.order() + 1);
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    switch (k % 4) {
      case 0: d[k] = std::sin(v) / fact; break;
      case 1: d[k] = std::cos(v) / fact; break;
      case 2: d[k] = -std::sin(v) / fact; break;
      default: d[k] = -std::cos(v) / fact; break;
    }
  }
  return a.compose(d);
}

inline Jet cos(const Jet& a) {
  double v = a.value();
  std::vector<double> d(a.order() + 1);
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    switch (k % 4) {
      case 0: d[k] = std::cos(v) / fact; break;
      case 1: d[k] = -std::sin(v) / fact; break;
      case 2: d[k] = -std::cos(v) / fact; break;
      default: d[k] = std::sin(v) / fact; break;
    }
  }
  return a.compose(d);
}

inline Jet exp(const Jet& a) {
  double e = std::exp(a.value());
  std::vector<double> d(a.order() + 1);
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    d[k] = e / fact;
  }
  return a.compose(d);
}

inline Jet log(const Jet& a) {
  double v = a.value();
  assert(v > 0.0);
  std::vector<double> d(a.order() + 1);
  d[0] = std::log(v);
  double p = 1.0 / v;
  for (int k = 1; k <= a.order(); ++k) {
    d[k] = ((k % 2 == 1) ? 1.0 : -1.0) * p / k;
    p /= v;
  }
  return a.compose(d);
}

inline Jet sqrt(const Jet& a) { return pow(a, 0.5); }

inline Jet pow(const Jet& a, double p) {
  double v = a.value();
  assert(v != 0.0);
  std::vector<double> d(a.order() + 1);
  double coef = std::pow(v, p);
  d[0] = coef;
  double binom = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    binom *= (p - (k - 1)) / k;
    d[k] = binom * std::pow(v, p - k);
  }
  return a.compose(d);
}

inline Jet tanh(const Jet& a) {
  // via exp; adequate orders for our use
  Jet e2 = exp(a * 2.0);
  return (e2 - 1.0) / (e2 + 1.0);
}

}  // namespace gravfact

#pragma once

// Gauss-Legendre nodes/weights (cached per order) and adaptive Gauss-Kronrod
// integration on an interval.

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "gravfact/errors.hpp"

namespace gravfact {

struct GLRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Nodes are Legendre roots found by Newton iteration from Chebyshev guesses.
inline const GLRule& gaussLegendre(int n) {
  static std::map<int, GLRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GLRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.nodes[i] = x;
    r.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

// Adaptive integration by interval bisection with embedded GL(n)/GL(2n)
// error estimation.
inline double integrateAdaptive(const std::function<double(double)>& f, double a, double b,
                                double tol = 1e-12, int depth = 0) {
  const GLRule& lo = gaussLegendre(10);
  const GLRule& hi = gaussLegendre(21);
  auto apply = [&](const GLRule& r) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
    return s * half;
  };
  double slo = apply(lo), shi = apply(hi);
  if (std::abs(shi - slo) <= tol * std::max(1.0, std::abs(shi))) return shi;
  if (depth > 24) throw QuadratureDivergence("adaptive quadrature failed to converge");
  double mid = 0.5 * (a + b);
  return integrateAdaptive(f, a, mid, tol * 0.6, depth + 1) +
         integrateAdaptive(f, mid, b, tol * 0.6, depth + 1);
}

}  // namespace gravfact

#pragma once

// Dense jet-valued tensors at a single chart point. Slot variance is tracked
// so raising/lowering and divergences land in the declared valence.

#include <cassert>
#include <cstdint>
#include <vector>

#include "gravfact/jet.hpp"

namespace gravfact {

struct TensorJ {
  int dim = 0;
  std::vector<bool> up;  // per-slot variance: true = contravariant
  std::vector<Jet> c;    // dense, row-major over slots

  TensorJ() = default;
  TensorJ(int d, std::vector<bool> variance, int jetDim, int jetOrder)
      : dim(d), up(std::move(variance)) {
    size_t n = 1;
    for (size_t s = 0; s < up.size(); ++s) n *= dim;
    c.assign(n, Jet::constant(jetDim, jetOrder, 0.0));
  }

  int slots() const { return static_cast<int>(up.size()); }
  int order() const { return c[0].order(); }

  size_t flat(const std::vector<int>& idx) const {
    size_t f = 0;
    for (size_t s = 0; s < idx.size(); ++s) f = f * dim + idx[s];
    return f;
  }
  Jet& at(const std::vector<int>& idx) { return c[flat(idx)]; }
  const Jet& at(const std::vector<int>& idx) const { return c[flat(idx)]; }

  Jet& at2(int i, int j) { return c[static_cast<size_t>(i) * dim + j]; }
  const Jet& at2(int i, int j) const { return c[static_cast<size_t>(i) * dim + j]; }
  Jet& at1(int i) { return c[i]; }
  const Jet& at1(int i) const { return c[i]; }

  double val(const std::vector<int>& idx) const { return at(idx).value(); }

  double maxAbsValue() const {
    double m = 0.0;
    for (const Jet& j : c) m = std::max(m, std::abs(j.value()));
    return m;
  }

  TensorJ& scale(double s) {
    for (Jet& j : c) j = j * s;
    return *this;
  }

  friend TensorJ operator+(const TensorJ& a, const TensorJ& b) {
    assert(a.up == b.up);
    TensorJ out = a;
    for (size_t i = 0; i < out.c.size(); ++i) out.c[i] = a.c[i] + b.c[i];
    return out;
  }
  friend TensorJ operator-(const TensorJ& a, const TensorJ& b) {
    assert(a.up == b.up);
    TensorJ out = a;
    for (size_t i = 0; i < out.c.size(); ++i) out.c[i] = a.c[i] - b.c[i];
    return out;
  }
  friend TensorJ operator*(const TensorJ& a, double s) {
    TensorJ out = a;
    return out.scale(s);
  }
  friend TensorJ operator*(double s, const TensorJ& a) { return a * s; }
};

// Iterate all index tuples of a given rank.
inline bool nextIndex(std::vector<int>& idx, int dim) {
  for (int s = static_cast<int>(idx.size()) - 1; s >= 0; --s) {
    if (++idx[s] < dim) return true;
    idx[s] = 0;
  }
  return false;
}

}  // namespace gravfact

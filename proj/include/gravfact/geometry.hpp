#pragma once

// Pointwise curvature pipeline. All quantities are jet-valued so that
// covariant operators compose: each derivative consumes one jet order.

#include <vector>

#include "gravfact/spacetime.hpp"
#include "gravfact/tensor.hpp"

namespace gravfact {

// Metric data expanded to a given jet order at one chart point.
class MetricEval {
 public:
  MetricEval(const Spacetime& st, const std::vector<double>& x, int order);

  int dim;
  int order;
  std::vector<double> x;
  TensorJ g;     // (0,2), full order
  TensorJ ginv;  // (2,0), full order
  Jet detg;
  Jet sqrtAbsDet;

  // Christoffel symbols Gamma^a_{bc}, jet order-1. Cached.
  const TensorJ& christoffel() const;
  // True when every Christoffel jet coefficient vanishes (constant metric).
  bool christoffelZero() const;

 private:
  mutable bool haveGamma_ = false;
  mutable bool gammaZero_ = false;
  mutable TensorJ gamma_;
};

// Covariant derivative: prepends one covariant slot, consumes one jet order.
TensorJ covariantDeriv(const MetricEval& me, const TensorJ& t);

// Curvature. riemann13 is R^a_{bcd}, riemann04 the fully lowered form.
struct Curvature {
  TensorJ riemann13;
  TensorJ riemann04;
  TensorJ ricci;   // (0,2)
  Jet scalar;
};
Curvature curvature(const MetricEval& me);

TensorJ weyl04(const MetricEval& me, const Curvature& cv);
TensorJ weyl13(const MetricEval& me, const Curvature& cv);
TensorJ bach(const MetricEval& me);  // needs order >= 4

Jet kretschmann(const MetricEval& me, const Curvature& cv);
Jet weylNormSq(const MetricEval& me);
Jet weylActionDensity(const MetricEval& me);  // |W|^2 sqrt|det g|

// Index gymnastics on jet tensors (order preserved).
TensorJ raiseSlot(const MetricEval& me, const TensorJ& t, int slot);
TensorJ lowerSlot(const MetricEval& me, const TensorJ& t, int slot);
Jet traceSym2(const MetricEval& me, const TensorJ& h);       // g^{ab} h_{ab}
Jet traceSym2Con(const MetricEval& me, const TensorJ& hd);   // g_{ab} hd^{ab}
TensorJ traceReverse(const MetricEval& me, const TensorJ& h); // h - (1/2) tr h g, either valence

// Lie calculus (one jet order consumed).
TensorJ lieMetric(const MetricEval& me, const TensorJ& X);   // (L_X g)_{ab}
TensorJ lieBracket(const TensorJ& X, const TensorJ& Y);      // [X,Y]^a
TensorJ lieTensor(const TensorJ& t, const TensorJ& X);       // coordinate Lie derivative

// Divergences (one jet order consumed).
TensorJ divSym2Cov(const MetricEval& me, const TensorJ& h);  // nabla^a h_{ab} -> (0,1)
TensorJ divSym2Con(const MetricEval& me, const TensorJ& hd); // nabla_a hd^{ab} -> (1,0)

// Second-order operators (two jet orders consumed).
// Linearized Ricci: DRic(h)_{ab} = (1/2)(-box h_{ab} - nabla_a nabla_b tr h
//   + nabla^c nabla_a h_{bc} + nabla^c nabla_b h_{ac}), valid on any background.
TensorJ linearizedRicci(const MetricEval& me, const TensorJ& h);
// -nabla^c nabla_c h_{ab} - 2 R_a{}^c{}_b{}^d h_{cd} on symmetric (0,2)
// (the sign of the curvature endomorphism is relative to this module's
// Riemann sign convention; see the calibration note in the source).
TensorJ tensorWaveCov(const MetricEval& me, const TensorJ& h);
// Same operator conjugated by index raising, on symmetric (2,0).
TensorJ tensorWaveCon(const MetricEval& me, const TensorJ& hd);
// -nabla^c nabla_c on vectors / one-forms (componentwise wave operator).
TensorJ waveRank1(const MetricEval& me, const TensorJ& v);

// Finite-difference directional derivative of a curvature functional along a
/// metric perturbation k (expression matrix): d/dt F(g + t k) at t=0 via
// central differences with one Richardson level.
TensorJ linearizedRicciFD(const Spacetime& st, const std::vector<std::vector<Expr>>& k,
                          const std::vector<double>& x, double step = 1e-3);
TensorJ linearizedBachFD(const Spacetime& st, const std::vector<std::vector<Expr>>& k,
                         const std::vector<double>& x, double step = 1e-3);

// (L_X g)_{ab} as a symbolic expression matrix, for feeding the FD linearizers.
std::vector<std::vector<Expr>> lieMetricExprs(const Spacetime& st,
                                              const std::vector<Expr>& X);

}  // namespace gravfact

#pragma once

// The graded field complex of linearized gravity and its conformal extension:
// differential Q, witness W, P = QW + WQ, the shifted pairing, and the
// identity-suite verifier.
//
// Degree table (GR model):
//   -1: ghost, vector field X          (1,0)
//    0: field h, symmetric (0,2)
//    1: antifield h-dagger, symmetric (2,0)
//    2: antighost, one-form            (0,1)
// The conformal model adds a scalar ghost f at degree -1 and a scalar
// antighost f-dagger at degree 2.

#include <functional>
#include <map>
#include <optional>
#include <random>

#include "gravfact/geometry.hpp"
#include "gravfact/report.hpp"
#include "gravfact/spacetime.hpp"

namespace gravfact {

enum class Model { GR, Conformal };

struct TensorFieldExpr {
  std::vector<bool> up;
  std::vector<Expr> comp;  // dim^rank, row-major

  bool empty() const { return comp.empty(); }
  TensorJ evalJets(int dim, const std::vector<double>& x, int order,
                   Expr::JetMemo* memo = nullptr) const;
};

std::vector<bool> degreeValence(int degree);

struct GradedSection {
  Model model = Model::GR;
  std::map<int, TensorFieldExpr> byDegree;
  std::map<int, Expr> scalarByDegree;  // Conformal only: -1 and 2
};

struct GradedJets {
  std::map<int, TensorJ> comp;
  std::map<int, Jet> scalar;
};

GradedJets evalSection(const GradedSection& s, const Spacetime& st,
                       const std::vector<double>& x, int order);

// Jet-level operators; these compose (each consumes jet orders as it
// differentiates).
GradedJets applyQJets(Model model, const MetricEval& me, const GradedJets& s);
GradedJets applyWJets(const MetricEval& me, const GradedJets& s);
GradedJets applyPJets(const MetricEval& me, const GradedJets& s);

// Point-value wrappers matching the module interface.
GradedJets applyQ(Model model, const Spacetime& g, const GradedSection& s,
                  const std::vector<double>& x, int order = 4);
GradedJets applyW(const Spacetime& g, const GradedSection& s,
                  const std::vector<double>& x, int order = 4);
GradedJets applyP(const Spacetime& g, const GradedSection& s,
                  const std::vector<double>& x, int order = 4);

// Koszul sign table of the (-1)-shifted pairing, frozen empirically: the
// compatibility identity <Q a, b> + (-1)^{|a|} <a, Q b> = 0 holds with these.
double pairingSign(int degree);  // +1 for degrees -1, 0; -1 for 1, 2
// Pointwise contraction sum_p sign(p) * <a_p, b_{1-p}> (natural duality, no
// metric needed).
double pairContractValue(const GradedJets& a, const GradedJets& b);

// Tensor-product Gauss-Legendre integral of f(me) * sqrt|det g| over the
// chart box, with `nodes` points per axis and jets of the given order.
double integrateBox(const Spacetime& st, int order, int nodes,
                    const std::function<double(const MetricEval&)>& f);
// One-pass variant: fn receives the point evaluation and the quadrature
// weight (already including sqrt|det g|) and accumulates into its own sums.
void integrateBoxAccum(const Spacetime& st, int order, int nodes,
                       const std::function<void(const MetricEval&, double)>& fn);

// <s1, s2> for compactly supported sections (integral of the pointwise
// contraction against vol_g).
double pairing(const Spacetime& g, const GradedSection& s1, const GradedSection& s2,
               int nodes = 12);

struct BVActionTerms {
  double quadratic;  // <h, D h>
  double mixing;     // <h-dagger, L_X g>
  double ghost;      // antighost against the odd bracket [X1, X2] = X1 X2 + X2 X1
};
BVActionTerms bvActionTerms(const Spacetime& g, const TensorFieldExpr& h,
                            const TensorFieldExpr& hdag, const TensorFieldExpr& X,
                            const TensorFieldExpr& antighost, const TensorFieldExpr& X1,
                            const TensorFieldExpr& X2, int nodes = 12);
double bvQuadratic(const Spacetime& g, const TensorFieldExpr& h1, const TensorFieldExpr& h2,
                   int nodes = 12);

// Degree-wise injection (vanishing scalar summands). Requires a conformally
// flat Einstein background.
GradedSection inclusionGRtoConformal(const Spacetime& g, const GradedSection& s);

// Identity suite: Q^2 = 0, QWW = WWQ, P identification, W self-adjointness,
// pairing compatibility. Failures come back as failing rows, not throws.
VerificationReport verifyComplex(Model model, const Spacetime& g, int trials, unsigned seed);

// Random low-degree polynomial section for trials (valence per degree table).
TensorFieldExpr randomTensorField(std::mt19937_64& rng, int dim, const std::vector<bool>& up,
                                  int polyDegree = 3);
// Polynomial bump envelope (prod_i (1-u_i^2)^4) vanishing on the chart
// boundary.
Expr bumpExpr(const Spacetime& st, int power = 4);

}  // namespace gravfact

#pragma once

// Linear and polynomial classical observables over compact mode sections on
// flat torus slabs: formal words in the symmetric algebra of shifted linear
// observables, the differential extended by the graded Leibniz rule, the
// three Poisson pairings, pushforwards along Loc morphisms, factorization
// and time-ordered products, and the theorem-level verification suites
// (Einstein causality, Cauchy constancy, prefactorization axioms).
//
// Observables are finite formal words; evaluation against probe sections is
// their only semantics.

#include <random>
#include <vector>

#include "gravfact/causal.hpp"
#include "gravfact/green.hpp"
#include "gravfact/report.hpp"

namespace gravfact {

// Parity of a homogeneous section after the down-shift by one: complex
// degree d becomes d - 1, so ghosts (-1) and antifields (1) are even while
// fields (0) and antighosts (2) are odd.
int shiftedParity(int degree);
// Parity of a graded section; throws Error when the section mixes parities.
int sectionParity(const GradedModeSection& s);

struct Word {
  double coeff = 1.0;
  std::vector<GradedModeSection> factors;  // order carries the Koszul signs
};

struct Observable {
  Spacetime st;  // declaring slab
  std::vector<Word> words;
  int maxPolyDegree = 8;
};

Observable unitObservable(const Spacetime& st);
Observable linearObservable(const Spacetime& st, const GradedModeSection& psi);
Observable obsAdd(const Observable& a, const Observable& b);
Observable obsScale(const Observable& a, double s);
// Word-concatenation product (the symmetric-algebra multiplication with the
// factor order preserved for sign bookkeeping).
Observable obsMultiply(const Observable& a, const Observable& b);

// Evaluate against a probe section: each linear factor contributes its
// pairing with the probe, words multiply, the observable sums.
double evaluate(const Observable& o, const GradedModeSection& probe);

// The differential extended by the graded Leibniz rule with the shifted
// Koszul signs.
Observable applyQObs(const Observable& o);

enum class PoissonKind { ShiftedMinus1, Unshifted0, Dirac };

// The three pairings on compact linear observables: the plain integral
// pairing, and its compositions with W G and W G_D.
double tau(PoissonKind kind, const Spacetime& st, const GradedModeSection& psi1,
           const GradedModeSection& psi2, int modeCutoff = 64);

// Extension by zero along a slab inclusion (time and spatial torus
// translation): time profiles shift, spatial modes pick up phase rotations.
GradedModeSection pushforwardSection(const LocMorphism& f, const GradedModeSection& psi);
// Restriction along the inverse translation (adjoint of pushforward).
GradedModeSection pullbackSection(const LocMorphism& f, const GradedModeSection& u);
Observable pushforward(const LocMorphism& f, const Observable& o);

// mu^(n) of the pushed observables; images must be pairwise disjoint. The
// empty tuple yields the unit observable on the target.
Observable factorizationProduct(const Spacetime& target, const std::vector<LocMorphism>& fs,
                                const std::vector<Observable>& os);
// factorizationProduct applied in a causal-module time-order permutation.
Observable timeOrderedProduct(const Spacetime& target, const std::vector<LocMorphism>& fs,
                              const std::vector<Observable>& os);

// Randomized theorem-level suites (flat torus slabs).
VerificationReport suiteEinsteinCausality(const Spacetime& st, int trials, unsigned seed);
VerificationReport suiteCauchyConstancy(const LocMorphism& f, int trials, unsigned seed);
VerificationReport suitePrefactorizationAxioms(const Spacetime& st, unsigned seed);

// Spatially localized compact section: time bump times a truncated Fourier
// expansion of a spatial bump, placed at the given degree and component.
GradedModeSection localizedSection(const Spacetime& st, int degree, int index,
                                   double t0, double t1, const std::vector<double>& center,
                                   const std::vector<double>& halfwidth, int nMax);

// Sup norm over a sample grid, used as the scale in suite rows.
double sectionSupNorm(const Spacetime& st, const GradedModeSection& s, int grid = 24);

}  // namespace gravfact

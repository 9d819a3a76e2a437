#pragma once

// Spectral retarded/advanced Green operators for the graded wave operator P
// on flat torus slabs, the propagators G and G_D, the Green homotopies
// Lambda_\pm = W G_\pm, and the time-slice support-reduction construction.
// Sections are finite sums of spatial Fourier modes with piecewise trig-poly
// time profiles, so every operator here is evaluated in closed form.

#include <map>
#include <random>
#include <utility>
#include <vector>

#include "gravfact/spacetime.hpp"
#include "gravfact/trigpoly.hpp"

namespace gravfact {

struct SpatialMode {
  std::vector<int> n;       // nonnegative mode index per spatial axis
  std::vector<bool> isSin;  // factor sin(k x) instead of cos(k x); n=0 -> cos

  bool operator<(const SpatialMode& o) const {
    if (n != o.n) return n < o.n;
    return isSin < o.isSin;
  }
  bool operator==(const SpatialMode& o) const { return n == o.n && isSin == o.isSin; }
};

// Scalar function on the slab: sum over modes of a(t) * prod_i trig(k_i x_i).
struct ModeFn {
  std::map<SpatialMode, TrigPoly> terms;

  bool empty() const { return terms.empty(); }
  double eval(const Spacetime& st, const std::vector<double>& x) const;
  void add(const SpatialMode& mode, const TrigPoly& a);
  ModeFn operator+(const ModeFn& o) const;
  ModeFn operator-(const ModeFn& o) const;
  ModeFn operator*(double s) const;
  // Multiply by a function of t alone.
  ModeFn timesTime(const TrigPoly& chi) const;
  double maxAbsCoeff() const;
  int maxModeIndex() const;
};

// Graded section in mode representation (GR model degree table).
struct GradedModeSection {
  std::map<int, std::vector<ModeFn>> comp;  // degree -> dense components
};

// d/dt and d/dx_axis (axis >= 1), exact.
ModeFn modeDt(const ModeFn& f);
ModeFn modeDx(const Spacetime& st, const ModeFn& f, int axis);
// P f = (d_t^2 - Laplacian) f componentwise (flat slab).
ModeFn modeWave(const Spacetime& st, const ModeFn& f);

// Flat-background differential, witness, and P on mode sections; these agree
// with the jet-based complex-module operators on the common domain.
GradedModeSection applyQModes(const Spacetime& st, const GradedModeSection& s);
GradedModeSection applyWModes(const Spacetime& st, const GradedModeSection& s);
GradedModeSection applyPModes(const Spacetime& st, const GradedModeSection& s);
// Componentwise scalar wave operator d_t^2 - Laplacian. On four-dimensional
// slabs this coincides with applyPModes; in 1+1 the field/antifield rows of
// QW + WQ degenerate (the linearized Einstein tensor vanishes identically in
// two dimensions) and the Green operators invert this operator instead.
GradedModeSection applyWaveModes(const Spacetime& st, const GradedModeSection& s);

// <s1, s2> over the slab: Koszul-signed componentwise contraction integrated
// with mode orthogonality (exact).
double pairingModes(const Spacetime& st, const GradedModeSection& a,
                    const GradedModeSection& b);

struct GreenOperatorHandle {
  Spacetime st;  // flat torus slab, dim 2 or 4
  bool retarded = true;
  int modeCutoff = 64;
  double quadratureTol = 1e-10;
  double boundaryMargin = 0.05;  // required gap between supp psi and slab ends
};

// G_\pm psi per component and spatial mode via the exact Duhamel kernel
// theta(+-tau) sin(|k| tau)/|k| (tau theta(+-tau) at k = 0).
GradedModeSection greenApply(const GreenOperatorHandle& h, const GradedModeSection& psi);

struct Propagated {
  GradedModeSection G;   // retarded minus advanced
  GradedModeSection GD;  // Dirac: (retarded + advanced)/2
};
Propagated propagators(const GreenOperatorHandle& retardedHandle,
                       const GreenOperatorHandle& advancedHandle,
                       const GradedModeSection& psi);

// Lambda_\pm s = W G_\pm s.
GradedModeSection greenHomotopy(const GreenOperatorHandle& h, const GradedModeSection& s);

struct TemporalCutoff {
  double tMinus, tPlus;
  TrigPoly chi;  // 1 below tMinus, 0 above tPlus
};
TemporalCutoff makeCutoff(double tMinus, double tPlus);

struct TimeSliceResult {
  GradedModeSection psiM;         // -[P, chi] G psi, supported in the cutoff slab
  GradedModeSection certificate;  // h with psi - psiM = P h
};
// imageSlab is the time interval of the sub-slab the cutoff must sit inside.
TimeSliceResult timeSliceReduce(const GreenOperatorHandle& base, const GradedModeSection& psi,
                                const TemporalCutoff& cutoff,
                                std::pair<double, double> imageSlab);

// Single-component helper for tests: component `index` at `degree` set to
// a(t) cos/sin(k_n x) (first spatial axis).
GradedModeSection singleModeSection(const Spacetime& st, int degree, int index, int n,
                                    bool isSin, const TrigPoly& a);
// Random compact section with modes up to nMax and bump time profiles.
GradedModeSection randomModeSection(std::mt19937_64& rng, const Spacetime& st, int nMax,
                                    double t0, double t1,
                                    const std::vector<int>& degrees);

double sectionMaxAbsCoeff(const GradedModeSection& s);
GradedModeSection sectionSub(const GradedModeSection& a, const GradedModeSection& b);

}  // namespace gravfact

#pragma once

// Exact causal decision procedures on ultrastatic backgrounds (Minkowski
// boxes and flat torus slabs), where the chronological relation has the
// closed form dt > d(x, y) with d the Euclidean or minimal-winding spatial
// distance. Regions are finite unions of Alexandrov diamonds, time slabs,
// and coordinate boxes, interpreted as unions of the primitive interiors.

#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "gravfact/spacetime.hpp"

namespace gravfact {

using Point = std::vector<double>;

struct ChronRel {
  bool chronological;  // p << q
  bool causal;         // p < q (null separation included)
};

// Minimal spatial distance between the space parts, minimizing over winding
// numbers {-1, 0, 1} on the periodic axes.
double spatialDistance(const Spacetime& st, const Point& p, const Point& q);

ChronRel chronologicalRel(const Spacetime& st, const Point& p, const Point& q);

struct AlexandrovDiamond {
  Point p, q;  // past and future tip, p << q
};
struct TimeSlab {
  double t0, t1;  // full spatial extent
};
struct CoordBox {
  std::vector<std::pair<double, double>> iv;  // open interval per coordinate
};

using RegionPrimitive = std::variant<AlexandrovDiamond, TimeSlab, CoordBox>;

struct CausalRegion {
  Spacetime st;
  std::vector<RegionPrimitive> prims;

  bool contains(const Point& x) const;
  bool diamondsOnly() const;
  // Interior sample points: cell centers of a perAxis^dim grid over each
  // primitive's bounding box, filtered by membership.
  std::vector<Point> samples(int perAxis) const;
  // Closures of the primitive corner points nudged inward, for corner checks.
  std::vector<Point> cornerPoints(double nudge = 1e-9) const;
};

// Constructors validate chart containment (and p << q for diamonds).
CausalRegion diamondRegion(const Spacetime& st, const Point& p, const Point& q);
CausalRegion slabRegion(const Spacetime& st, double t0, double t1);
CausalRegion boxRegion(const Spacetime& st, const CoordBox& b);
// Merge the primitives of several regions over the same background.
CausalRegion unionRegion(const std::vector<CausalRegion>& parts);

// J+(D) for a diamond collapses to the chronological future of the past tip.
struct FutureDescriptor {
  Spacetime st;
  Point base;
  bool contains(const Point& x) const;  // base << x
};
FutureDescriptor causalFutureOfDiamond(const Spacetime& st, const AlexandrovDiamond& d);

// Exact for single primitives; unions are decided by certified sampling
// (grid of the stated density plus corner checks).
bool causallyConvex(const CausalRegion& r, int gridPerAxis = 10);

// Exact two-tip criterion for diamond unions; other primitives fall back to
// the sampled procedure at the given density.
bool causallyDisjoint(const CausalRegion& a, const CausalRegion& b, int gridPerAxis = 12);

// Plain set overlap of two regions, decided by sampling each at the given
// density.
bool regionsOverlap(const CausalRegion& a, const CausalRegion& b, int gridPerAxis = 12);

// Permutation sigma such that no region placed earlier has a causal future
// meeting a region placed later. Empty optional means not time-orderable
// (the precedence digraph has a cycle). Throws OverlappingRegions when the
// images are not pairwise disjoint as sets.
std::optional<std::vector<int>> timeOrderPermutation(const Spacetime& st,
                                                     const std::vector<CausalRegion>& regions);

// Time translation combined with a spatial torus translation, followed by
// the chart inclusion.
struct LocMorphism {
  Spacetime source, target;
  double timeShift = 0.0;
  std::vector<double> spatialShift;  // per spatial axis
  CausalRegion imageRegion;

  Point apply(const Point& x) const;
};

LocMorphism makeSlabInclusion(const Spacetime& source, const Spacetime& target,
                              double timeShift = 0.0,
                              const std::vector<double>& spatialShift = {});
// Isometry, time-orientation, and convexity invariants; throws on failure.
void validateLocMorphism(const LocMorphism& f, unsigned seed = 1);

// True iff the image contains a full spatial slice {t} x Sigma. Requires
// compact (toroidal) slices on both ends.
bool isCauchyMorphism(const LocMorphism& f, int gridPerAxis = 40);

// Multilevel dyadic diamond cover of a union of open boxes: every diamond is
// contained in one of the boxes, and the diamonds cover every point of the
// union that is at least minGap away from the union's boundary.
std::vector<AlexandrovDiamond> alexandrovRefinement(const Spacetime& st,
                                                    const std::vector<CoordBox>& cover,
                                                    double minGap = 2.5e-3);

}  // namespace gravfact

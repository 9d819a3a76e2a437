#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gravfact/causal.hpp"
#include "gravfact/errors.hpp"

using namespace gravfact;

namespace {

// Diamond with a given center and radius (past/future tips straight below and
// above the center).
CausalRegion diamondAt(const Spacetime& st, const Point& center, double r) {
  Point p = center, q = center;
  p[0] -= r;
  q[0] += r;
  return diamondRegion(st, p, q);
}

}  // namespace

TEST_CASE("chronological relation closed forms") {
  Spacetime mink = makeMinkowski(2);
  CHECK(chronologicalRel(mink, {0.0, 0.0}, {2.0, 1.0}).chronological);
  CHECK(chronologicalRel(mink, {0.0, 0.0}, {2.0, 1.0}).causal);
  ChronRel nullSep = chronologicalRel(mink, {0.0, 0.0}, {1.0, 1.0});
  CHECK(!nullSep.chronological);
  CHECK(nullSep.causal);
  CHECK(!chronologicalRel(mink, {0.0, 0.0}, {-1.0, 0.0}).causal);

  Spacetime torus = makeTorusSlab(2, -2.0, 2.0, 10.0);
  // Winding distance between x=9.5 and x=0.2 is 0.7, under the time gap 1.
  CHECK(chronologicalRel(torus, {0.0, 9.5}, {1.0, 0.2}).chronological);
  CHECK(!chronologicalRel(torus, {0.0, 5.0}, {1.0, 0.2}).causal);

  CHECK_THROWS_AS(chronologicalRel(makeSchwarzschild(1.0), {0.0, 4.0, 1.0, 0.5},
                                   {1.0, 4.0, 1.0, 0.5}),
                  UnsupportedBackground);
}

TEST_CASE("chronology is transitive and irreflexive; J contains I and the point") {
  for (const Spacetime& st : {makeMinkowski(2), makeTorusSlab(2, -2.0, 2.0, 10.0)}) {
    auto pts = st.samplePoints(30, 5);
    for (const auto& p : pts) {
      CHECK(!chronologicalRel(st, p, p).chronological);
      CHECK(chronologicalRel(st, p, p).causal);  // p <= p only in J
      for (const auto& q : pts) {
        if (chronologicalRel(st, p, q).chronological) CHECK(chronologicalRel(st, p, q).causal);
        for (const auto& r : pts)
          if (chronologicalRel(st, p, q).chronological &&
              chronologicalRel(st, q, r).chronological)
            CHECK(chronologicalRel(st, p, r).chronological);
      }
    }
  }
}

TEST_CASE("causal future of a diamond is the chronological future of its tip") {
  for (const Spacetime& st : {makeMinkowski(2), makeTorusSlab(2, -2.0, 2.0, 10.0)}) {
    CausalRegion D = (st.kind == ChartKind::MinkowskiBox)
                         ? diamondRegion(st, {-1.0, 0.0}, {1.0, 0.0})
                         : diamondRegion(st, {-0.5, 5.0}, {0.5, 5.0});
    const auto& dia = std::get<AlexandrovDiamond>(D.prims[0]);
    FutureDescriptor fut = causalFutureOfDiamond(st, dia);
    CHECK(fut.base == dia.p);

    // The open diamond itself lies in its causal future.
    for (const Point& y : D.samples(12)) CHECK(fut.contains(y));

    // Sampled oracle: x is in the future of the diamond exactly when some
    // diamond sample point chronologically precedes it. Points too close to
    // the light cone of the tip are excluded (finite sampling cannot decide
    // them either way).
    std::vector<Point> body = D.samples(16);
    auto grid = st.samplePoints(100, 17);
    int checked = 0;
    for (const auto& x : grid) {
      double margin = (x[0] - dia.p[0]) - spatialDistance(st, dia.p, x);
      if (std::abs(margin) < 0.1) continue;
      bool oracle = false;
      for (const auto& y : body)
        if (chronologicalRel(st, y, x).chronological) oracle = true;
      CHECK(oracle == fut.contains(x));
      ++checked;
    }
    CHECK(checked > 50);
  }
}

TEST_CASE("causal convexity decisions") {
  Spacetime mink = makeMinkowski(2);
  CHECK(causallyConvex(diamondAt(mink, {0.0, 0.0}, 1.0)));
  CHECK(causallyConvex(slabRegion(mink, -1.0, 1.0)));
  // A spatially flush box is convex; a spatially proper box leaks.
  CHECK(causallyConvex(boxRegion(mink, CoordBox{{{-1.0, 1.0}, {-5.0, 5.0}}})));
  CHECK(!causallyConvex(boxRegion(mink, CoordBox{{{-1.0, 1.0}, {-2.0, 2.0}}})));

  // Two spacelike-separated diamonds: no causal pair crosses the gap.
  CausalRegion spacelike = unionRegion(
      {diamondAt(mink, {0.0, -3.0}, 0.5), diamondAt(mink, {0.0, 3.0}, 0.5)});
  CHECK(causallyConvex(spacelike));

  // Two timelike-separated diamonds with a gap: the connecting geodesic's
  // midpoint lies outside both.
  CausalRegion stacked = unionRegion(
      {diamondAt(mink, {-1.5, 0.0}, 0.5), diamondAt(mink, {1.5, 0.0}, 0.5)});
  CHECK(!causallyConvex(stacked));
}

TEST_CASE("causal disjointness criterion and sampled oracle") {
  Spacetime mink = makeMinkowski(2);
  CHECK(causallyDisjoint(diamondAt(mink, {0.0, -3.0}, 1.0), diamondAt(mink, {0.0, 3.0}, 1.0)));
  CHECK(!causallyDisjoint(diamondAt(mink, {-2.0, 0.0}, 1.0), diamondAt(mink, {2.0, 0.0}, 1.0)));

  // Slab/box primitives route through the sampling fallback.
  CHECK(!causallyDisjoint(slabRegion(mink, -1.0, 0.0), slabRegion(mink, 1.0, 2.0)));

  // Randomized agreement with the brute-force oracle, excluding draws that
  // graze the light cone (undecidable by finite sampling).
  for (const Spacetime& st : {makeMinkowski(2), makeTorusSlab(2, -2.0, 2.0, 10.0)}) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ut(st.bounds[0].first + 1.1,
                                              st.bounds[0].second - 1.1);
    std::uniform_real_distribution<double> ux(st.bounds[1].first + 1.1,
                                              st.bounds[1].second - 1.1);
    std::uniform_real_distribution<double> ur(0.2, 1.0);
    int kept = 0;
    while (kept < 1000) {
      Point c1 = {ut(rng), ux(rng)}, c2 = {ut(rng), ux(rng)};
      double r1 = ur(rng), r2 = ur(rng);
      // Margin of the two-tip criterion: how far the decisive inequality is
      // from equality, in either direction.
      // The oracle samples cell centers, which sit up to about 0.16 (r1+r2)
      // short of the diamond tips, so only clearly decisive draws are kept.
      double gap = 0.3 * (r1 + r2);
      double m1 = (c2[0] + r2) - (c1[0] - r1) - spatialDistance(st, c1, c2);
      double m2 = (c1[0] + r1) - (c2[0] - r2) - spatialDistance(st, c1, c2);
      if (std::abs(m1) < gap || std::abs(m2) < gap) continue;
      CausalRegion D1 = diamondAt(st, c1, r1), D2 = diamondAt(st, c2, r2);
      bool fast = causallyDisjoint(D1, D2);
      bool oracle = true;
      for (const Point& p : D1.samples(16)) {
        for (const Point& q : D2.samples(16))
          if (chronologicalRel(st, p, q).causal || chronologicalRel(st, q, p).causal) {
            oracle = false;
            break;
          }
        if (!oracle) break;
      }
      CHECK(fast == oracle);
      ++kept;
    }
  }
}

TEST_CASE("time ordering: spacelike, stacked, and cyclic configurations") {
  Spacetime mink = makeMinkowski(2);

  std::vector<CausalRegion> spacelike = {diamondAt(mink, {0.0, -3.0}, 0.5),
                                         diamondAt(mink, {0.0, 3.0}, 0.5)};
  auto sigma = timeOrderPermutation(mink, spacelike);
  REQUIRE(sigma.has_value());
  CHECK(sigma->size() == 2);

  // Given in order bottom, top, middle: the future-first convention places
  // top, then middle, then bottom.
  std::vector<CausalRegion> stacked = {diamondAt(mink, {-3.0, 0.0}, 0.5),
                                       diamondAt(mink, {3.0, 0.0}, 0.5),
                                       diamondAt(mink, {0.0, 0.0}, 0.5)};
  auto tau = timeOrderPermutation(mink, stacked);
  REQUIRE(tau.has_value());
  CHECK(*tau == std::vector<int>{1, 2, 0});

  // A union region straddling a middle diamond makes the precedence digraph
  // cyclic.
  std::vector<CausalRegion> cyclic = {
      unionRegion({diamondAt(mink, {-2.0, 0.0}, 0.5), diamondAt(mink, {2.0, 0.0}, 0.5)}),
      diamondAt(mink, {0.0, 0.0}, 0.5)};
  CHECK(!timeOrderPermutation(mink, cyclic).has_value());

  std::vector<CausalRegion> overlapping = {diamondAt(mink, {0.0, 0.0}, 1.0),
                                           diamondAt(mink, {0.2, 0.2}, 1.0)};
  CHECK_THROWS_AS(timeOrderPermutation(mink, overlapping), OverlappingRegions);
}

TEST_CASE("Cauchy morphisms on torus slabs") {
  Spacetime small = makeTorusSlab(2, 0.0, 1.0, 10.0);
  Spacetime big = makeTorusSlab(2, -1.0, 2.0, 10.0);

  LocMorphism incl = makeSlabInclusion(small, big);
  validateLocMorphism(incl);
  CHECK(isCauchyMorphism(incl));

  LocMorphism shifted = makeSlabInclusion(small, big, 0.5, {3.0});
  validateLocMorphism(shifted);
  CHECK(isCauchyMorphism(shifted));

  // Spatially proper sub-box image: no full slice.
  LocMorphism partial = incl;
  partial.imageRegion = boxRegion(big, CoordBox{{{0.0, 1.0}, {2.0, 7.0}}});
  CHECK(!isCauchyMorphism(partial));

  // Noncompact slices are refused, not guessed.
  Spacetime mink = makeMinkowski(2);
  LocMorphism flat{mink, mink, 0.0, {}, slabRegion(mink, -1.0, 1.0)};
  CHECK_THROWS_AS(isCauchyMorphism(flat), UnsupportedBackground);

  CHECK_THROWS_AS(makeSlabInclusion(small, makeTorusSlab(2, -1.0, 2.0, 7.0)), Error);
}

TEST_CASE("Alexandrov refinement covers boxes with interior diamonds") {
  Spacetime mink = makeMinkowski(2);
  CHECK_THROWS_AS(alexandrovRefinement(mink, {}), EmptyCover);

  CoordBox box{{{0.0, 1.0}, {0.0, 1.0}}};
  auto diamonds = alexandrovRefinement(mink, {box});
  CHECK(!diamonds.empty());

  // Containment: every diamond lies inside the box.
  for (const auto& d : diamonds) {
    double r = 0.5 * (d.q[0] - d.p[0]);
    CHECK(d.p[0] >= box.iv[0].first - 1e-12);
    CHECK(d.q[0] <= box.iv[0].second + 1e-12);
    CHECK(d.p[1] - r >= box.iv[1].first - 1e-12);
    CHECK(d.p[1] + r <= box.iv[1].second + 1e-12);
  }

  // Coverage on the 200 x 200 cell-center grid.
  int uncovered = 0;
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 200; ++j) {
      Point x = {(i + 0.5) / 200.0, (j + 0.5) / 200.0};
      bool hit = false;
      for (const auto& d : diamonds)
        if (chronologicalRel(mink, d.p, x).chronological &&
            chronologicalRel(mink, x, d.q).chronological) {
          hit = true;
          break;
        }
      if (!hit) ++uncovered;
    }
  CHECK(uncovered == 0);
}

TEST_CASE("Alexandrov refinement of overlapping boxes covers their union") {
  Spacetime mink = makeMinkowski(2);
  CoordBox b1{{{0.0, 1.0}, {0.0, 1.0}}};
  CoordBox b2{{{0.5, 1.5}, {0.5, 1.5}}};
  auto diamonds = alexandrovRefinement(mink, {b1, b2}, 0.005);

  auto inBox = [](const CoordBox& b, const AlexandrovDiamond& d) {
    double r = 0.5 * (d.q[0] - d.p[0]);
    return d.p[0] >= b.iv[0].first - 1e-12 && d.q[0] <= b.iv[0].second + 1e-12 &&
           d.p[1] - r >= b.iv[1].first - 1e-12 && d.p[1] + r <= b.iv[1].second + 1e-12;
  };
  for (const auto& d : diamonds) CHECK((inBox(b1, d) || inBox(b2, d)));

  int uncovered = 0;
  for (int i = 0; i < 100; ++i)
    for (int j = 0; j < 100; ++j)
      for (const CoordBox& b : {b1, b2}) {
        Point x = {b.iv[0].first + (i + 0.5) / 100.0, b.iv[1].first + (j + 0.5) / 100.0};
        bool hit = false;
        for (const auto& d : diamonds)
          if (chronologicalRel(mink, d.p, x).chronological &&
              chronologicalRel(mink, x, d.q).chronological) {
            hit = true;
            break;
          }
        if (!hit) ++uncovered;
      }
  CHECK(uncovered == 0);

  // A diamond inscribes in its own bounding box: refining that box yields
  // diamonds that all fit, trivially including the inscribed one.
  CoordBox bbox{{{-0.5, 0.5}, {-0.5, 0.5}}};
  auto one = alexandrovRefinement(mink, {bbox}, 0.05);
  CHECK(!one.empty());
  for (const auto& d : one) CHECK(inBox(bbox, d));
}

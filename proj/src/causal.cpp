#include "gravfact/causal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "gravfact/errors.hpp"
#include "gravfact/geometry.hpp"

namespace gravfact {

namespace {

void requireSupported(const Spacetime& st) {
  if (st.kind != ChartKind::MinkowskiBox && st.kind != ChartKind::UltrastaticTorusSlab)
    throw UnsupportedBackground();
}

double clampGrid(int dim, int perAxis) {
  // Keep the total sample budget per primitive around 1000 points.
  double cap = std::pow(1000.0, 1.0 / dim);
  return std::max(2.0, std::min<double>(perAxis, cap));
}

struct BBox {
  std::vector<std::pair<double, double>> iv;
};

BBox primitiveBBox(const Spacetime& st, const RegionPrimitive& prim) {
  BBox b;
  b.iv.resize(st.dim);
  if (const auto* d = std::get_if<AlexandrovDiamond>(&prim)) {
    double r = 0.5 * (d->q[0] - d->p[0]);
    b.iv[0] = {d->p[0], d->q[0]};
    for (int i = 1; i < st.dim; ++i) {
      double lo = std::min(d->p[i], d->q[i]) - r;
      double hi = std::max(d->p[i], d->q[i]) + r;
      b.iv[i] = {std::max(lo, st.bounds[i].first), std::min(hi, st.bounds[i].second)};
    }
  } else if (const auto* s = std::get_if<TimeSlab>(&prim)) {
    b.iv[0] = {s->t0, s->t1};
    for (int i = 1; i < st.dim; ++i) b.iv[i] = st.bounds[i];
  } else {
    b.iv = std::get<CoordBox>(prim).iv;
  }
  return b;
}

bool primitiveContains(const Spacetime& st, const RegionPrimitive& prim, const Point& x) {
  if (const auto* d = std::get_if<AlexandrovDiamond>(&prim)) {
    return chronologicalRel(st, d->p, x).chronological &&
           chronologicalRel(st, x, d->q).chronological;
  }
  if (const auto* s = std::get_if<TimeSlab>(&prim)) return x[0] > s->t0 && x[0] < s->t1;
  const auto& iv = std::get<CoordBox>(prim).iv;
  for (size_t i = 0; i < iv.size(); ++i)
    if (x[i] <= iv[i].first || x[i] >= iv[i].second) return false;
  return true;
}

void requireInChart(const Spacetime& st, const Point& x) {
  if (!st.contains(x)) throw OutOfChart();
}

}  // namespace

double spatialDistance(const Spacetime& st, const Point& p, const Point& q) {
  requireSupported(st);
  double s = 0.0;
  for (int i = 1; i < st.dim; ++i) {
    double d = q[i] - p[i];
    if (st.period[i] > 0.0) {
      double L = st.period[i];
      d = std::min({std::abs(d), std::abs(d - L), std::abs(d + L)});
    } else {
      d = std::abs(d);
    }
    s += d * d;
  }
  return std::sqrt(s);
}

ChronRel chronologicalRel(const Spacetime& st, const Point& p, const Point& q) {
  requireSupported(st);
  double dt = q[0] - p[0];
  double d = spatialDistance(st, p, q);
  return {dt > d, dt >= d};
}

bool CausalRegion::contains(const Point& x) const {
  for (const auto& prim : prims)
    if (primitiveContains(st, prim, x)) return true;
  return false;
}

bool CausalRegion::diamondsOnly() const {
  for (const auto& prim : prims)
    if (!std::holds_alternative<AlexandrovDiamond>(prim)) return false;
  return true;
}

std::vector<Point> CausalRegion::samples(int perAxis) const {
  int n = static_cast<int>(clampGrid(st.dim, perAxis));
  std::vector<Point> out;
  for (const auto& prim : prims) {
    BBox b = primitiveBBox(st, prim);
    std::vector<int> idx(st.dim, 0);
    while (true) {
      Point x(st.dim);
      for (int i = 0; i < st.dim; ++i) {
        double lo = b.iv[i].first, hi = b.iv[i].second;
        x[i] = lo + (idx[i] + 0.5) * (hi - lo) / n;
      }
      if (primitiveContains(st, prim, x)) out.push_back(x);
      int a = 0;
      for (; a < st.dim; ++a) {
        if (++idx[a] < n) break;
        idx[a] = 0;
      }
      if (a == st.dim) break;
    }
  }
  return out;
}

std::vector<Point> CausalRegion::cornerPoints(double nudge) const {
  std::vector<Point> out;
  for (const auto& prim : prims) {
    if (const auto* d = std::get_if<AlexandrovDiamond>(&prim)) {
      Point tipP = d->p, tipQ = d->q;
      tipP[0] += nudge;
      tipQ[0] -= nudge;
      out.push_back(tipP);
      out.push_back(tipQ);
      // Waist extremes halfway up, one pair per spatial axis.
      double r = 0.5 * (d->q[0] - d->p[0]);
      for (int i = 1; i < st.dim; ++i) {
        Point w(st.dim);
        w[0] = 0.5 * (d->p[0] + d->q[0]);
        for (int j = 1; j < st.dim; ++j) w[j] = 0.5 * (d->p[j] + d->q[j]);
        Point wm = w, wp = w;
        wm[i] -= r - nudge;
        wp[i] += r - nudge;
        out.push_back(wm);
        out.push_back(wp);
      }
    } else if (const auto* box = std::get_if<CoordBox>(&prim)) {
      int dim = static_cast<int>(box->iv.size());
      for (int mask = 0; mask < (1 << dim); ++mask) {
        Point x(dim);
        for (int i = 0; i < dim; ++i)
          x[i] = (mask >> i & 1) ? box->iv[i].second - nudge : box->iv[i].first + nudge;
        out.push_back(x);
      }
    }
    // Time slabs have no distinguished corners.
  }
  return out;
}

CausalRegion diamondRegion(const Spacetime& st, const Point& p, const Point& q) {
  requireSupported(st);
  requireInChart(st, p);
  requireInChart(st, q);
  if (!chronologicalRel(st, p, q).chronological)
    throw Error("diamond tips must satisfy p << q");
  CausalRegion r{st, {}};
  r.prims.push_back(AlexandrovDiamond{p, q});
  return r;
}

CausalRegion slabRegion(const Spacetime& st, double t0, double t1) {
  requireSupported(st);
  if (!(t0 < t1) || t0 < st.bounds[0].first || t1 > st.bounds[0].second)
    throw OutOfChart("time slab outside chart");
  CausalRegion r{st, {}};
  r.prims.push_back(TimeSlab{t0, t1});
  return r;
}

CausalRegion boxRegion(const Spacetime& st, const CoordBox& b) {
  requireSupported(st);
  if (static_cast<int>(b.iv.size()) != st.dim) throw Error("box dimension mismatch");
  for (int i = 0; i < st.dim; ++i) {
    if (!(b.iv[i].first < b.iv[i].second)) throw Error("box interval empty");
    if (b.iv[i].first < st.bounds[i].first - 1e-12 ||
        b.iv[i].second > st.bounds[i].second + 1e-12)
      throw OutOfChart("box outside chart");
  }
  CausalRegion r{st, {}};
  r.prims.push_back(b);
  return r;
}

CausalRegion unionRegion(const std::vector<CausalRegion>& parts) {
  if (parts.empty()) throw Error("union of no regions");
  CausalRegion out = parts.front();
  for (size_t i = 1; i < parts.size(); ++i)
    out.prims.insert(out.prims.end(), parts[i].prims.begin(), parts[i].prims.end());
  return out;
}

bool FutureDescriptor::contains(const Point& x) const {
  return chronologicalRel(st, base, x).chronological;
}

FutureDescriptor causalFutureOfDiamond(const Spacetime& st, const AlexandrovDiamond& d) {
  requireSupported(st);
  return FutureDescriptor{st, d.p};
}

bool causallyConvex(const CausalRegion& r, int gridPerAxis) {
  requireSupported(r.st);
  if (r.prims.size() == 1) {
    if (std::holds_alternative<AlexandrovDiamond>(r.prims[0])) return true;
    if (std::holds_alternative<TimeSlab>(r.prims[0])) return true;
    // A coordinate box leaks causal curves out of every spatial face that is
    // strictly inside the chart, so convexity needs flush spatial faces.
    const auto& iv = std::get<CoordBox>(r.prims[0]).iv;
    for (int i = 1; i < r.st.dim; ++i) {
      if (std::abs(iv[i].first - r.st.bounds[i].first) > 1e-12) return false;
      if (std::abs(iv[i].second - r.st.bounds[i].second) > 1e-12) return false;
    }
    return true;
  }
  // Certified sampling: grid points plus primitive corners; for every
  // causally related pair, the connecting double cone must stay inside.
  std::vector<Point> pts = r.samples(gridPerAxis);
  for (const Point& c : r.cornerPoints()) pts.push_back(c);
  const int inner = 5;
  for (const Point& p : pts)
    for (const Point& q : pts) {
      if (!chronologicalRel(r.st, p, q).causal || p == q) continue;
      // Sample the bounding box of the double cone between p and q.
      double r0 = 0.5 * (q[0] - p[0]);
      for (int it = 0; it < inner; ++it)
        for (int is = 0; is < inner; ++is) {
          Point x(r.st.dim);
          x[0] = p[0] + (it + 0.5) * (q[0] - p[0]) / inner;
          for (int i = 1; i < r.st.dim; ++i) {
            double lo = std::min(p[i], q[i]) - r0, hi = std::max(p[i], q[i]) + r0;
            x[i] = lo + (is + 0.5) * (hi - lo) / inner;
          }
          if (!chronologicalRel(r.st, p, x).causal || !chronologicalRel(r.st, x, q).causal)
            continue;
          if (!r.st.contains(x)) continue;
          if (!r.contains(x)) return false;
        }
    }
  return true;
}

bool causallyDisjoint(const CausalRegion& a, const CausalRegion& b, int gridPerAxis) {
  requireSupported(a.st);
  if (a.diamondsOnly() && b.diamondsOnly()) {
    for (const auto& pa : a.prims)
      for (const auto& pb : b.prims) {
        const auto& da = std::get<AlexandrovDiamond>(pa);
        const auto& db = std::get<AlexandrovDiamond>(pb);
        if (chronologicalRel(a.st, da.p, db.q).chronological) return false;
        if (chronologicalRel(a.st, db.p, da.q).chronological) return false;
      }
    return true;
  }
  // Sampling fallback for slab/box primitives.
  std::vector<Point> pa = a.samples(gridPerAxis);
  std::vector<Point> pb = b.samples(gridPerAxis);
  for (const Point& p : pa)
    for (const Point& q : pb)
      if (chronologicalRel(a.st, p, q).causal || chronologicalRel(a.st, q, p).causal)
        return false;
  return true;
}

bool regionsOverlap(const CausalRegion& a, const CausalRegion& b, int gridPerAxis) {
  for (const Point& q : b.samples(gridPerAxis))
    if (a.contains(q)) return true;
  for (const Point& q : a.samples(gridPerAxis))
    if (b.contains(q)) return true;
  return false;
}

namespace {

// J+(R_i) meets R_j, exact for diamond unions: the future of a diamond is the
// chronological future of its past tip, and it meets an open diamond exactly
// when that tip chronologically precedes the other future tip.
bool futureMeets(const Spacetime& st, const CausalRegion& ri, const CausalRegion& rj) {
  for (const auto& pi : ri.prims)
    for (const auto& pj : rj.prims) {
      const auto& di = std::get<AlexandrovDiamond>(pi);
      const auto& dj = std::get<AlexandrovDiamond>(pj);
      if (chronologicalRel(st, di.p, dj.q).chronological) return true;
    }
  return false;
}

}  // namespace

std::optional<std::vector<int>> timeOrderPermutation(const Spacetime& st,
                                                     const std::vector<CausalRegion>& regions) {
  requireSupported(st);
  const int n = static_cast<int>(regions.size());
  for (const auto& r : regions)
    if (!r.diamondsOnly()) throw NonDiamondRegion();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (regionsOverlap(regions[i], regions[j], 8)) throw OverlappingRegions();

  // Must-precede edges: if the future of R_i meets R_j, then j has to be
  // placed before i.
  std::vector<std::vector<int>> succ(n);
  std::vector<int> indeg(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (futureMeets(st, regions[i], regions[j])) {
        succ[j].push_back(i);
        ++indeg[i];
      }
    }
  std::priority_queue<int, std::vector<int>, std::greater<int>> ready;
  for (int i = 0; i < n; ++i)
    if (indeg[i] == 0) ready.push(i);
  std::vector<int> order;
  while (!ready.empty()) {
    int v = ready.top();
    ready.pop();
    order.push_back(v);
    for (int w : succ[v])
      if (--indeg[w] == 0) ready.push(w);
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  // Post-hoc check of the defining condition.
  for (size_t a = 0; a < order.size(); ++a)
    for (size_t b = a + 1; b < order.size(); ++b)
      if (futureMeets(st, regions[order[a]], regions[order[b]])) return std::nullopt;
  return order;
}

Point LocMorphism::apply(const Point& x) const {
  Point y = x;
  y[0] += timeShift;
  for (int i = 1; i < source.dim; ++i) {
    double s = (static_cast<int>(spatialShift.size()) >= i) ? spatialShift[i - 1] : 0.0;
    y[i] += s;
    if (target.period[i] > 0.0) {
      double L = target.period[i];
      y[i] -= L * std::floor(y[i] / L);
    }
  }
  return y;
}

LocMorphism makeSlabInclusion(const Spacetime& source, const Spacetime& target,
                              double timeShift, const std::vector<double>& spatialShift) {
  if (source.kind != ChartKind::UltrastaticTorusSlab ||
      target.kind != ChartKind::UltrastaticTorusSlab)
    throw UnsupportedBackground("slab inclusions need torus slabs on both ends");
  if (source.dim != target.dim) throw Error("dimension mismatch");
  for (int i = 1; i < source.dim; ++i)
    if (std::abs(source.period[i] - target.period[i]) > 1e-12)
      throw Error("spatial periods differ");
  double t0 = source.bounds[0].first + timeShift;
  double t1 = source.bounds[0].second + timeShift;
  LocMorphism f{source, target, timeShift, spatialShift, slabRegion(target, t0, t1)};
  return f;
}

void validateLocMorphism(const LocMorphism& f, unsigned seed) {
  auto pts = f.source.samplePoints(20, seed);
  for (const auto& x : pts) {
    Point y = f.apply(x);
    if (!f.target.contains(y)) throw OutOfChart("image point outside target chart");
    MetricEval ms(f.source, x, 0);
    MetricEval mt(f.target, y, 0);
    for (int a = 0; a < f.source.dim; ++a)
      for (int b = 0; b < f.source.dim; ++b)
        if (std::abs(ms.g.at2(a, b).value() - mt.g.at2(a, b).value()) > 1e-10)
          throw Error("morphism is not isometric");
    // The differential of a translation is the identity, so the pushed
    // time orientation is the source one evaluated at x.
    double norm = 0.0, tcomp = 0.0;
    std::vector<double> T(f.source.dim);
    for (int a = 0; a < f.source.dim; ++a) T[a] = f.source.timeOrientation[a].eval(x);
    for (int a = 0; a < f.source.dim; ++a)
      for (int b = 0; b < f.source.dim; ++b) norm += mt.g.at2(a, b).value() * T[a] * T[b];
    tcomp = T[0];
    if (!(norm < 0.0) || !(tcomp > 0.0)) throw Error("time orientation not preserved");
  }
  if (!causallyConvex(f.imageRegion)) throw Error("image region not causally convex");
}

bool isCauchyMorphism(const LocMorphism& f, int gridPerAxis) {
  if (f.source.kind != ChartKind::UltrastaticTorusSlab ||
      f.target.kind != ChartKind::UltrastaticTorusSlab)
    throw UnsupportedBackground("Cauchy decision needs compact slices");
  const CausalRegion& im = f.imageRegion;
  // Candidate times: midpoints between consecutive primitive breakpoints.
  std::vector<double> cuts;
  for (const auto& prim : im.prims) {
    BBox b = primitiveBBox(im.st, prim);
    cuts.push_back(b.iv[0].first);
    cuts.push_back(b.iv[0].second);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> cands;
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i] + 1e-12) cands.push_back(0.5 * (cuts[i] + cuts[i + 1]));
  int n = static_cast<int>(clampGrid(f.target.dim - 1, gridPerAxis));
  for (double t : cands) {
    if (t <= f.target.bounds[0].first || t >= f.target.bounds[0].second) continue;
    bool full = true;
    std::vector<int> idx(f.target.dim - 1, 0);
    while (full) {
      Point x(f.target.dim);
      x[0] = t;
      for (int i = 1; i < f.target.dim; ++i) {
        double L = f.target.period[i];
        x[i] = (idx[i - 1] + 0.5) * L / n;
      }
      if (!im.contains(x)) full = false;
      int a = 0;
      for (; a < f.target.dim - 1; ++a) {
        if (++idx[a] < n) break;
        idx[a] = 0;
      }
      if (a == f.target.dim - 1) break;
    }
    if (full) return true;
  }
  return false;
}

std::vector<AlexandrovDiamond> alexandrovRefinement(const Spacetime& st,
                                                    const std::vector<CoordBox>& cover,
                                                    double minGap) {
  requireSupported(st);
  if (cover.empty()) throw EmptyCover();
  std::vector<AlexandrovDiamond> out;
  for (const auto& box : cover) {
    boxRegion(st, box);  // validates
    double minExtent = box.iv[0].second - box.iv[0].first;
    for (int i = 1; i < st.dim; ++i)
      minExtent = std::min(minExtent, box.iv[i].second - box.iv[i].first);
    double r0 = minExtent / 4.0;
    int K = 0;
    while (r0 / std::pow(2.0, K) > minGap && K < 14) ++K;
    for (int k = 0; k <= K; ++k) {
      double r = r0 / std::pow(2.0, k);
      double s = r / st.dim;  // per-axis spacing: l1 offset to nearest center < r/2
      double band = (k == 0) ? std::numeric_limits<double>::infinity()
                             : 4.0 * r;  // only near the boundary past level 0
      std::vector<std::vector<double>> axisPos(st.dim);
      for (int i = 0; i < st.dim; ++i) {
        double lo = box.iv[i].first + r, hi = box.iv[i].second - r;
        for (double c = lo; c < hi; c += s) axisPos[i].push_back(c);
        axisPos[i].push_back(hi);
      }
      std::vector<size_t> idx(st.dim, 0);
      while (true) {
        Point c(st.dim);
        double bdist = std::numeric_limits<double>::infinity();
        for (int i = 0; i < st.dim; ++i) {
          c[i] = axisPos[i][idx[i]];
          bdist = std::min({bdist, c[i] - box.iv[i].first, box.iv[i].second - c[i]});
        }
        if (bdist <= band + 1e-15) {
          AlexandrovDiamond d;
          d.p = c;
          d.q = c;
          d.p[0] -= r;
          d.q[0] += r;
          out.push_back(d);
        }
        int a = 0;
        for (; a < st.dim; ++a) {
          if (++idx[a] < axisPos[a].size()) break;
          idx[a] = 0;
        }
        if (a == st.dim) break;
      }
    }
  }
  return out;
}

}  // namespace gravfact

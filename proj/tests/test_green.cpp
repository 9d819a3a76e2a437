#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gravfact/complex.hpp"
#include "gravfact/errors.hpp"
#include "gravfact/green.hpp"
#include "gravfact/quadrature.hpp"

using namespace gravfact;

namespace {

constexpr double pi = std::numbers::pi;

// Mode section with globally-analytic time profiles (no breakpoints) plus the
// equivalent expression section, for cross-checks against the jet operators.
struct TwinSection {
  GradedModeSection modes;
  GradedSection exprs;
};

TwinSection randomTwin(std::mt19937_64& rng, const Spacetime& st, int nMax,
                       const std::vector<int>& degrees) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> N(0, nMax);
  std::uniform_int_distribution<int> B(0, 1);
  TwinSection out;
  out.exprs.model = Model::GR;
  Expr t = Expr::coord(0);
  for (int deg : degrees) {
    std::vector<bool> up = degreeValence(deg);
    int count = 1;
    for (size_t r = 0; r < up.size(); ++r) count *= st.dim;
    std::vector<ModeFn> mcomp(count);
    TensorFieldExpr& ecomp = out.exprs.byDegree[deg];
    ecomp.up = up;
    ecomp.comp.assign(count, Expr(0.0));
    for (int i = 0; i < count; ++i) {
      SpatialMode m;
      Expr spatial(1.0);
      for (int ax = 0; ax < st.dim - 1; ++ax) {
        int n = N(rng);
        bool isSin = n > 0 && B(rng) == 1;
        m.n.push_back(n);
        m.isSin.push_back(isSin);
        double k = 2.0 * pi * n / st.period[ax + 1];
        Expr arg = Expr(k) * Expr::coord(ax + 1);
        spatial = spatial * (isSin ? sin(arg) : cos(arg));
      }
      double c0 = U(rng), c1 = U(rng), amp = U(rng), w = 1.0 + 0.5 * U(rng);
      TrigPoly prof = TrigPoly::polynomial({c0, c1}) + TrigPoly::cosWave(amp, w);
      mcomp[i].add(m, prof);
      ecomp.comp[i] = (Expr(c0) + Expr(c1) * t + Expr(amp) * cos(Expr(w) * t)) * spatial;
    }
    out.modes.comp.emplace(deg, std::move(mcomp));
  }
  // symmetrize the rank-2 degrees so both representations describe a field
  for (int deg : degrees) {
    if (degreeValence(deg).size() != 2) continue;
    auto& mc = out.modes.comp[deg];
    auto& ec = out.exprs.byDegree[deg].comp;
    for (int a = 0; a < st.dim; ++a)
      for (int b = a + 1; b < st.dim; ++b) {
        mc[a * st.dim + b] = mc[b * st.dim + a];
        ec[a * st.dim + b] = ec[b * st.dim + a];
      }
  }
  return out;
}

double sectionEval(const Spacetime& st, const GradedModeSection& s, int deg, int i,
                   const std::vector<double>& x) {
  auto it = s.comp.find(deg);
  if (it == s.comp.end()) return 0.0;
  return it->second[i].eval(st, x);
}

// Max pointwise difference between a mode section and a jet-operator output.
double maxJetMismatch(const Spacetime& st, const GradedModeSection& got,
                      const std::function<GradedJets(const std::vector<double>&)>& ref,
                      unsigned seed) {
  double worst = 0.0;
  for (const auto& x : st.samplePoints(6, seed)) {
    GradedJets r = ref(x);
    for (const auto& [deg, T] : r.comp)
      for (size_t i = 0; i < T.c.size(); ++i)
        worst = std::max(worst, std::abs(T.c[i].value() -
                                         sectionEval(st, got, deg, static_cast<int>(i), x)));
    for (const auto& [deg, comp] : got.comp) {
      if (r.comp.count(deg)) continue;
      for (const ModeFn& f : comp)
        for (const auto& x2 : {x}) worst = std::max(worst, std::abs(f.eval(st, x2)));
    }
  }
  return worst;
}

double sectionMaxEval(const Spacetime& st, const GradedModeSection& s, int grid = 24) {
  double worst = 0.0;
  double t0 = st.bounds[0].first, t1 = st.bounds[0].second;
  std::vector<double> x(st.dim, 0.0);
  for (int it = 0; it <= grid; ++it) {
    x[0] = t0 + (t1 - t0) * it / grid;
    for (int ix = 0; ix < grid; ++ix) {
      for (int ax = 1; ax < st.dim; ++ax) x[ax] = st.period[ax] * ix / grid;
      for (const auto& [deg, comp] : s.comp)
        for (const ModeFn& f : comp) worst = std::max(worst, std::abs(f.eval(st, x)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("mode-space Q, W, P agree with the jet operators on torus slabs") {
  for (int dim : {2, 4}) {
    Spacetime st = makeTorusSlab(dim, -2.0, 2.0, 2.0 * pi);
    std::mt19937_64 rng(31 + dim);
    TwinSection tw = randomTwin(rng, st, 2, {-1, 0, 1, 2});
    GradedModeSection qm = applyQModes(st, tw.modes);
    GradedModeSection wm = applyWModes(st, tw.modes);
    GradedModeSection pm = applyPModes(st, tw.modes);
    auto viaJets = [&](auto op) {
      return [&, op](const std::vector<double>& x) {
        MetricEval me(st, x, 4);
        return op(me, evalSection(tw.exprs, st, x, 4));
      };
    };
    CHECK(maxJetMismatch(st, qm, viaJets([](const MetricEval& me, const GradedJets& s) {
            return applyQJets(Model::GR, me, s);
          }), 3) < 1e-8);
    CHECK(maxJetMismatch(st, wm, viaJets([](const MetricEval& me, const GradedJets& s) {
            return applyWJets(me, s);
          }), 4) < 1e-8);
    CHECK(maxJetMismatch(st, pm, viaJets([](const MetricEval& me, const GradedJets& s) {
            return applyPJets(me, s);
          }), 5) < 1e-7);
  }
}

TEST_CASE("QW + WQ is the componentwise wave operator in dim 4") {
  Spacetime st = makeTorusSlab(4, 0.0, 4.0, 5.0);
  std::mt19937_64 rng(7);
  GradedModeSection s = randomModeSection(rng, st, 2, 0.5, 3.5, {-1, 0, 1, 2});
  GradedModeSection diff = sectionSub(applyPModes(st, s), applyWaveModes(st, s));
  double worst = 0.0;
  for (const auto& [deg, comp] : diff.comp)
    for (const ModeFn& f : comp) worst = std::max(worst, f.maxAbsCoeff());
  CHECK(worst < 1e-8 * (1.0 + sectionMaxAbsCoeff(s)));
}

TEST_CASE("in 1+1 the identification survives only at ghost and antighost degree") {
  // the linearized Einstein tensor vanishes identically in two dimensions, so
  // the field/antifield rows of QW + WQ degenerate there
  Spacetime st = makeTorusSlab(2, 0.0, 4.0, 5.0);
  std::mt19937_64 rng(7);
  GradedModeSection s = randomModeSection(rng, st, 3, 0.5, 3.5, {-1, 2});
  GradedModeSection diff = sectionSub(applyPModes(st, s), applyWaveModes(st, s));
  for (int deg : {-1, 2})
    for (const ModeFn& f : diff.comp.at(deg))
      CHECK(f.maxAbsCoeff() < 1e-9 * (1.0 + sectionMaxAbsCoeff(s)));
  // and genuinely fails at degree 0
  GradedModeSection h = randomModeSection(rng, st, 2, 0.5, 3.5, {0});
  GradedModeSection d0 = sectionSub(applyPModes(st, h), applyWaveModes(st, h));
  double worst = 0.0;
  for (const ModeFn& f : d0.comp.at(0)) worst = std::max(worst, f.maxAbsCoeff());
  CHECK(worst > 1e-3);
}

TEST_CASE("green operators invert P and respect support direction") {
  Spacetime st = makeTorusSlab(2, 0.0, 6.0, 4.0);
  GreenOperatorHandle hp{st, true, 16};
  GreenOperatorHandle hm{st, false, 16};
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 6; ++trial) {
    GradedModeSection psi = randomModeSection(rng, st, 3, 1.5, 4.5, {-1, 0, 1, 2});
    double scale = 1.0 + sectionMaxAbsCoeff(psi);
    for (bool retarded : {true, false}) {
      GradedModeSection g = greenApply(retarded ? hp : hm, psi);
      GradedModeSection res = sectionSub(applyWaveModes(st, g), psi);
      CHECK(sectionMaxAbsCoeff(res) < 1e-8 * scale);
      // solution vanishes on the quiet side of the source support
      for (const auto& [deg, comp] : g.comp)
        for (const ModeFn& f : comp)
          for (const auto& [m, a] : f.terms) {
            double quietLo = retarded ? 0.0 : 4.5;
            double quietHi = retarded ? 1.5 : 6.0;
            CHECK(a.maxAbsOn(quietLo, quietHi) < 1e-9 * scale);
          }
    }
  }
  // in dim 4 the BV operator QW + WQ itself is inverted
  Spacetime st4 = makeTorusSlab(4, 0.0, 6.0, 4.0);
  GreenOperatorHandle hp4{st4, true, 8};
  GradedModeSection psi4 = randomModeSection(rng, st4, 1, 1.5, 4.5, {-1, 0, 1, 2});
  GradedModeSection g4 = greenApply(hp4, psi4);
  GradedModeSection res4 = sectionSub(applyPModes(st4, g4), psi4);
  CHECK(sectionMaxAbsCoeff(res4) < 1e-8 * (1.0 + sectionMaxAbsCoeff(psi4)));
}

TEST_CASE("single mode: closed-form kernel integral") {
  Spacetime st = makeTorusSlab(2, -3.0, 3.0, 2.0);
  double k = 2.0 * pi * 3 / st.period[1];
  TrigPoly prof = TrigPoly::bump(-1.0, 1.0, 4);
  GradedModeSection psi = singleModeSection(st, 0, 3, 3, false, prof);
  GreenOperatorHandle h{st, true, 8};
  GradedModeSection g = greenApply(h, psi);
  const TrigPoly& u = g.comp.at(0)[3].terms.begin()->second;
  for (double t : {-0.5, 0.3, 1.4, 2.6}) {
    double ref = integrateAdaptive(
        [&](double s) { return std::sin(k * (t - s)) / k * prof.eval(s); }, -1.0, t, 1e-12);
    CHECK(u.eval(t) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("finite propagation speed on the 1+1 torus") {
  // spatially localized source from a truncated Fourier expansion
  Spacetime st = makeTorusSlab(2, 0.0, 6.0, 8.0);
  double L = st.period[1];
  int N = 64;
  double xc = 4.0, halfw = 0.5;
  auto bumpX = [&](double x) {
    double u = (x - xc) / halfw;
    return std::abs(u) < 1.0 ? std::pow(1.0 - u * u, 6) : 0.0;
  };
  TrigPoly prof = TrigPoly::bump(2.5, 3.5, 4);
  GradedModeSection psi;
  psi.comp[2] = {ModeFn{}, ModeFn{}};
  ModeFn& src = psi.comp[2][0];
  for (int n = 0; n <= N; ++n) {
    double k = 2.0 * pi * n / L;
    double ac = integrateAdaptive([&](double x) { return bumpX(x) * std::cos(k * x); },
                                  xc - halfw, xc + halfw, 1e-13) *
                (n == 0 ? 1.0 : 2.0) / L;
    double as = n == 0 ? 0.0
                       : integrateAdaptive([&](double x) { return bumpX(x) * std::sin(k * x); },
                                           xc - halfw, xc + halfw, 1e-13) *
                             2.0 / L;
    src.add(SpatialMode{{n}, {false}}, prof * ac);
    if (n > 0) src.add(SpatialMode{{n}, {true}}, prof * as);
  }
  // sanity: truncated series reproduces the bump
  for (double x : {3.2, 4.0, 4.4, 6.5}) {
    CHECK(std::abs(src.eval(st, {3.0, x}) - bumpX(x)) < 1e-5);
  }
  GreenOperatorHandle hp{st, true, 64};
  GradedModeSection g = greenApply(hp, psi);
  const ModeFn& u = g.comp.at(2)[0];
  // outside J^+ of the source slab-ball the solution stays at truncation level
  double quietMax = 0.0, litMax = 0.0;
  for (int it = 0; it <= 40; ++it)
    for (int ix = 0; ix <= 80; ++ix) {
      double t = 6.0 * it / 40.0, x = L * ix / 80.0;
      double dx = std::abs(x - xc);
      dx = std::min(dx, L - dx);  // torus distance
      double v = std::abs(u.eval(st, {t, x}));
      if (t < 2.5 + (dx - halfw))
        quietMax = std::max(quietMax, v);  // strictly outside the causal future
      else
        litMax = std::max(litMax, v);
    }
  CHECK(quietMax < 1e-7);
  CHECK(litMax > 1e-2);  // the wave actually propagates
}

TEST_CASE("pairing: causal propagator antisymmetric, Dirac propagator symmetric") {
  Spacetime st = makeTorusSlab(2, 0.0, 6.0, 4.0);
  GreenOperatorHandle hp{st, true, 16};
  GreenOperatorHandle hm{st, false, 16};
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 5; ++trial) {
    GradedModeSection a = randomModeSection(rng, st, 3, 1.2, 4.8, {-1, 0, 1, 2});
    GradedModeSection b = randomModeSection(rng, st, 3, 1.2, 4.8, {-1, 0, 1, 2});
    double scale = (1.0 + sectionMaxAbsCoeff(a)) * (1.0 + sectionMaxAbsCoeff(b));
    Propagated pa = propagators(hp, hm, a);
    Propagated pb = propagators(hp, hm, b);
    CHECK(pairingModes(st, pa.G, b) ==
          doctest::Approx(-pairingModes(st, a, pb.G)).epsilon(1e-8).scale(scale));
    CHECK(pairingModes(st, pa.GD, b) ==
          doctest::Approx(pairingModes(st, a, pb.GD)).epsilon(1e-8).scale(scale));
    // retarded/advanced adjointness behind both identities
    CHECK(pairingModes(st, greenApply(hp, a), b) ==
          doctest::Approx(pairingModes(st, a, greenApply(hm, b))).epsilon(1e-8).scale(scale));
  }
}

TEST_CASE("pairing agrees with brute-force quadrature") {
  // wide low-degree profiles keep the global monomial basis well conditioned,
  // so the cross-check can run at tight tolerance
  Spacetime st = makeTorusSlab(2, 0.0, 5.0, 3.0);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  GradedModeSection a, b;
  a.comp[0] = {ModeFn{}, ModeFn{}, ModeFn{}, ModeFn{}};
  b.comp[1] = {ModeFn{}, ModeFn{}, ModeFn{}, ModeFn{}};
  for (int c = 0; c < 4; ++c) {
    std::uniform_int_distribution<int> N(0, 2), B(0, 1);
    for (GradedModeSection* s : {&a, &b}) {
      int n = N(rng);
      ModeFn& f = s == &a ? a.comp[0][c] : b.comp[1][c];
      f.add(SpatialMode{{n}, {n > 0 && B(rng) == 1}},
            TrigPoly::bump(0.5, 4.5, 2) * TrigPoly::polynomial({U(rng), U(rng)}));
    }
  }
  a.comp[0][1] = a.comp[0][2];
  b.comp[1][1] = b.comp[1][2];
  double exact = pairingModes(st, a, b);
  int nx = 256;
  double ref = integrateAdaptive(
      [&](double t) {
        double s = 0.0;
        for (int i = 0; i < nx; ++i) {
          double x = st.period[1] * i / nx;
          for (int c = 0; c < 4; ++c)
            s += a.comp.at(0)[c].eval(st, {t, x}) * b.comp.at(1)[c].eval(st, {t, x});
        }
        return pairingSign(0) * s * st.period[1] / nx;
      },
      0.0, 5.0, 1e-11);
  CHECK(exact == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("green homotopy: Q Lambda + Lambda Q = id and W commutes with G") {
  Spacetime st = makeTorusSlab(4, 0.0, 6.0, 4.0);
  std::mt19937_64 rng(53);
  for (bool retarded : {true, false}) {
    GreenOperatorHandle h{st, retarded, 16};
    for (int trial = 0; trial < 3; ++trial) {
      GradedModeSection s = randomModeSection(rng, st, 1, 1.5, 4.5, {-1, 0, 1, 2});
      double scale = 1.0 + sectionMaxAbsCoeff(s);
      GradedModeSection qlam = applyQModes(st, greenHomotopy(h, s));
      GradedModeSection lamq = greenHomotopy(h, applyQModes(st, s));
      GradedModeSection res = sectionSub(sectionSub(s, qlam), lamq);
      CHECK(sectionMaxAbsCoeff(res) < 1e-7 * scale);
      GradedModeSection comm =
          sectionSub(applyWModes(st, greenApply(h, s)), greenApply(h, applyWModes(st, s)));
      CHECK(sectionMaxAbsCoeff(comm) < 1e-8 * scale);
    }
  }
  // in 1+1 the identity holds on the nondegenerate (ghost/antighost) degrees
  Spacetime st2 = makeTorusSlab(2, 0.0, 6.0, 4.0);
  for (bool retarded : {true, false}) {
    GreenOperatorHandle h{st2, retarded, 16};
    for (int trial = 0; trial < 5; ++trial) {
      GradedModeSection s = randomModeSection(rng, st2, 3, 1.5, 4.5, {-1, 2});
      double scale = 1.0 + sectionMaxAbsCoeff(s);
      GradedModeSection qlam = applyQModes(st2, greenHomotopy(h, s));
      GradedModeSection lamq = greenHomotopy(h, applyQModes(st2, s));
      GradedModeSection res = sectionSub(sectionSub(s, qlam), lamq);
      for (int deg : {-1, 2})
        for (const ModeFn& f : res.comp.at(deg)) CHECK(f.maxAbsCoeff() < 1e-7 * scale);
    }
  }
}

TEST_CASE("timeSliceReduce: compact representative and preserved on-shell pairing") {
  Spacetime st = makeTorusSlab(2, 0.0, 8.0, 4.0);
  GreenOperatorHandle base{st, true, 16};
  std::mt19937_64 rng(61);
  GradedModeSection psi = randomModeSection(rng, st, 3, 4.5, 7.0, {0, 1});
  TemporalCutoff cut = makeCutoff(1.5, 2.5);
  TimeSliceResult r = timeSliceReduce(base, psi, cut, {1.0, 3.0});
  double scale = 1.0 + sectionMaxAbsCoeff(psi);
  // psi - psiM = P h holds exactly
  GradedModeSection lhs = sectionSub(psi, r.psiM);
  GradedModeSection rhs = applyWaveModes(st, r.certificate);
  CHECK(sectionMaxAbsCoeff(sectionSub(lhs, rhs)) < 1e-9 * scale);
  // the representative lives in the cutoff transition slab
  for (const auto& [deg, comp] : r.psiM.comp)
    for (const ModeFn& f : comp)
      for (const auto& [m, a] : f.terms) {
        CHECK(a.maxAbsOn(0.0, 1.5) < 1e-9 * scale);
        CHECK(a.maxAbsOn(2.5, 8.0) < 1e-9 * scale);
      }
  // on-shell pairings are unchanged
  for (int trial = 0; trial < 10; ++trial) {
    std::uniform_int_distribution<int> N(0, 3), C(0, 3), B(0, 1);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    int n = N(rng);
    double k = 2.0 * pi * n / st.period[1];
    double phase = U(rng) * pi;
    TrigPoly uprof = TrigPoly::cosWave(std::cos(phase), k) - TrigPoly::sinWave(std::sin(phase), k);
    if (n == 0) uprof = TrigPoly::polynomial({U(rng), U(rng)});  // k=0 solutions: a + b t
    for (int deg : {-1, 0, 1, 2}) {
      int count = deg == 0 || deg == 1 ? 4 : 2;
      GradedModeSection u = singleModeSection(st, deg, C(rng) % count, n, B(rng) == 1, uprof);
      CHECK(pairingModes(st, psi, u) ==
            doctest::Approx(pairingModes(st, r.psiM, u)).epsilon(1e-7).scale(scale + 1.0));
    }
  }
}

TEST_CASE("error paths") {
  Spacetime st = makeTorusSlab(2, 0.0, 6.0, 4.0);
  GreenOperatorHandle h{st, true, 4};
  TrigPoly prof = TrigPoly::bump(2.0, 4.0, 4);
  CHECK_THROWS_AS(greenApply(h, singleModeSection(st, 0, 0, 5, false, prof)), ModeCutoffTooLow);
  TrigPoly early = TrigPoly::bump(0.0, 1.0, 4);
  CHECK_THROWS_AS(greenApply(h, singleModeSection(st, 0, 0, 1, false, early)),
                  SupportTooCloseToBoundary);
  CHECK_THROWS_AS(timeSliceReduce(h, singleModeSection(st, 0, 0, 1, false, prof),
                                  makeCutoff(0.5, 1.5), {1.0, 3.0}),
                  CutoffOutsideImage);
  Spacetime mink = makeMinkowski(2);
  GradedModeSection s;
  CHECK_THROWS_AS(applyQModes(mink, s), UnsupportedBackground);
}

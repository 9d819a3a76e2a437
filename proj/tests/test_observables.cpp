#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gravfact/errors.hpp"
#include "gravfact/observables.hpp"

using namespace gravfact;

namespace {

constexpr double pi = std::numbers::pi;

Spacetime slab() { return makeTorusSlab(2, 0.0, 8.0, 6.0); }

CausalRegion diamondAt(const Spacetime& st, const Point& c, double r) {
  Point p = c, q = c;
  p[0] -= r;
  q[0] += r;
  return diamondRegion(st, p, q);
}

}  // namespace

TEST_CASE("shifted parity bookkeeping") {
  CHECK(shiftedParity(-1) == 0);
  CHECK(shiftedParity(0) == 1);
  CHECK(shiftedParity(1) == 0);
  CHECK(shiftedParity(2) == 1);

  Spacetime st = slab();
  std::mt19937_64 rng(11);
  GradedModeSection even = randomModeSection(rng, st, 2, 1.0, 7.0, {-1});
  GradedModeSection odd = randomModeSection(rng, st, 2, 1.0, 7.0, {0});
  CHECK(sectionParity(even) == 0);
  CHECK(sectionParity(odd) == 1);
  GradedModeSection mixed = even;
  for (const auto& [deg, comp] : odd.comp) mixed.comp.emplace(deg, comp);
  CHECK_THROWS_AS(sectionParity(mixed), Error);
}

TEST_CASE("word algebra and evaluation semantics") {
  Spacetime st = slab();
  std::mt19937_64 rng(23);
  GradedModeSection a = randomModeSection(rng, st, 2, 1.0, 7.0, {0});
  GradedModeSection b = randomModeSection(rng, st, 2, 1.0, 7.0, {1});
  GradedModeSection probe = randomModeSection(rng, st, 2, 0.5, 7.5, {-1, 0, 1, 2});

  Observable oa = linearObservable(st, a);
  Observable ob = linearObservable(st, b);
  double va = evaluate(oa, probe);
  double vb = evaluate(ob, probe);
  CHECK(std::abs(va) > 1e-12);  // generic probe pairs nontrivially

  CHECK(evaluate(unitObservable(st), probe) == doctest::Approx(1.0));
  CHECK(evaluate(obsMultiply(oa, ob), probe) == doctest::Approx(va * vb));
  CHECK(evaluate(obsAdd(oa, obsScale(ob, -2.0)), probe) == doctest::Approx(va - 2.0 * vb));

  // degree bound is enforced
  Observable big = oa;
  big.maxPolyDegree = 1;
  CHECK_THROWS_AS(obsMultiply(big, big), Error);
}

TEST_CASE("differential obeys the graded Leibniz rule and squares to zero") {
  Spacetime st = slab();
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 4; ++trial) {
    GradedModeSection a = randomModeSection(rng, st, 2, 1.0, 7.0, {trial % 2 == 0 ? 0 : 1});
    GradedModeSection b = randomModeSection(rng, st, 2, 1.0, 7.0, {trial < 2 ? 0 : -1});
    GradedModeSection probe = randomModeSection(rng, st, 2, 0.5, 7.5, {-1, 0, 1, 2});
    Observable oa = linearObservable(st, a);
    Observable ob = linearObservable(st, b);
    Observable prod = obsMultiply(oa, ob);

    double sign = sectionParity(a) == 0 ? 1.0 : -1.0;
    Observable leibniz = obsAdd(obsMultiply(applyQObs(oa), ob),
                                obsScale(obsMultiply(oa, applyQObs(ob)), sign));
    double scale = 1.0 + std::abs(evaluate(prod, probe));
    CHECK(std::abs(evaluate(applyQObs(prod), probe) - evaluate(leibniz, probe)) <
          1e-9 * scale);

    // Q^2 = 0 on quadratic words, evaluated against probes
    CHECK(std::abs(evaluate(applyQObs(applyQObs(prod)), probe)) < 1e-9 * scale);
  }
}

TEST_CASE("Poisson pairings: identities and symmetries") {
  Spacetime st = slab();
  std::mt19937_64 rng(53);

  SUBCASE("shifted pairing is the integral pairing and is antisymmetric") {
    GradedModeSection a = randomModeSection(rng, st, 2, 1.0, 7.0, {0});
    GradedModeSection b = randomModeSection(rng, st, 2, 1.0, 7.0, {1});
    double t = tau(PoissonKind::ShiftedMinus1, st, a, b);
    CHECK(t == doctest::Approx(pairingModes(st, a, b)));
    double scale = 1.0 + std::abs(t);
    double flip = tau(PoissonKind::ShiftedMinus1, st, b, a);
    CHECK(std::abs(flip + t) < 1e-10 * scale);
  }

  SUBCASE("unshifted and Dirac pairings are graded symmetric") {
    // tau_0 is symmetric with respect to the unshifted parity (degree mod 2)
    // and tau_D with respect to the shifted parity; on the pairs (1,1) and
    // (0,2) those gradings predict opposite exchange signs.
    for (auto degs : {std::pair<int, int>{1, 1}, std::pair<int, int>{0, 2}}) {
      GradedModeSection a = randomModeSection(rng, st, 1, 1.0, 7.0, {degs.first});
      GradedModeSection b = randomModeSection(rng, st, 1, 1.0, 7.0, {degs.second});
      double s0 = (degs.first % 2 == 0) ? 1.0 : -1.0;  // unshifted Koszul sign
      double sD = -s0;                                  // shifted Koszul sign
      double t0ab = tau(PoissonKind::Unshifted0, st, a, b, 16);
      double t0ba = tau(PoissonKind::Unshifted0, st, b, a, 16);
      double tdab = tau(PoissonKind::Dirac, st, a, b, 16);
      double tdba = tau(PoissonKind::Dirac, st, b, a, 16);
      double scale = 1.0 + std::abs(t0ab) + std::abs(tdab);
      CHECK(std::abs(t0ab - s0 * t0ba) < 1e-9 * scale);
      CHECK(std::abs(tdab - sD * tdba) < 1e-9 * scale);
      CHECK(std::abs(t0ab) + std::abs(tdab) > 1e-6);  // nondegenerate data
    }
  }

  SUBCASE("the Dirac pairing bounds the shifted one") {
    // d tau_D = tau_{-1}: on ghost/antighost degrees, where the homotopy
    // identity holds in 1+1, tau_D(Q psi1, psi2) + tau_D(psi1, Q psi2)
    // reproduces the integral pairing up to sign.
    for (int trial = 0; trial < 3; ++trial) {
      GradedModeSection p1 = randomModeSection(rng, st, 1, 1.0, 7.0, {-1});
      GradedModeSection p2 = randomModeSection(rng, st, 1, 1.0, 7.0, {2});
      double lhs1 = tau(PoissonKind::Dirac, st, applyQModes(st, p1), p2, 16);
      double lhs2 = tau(PoissonKind::Dirac, st, p1, applyQModes(st, p2), 16);
      double rhs = tau(PoissonKind::ShiftedMinus1, st, p1, p2);
      double scale = 1.0 + std::abs(rhs);
      bool match = std::abs(lhs1 + lhs2 - rhs) < 1e-7 * scale ||
                   std::abs(lhs1 + lhs2 + rhs) < 1e-7 * scale ||
                   std::abs(lhs1 - lhs2 - rhs) < 1e-7 * scale ||
                   std::abs(lhs1 - lhs2 + rhs) < 1e-7 * scale;
      CHECK(match);
    }
  }
}

TEST_CASE("pushforward: pointwise translation, round trip, adjointness") {
  Spacetime small = makeTorusSlab(2, 0.0, 3.0, 6.0);
  Spacetime big = slab();
  LocMorphism f = makeSlabInclusion(small, big, 2.0, {1.7});
  validateLocMorphism(f);

  std::mt19937_64 rng(71);
  GradedModeSection psi = randomModeSection(rng, small, 3, 0.4, 2.6, {0, 1});
  GradedModeSection pf = pushforwardSection(f, psi);

  SUBCASE("pointwise translation inside the image") {
    for (int it = 0; it <= 10; ++it)
      for (int ix = 0; ix <= 10; ++ix) {
        Point xs = {0.3 * it, 0.6 * ix};
        Point xt = f.apply(xs);
        for (const auto& [deg, comp] : psi.comp)
          for (size_t i = 0; i < comp.size(); ++i) {
            double vs = comp[i].eval(small, xs);
            double vt = pf.comp.at(deg)[i].eval(big, xt);
            CHECK(std::abs(vs - vt) < 1e-9 * (1.0 + std::abs(vs)));
          }
      }
  }

  SUBCASE("pullback inverts pushforward at coefficient level") {
    GradedModeSection back = pullbackSection(f, pf);
    double scale = 1.0 + sectionMaxAbsCoeff(psi);
    CHECK(sectionMaxAbsCoeff(sectionSub(back, psi)) < 1e-10 * scale);
  }

  SUBCASE("pairing adjointness across the inclusion") {
    // supp psi sits away from the image ends, so extension by zero makes
    // <f_* psi, u>_N = <psi, f^* u>_M for any probe u on the target.
    GradedModeSection u = randomModeSection(rng, big, 3, 0.5, 7.5, {-1, 0, 1, 2});
    double lhs = pairingModes(big, pf, u);
    double rhs = pairingModes(small, psi, pullbackSection(f, u));
    CHECK(std::abs(lhs - rhs) < 1e-8 * (1.0 + std::abs(lhs)));
  }

  SUBCASE("observable pushforward matches section pushforward") {
    GradedModeSection probe = randomModeSection(rng, big, 3, 0.5, 7.5, {-1, 0, 1, 2});
    Observable o = linearObservable(small, psi);
    double lhs = evaluate(pushforward(f, o), probe);
    double rhs = evaluate(linearObservable(big, pf), probe);
    CHECK(lhs == doctest::Approx(rhs));
  }
}

TEST_CASE("factorization and time-ordered products") {
  Spacetime big = slab();
  Spacetime sub = makeTorusSlab(2, 0.0, 1.5, 6.0);
  std::mt19937_64 rng(97);

  LocMorphism f1 = makeSlabInclusion(sub, big, 0.5, {0.0});
  LocMorphism f2 = makeSlabInclusion(sub, big, 5.5, {2.5});
  GradedModeSection s1 = randomModeSection(rng, sub, 2, 0.2, 1.3, {1});
  GradedModeSection s2 = randomModeSection(rng, sub, 2, 0.2, 1.3, {1});
  Observable o1 = linearObservable(sub, s1);
  Observable o2 = linearObservable(sub, s2);
  GradedModeSection probe = randomModeSection(rng, big, 2, 0.2, 7.8, {-1, 0, 1, 2});

  SUBCASE("empty tuple yields the unit, unary tuple the pushforward") {
    CHECK(evaluate(factorizationProduct(big, {}, {}), probe) == doctest::Approx(1.0));
    CHECK(evaluate(factorizationProduct(big, {f1}, {o1}), probe) ==
          doctest::Approx(evaluate(pushforward(f1, o1), probe)));
  }

  SUBCASE("binary product multiplies and is order independent") {
    double v = evaluate(factorizationProduct(big, {f1, f2}, {o1, o2}), probe);
    double w = evaluate(factorizationProduct(big, {f2, f1}, {o2, o1}), probe);
    double expect =
        evaluate(pushforward(f1, o1), probe) * evaluate(pushforward(f2, o2), probe);
    CHECK(v == doctest::Approx(expect));
    CHECK(w == doctest::Approx(expect));
  }

  SUBCASE("overlapping images are refused") {
    LocMorphism f3 = makeSlabInclusion(sub, big, 0.9, {0.2});
    CHECK_THROWS_AS(factorizationProduct(big, {f1, f3}, {o1, o2}), OverlappingImages);
  }

  SUBCASE("time-ordered product orders timelike-stacked tuples") {
    // slab images are time-orderable: the later image is given first here
    double v = evaluate(timeOrderedProduct(big, {f2, f1}, {o2, o1}), probe);
    double expect =
        evaluate(pushforward(f1, o1), probe) * evaluate(pushforward(f2, o2), probe);
    CHECK(v == doctest::Approx(expect));
  }

  SUBCASE("cyclic precedence is reported, not silently ordered") {
    Spacetime mink = makeMinkowski(2);
    LocMorphism g1 = f1, g2 = f2;
    g1.target = mink;
    g2.target = mink;
    g1.imageRegion = unionRegion(
        {diamondAt(mink, {-2.0, 0.0}, 0.5), diamondAt(mink, {2.0, 0.0}, 0.5)});
    g2.imageRegion = diamondAt(mink, {0.0, 0.0}, 0.5);
    CHECK_THROWS_AS(timeOrderedProduct(mink, {g1, g2}, {o1, o2}), NotTimeOrderableError);
  }
}

TEST_CASE("localized sections approximate the bump they project") {
  Spacetime st = slab();
  GradedModeSection psi = localizedSection(st, 1, 3, 3.0, 5.0, {2.0}, {1.0}, 40);
  auto bumpX = [](double u) { return std::abs(u) < 1.0 ? std::pow(1.0 - u * u, 6) : 0.0; };
  TrigPoly prof = TrigPoly::bump(3.0, 5.0, 4);
  for (int it = 0; it <= 12; ++it)
    for (int ix = 0; ix <= 12; ++ix) {
      Point x = {8.0 * it / 12.0, 6.0 * ix / 12.0};
      double expect = prof.eval(x[0]) * bumpX((x[1] - 2.0) / 1.0);
      CHECK(std::abs(psi.comp.at(1)[3].eval(st, x) - expect) < 1e-6);
    }
  // rank-2 symmetry of the placed component
  CHECK(sectionMaxAbsCoeff(psi) > 0.0);
  Point x = {4.1, 2.2};
  CHECK(psi.comp.at(1)[1 * 2 + 0].eval(st, x) ==
        doctest::Approx(psi.comp.at(1)[0 * 2 + 1].eval(st, x)));
}

TEST_CASE("Einstein causality suite") {
  VerificationReport rep = suiteEinsteinCausality(slab(), 4, 2024);
  for (const auto& row : rep.rows) {
    INFO(row.id, " residual ", row.residual, " tol ", row.tolerance);
    CHECK(row.pass);
  }
}

TEST_CASE("Cauchy constancy suite") {
  Spacetime small = makeTorusSlab(2, 0.0, 3.0, 6.0);
  Spacetime big = slab();
  LocMorphism f = makeSlabInclusion(small, big, 0.5, {});
  VerificationReport rep = suiteCauchyConstancy(f, 3, 2024);
  for (const auto& row : rep.rows) {
    INFO(row.id, " residual ", row.residual, " tol ", row.tolerance);
    CHECK(row.pass);
  }

  // non-Cauchy morphisms are refused
  LocMorphism partial = f;
  partial.imageRegion = boxRegion(big, CoordBox{{{0.5, 3.5}, {1.0, 4.0}}});
  CHECK_THROWS_AS(suiteCauchyConstancy(partial, 1, 1), NotCauchy);
}

TEST_CASE("prefactorization axiom suite") {
  VerificationReport rep = suitePrefactorizationAxioms(slab(), 2024);
  for (const auto& row : rep.rows) {
    INFO(row.id, " residual ", row.residual, " tol ", row.tolerance);
    CHECK(row.pass);
  }
}

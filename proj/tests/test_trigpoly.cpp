#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gravfact/quadrature.hpp"
#include "gravfact/trigpoly.hpp"

using namespace gravfact;

namespace {

// Random piecewise-free trig polynomial for round-trip tests.
TrigPoly randomPoly(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  TrigPoly p = TrigPoly::polynomial({U(rng), U(rng), 0.3 * U(rng)});
  p = p + TrigPoly::cosWave(U(rng), 1.7) + TrigPoly::sinWave(U(rng), 0.4);
  return p;
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("bump: values, support, and the closed-form integral") {
  for (int power : {2, 4}) {
    TrigPoly b = TrigPoly::bump(-0.5, 2.0, power);
    CHECK(b.eval(-0.6) == 0.0);
    CHECK(b.eval(2.1) == 0.0);
    CHECK(b.eval(0.75) == doctest::Approx(1.0));  // peak at midpoint
    double u = 0.3;                               // compare against (1-u^2)^power directly
    double t = 0.75 + u * 1.25;
    CHECK(b.eval(t) == doctest::Approx(std::pow(1.0 - u * u, power)));
    // int_{-1}^{1} (1-u^2)^n du = 2^{2n+1} (n!)^2 / (2n+1)!  (times halfwidth here)
    int n = power;
    double exact =
        std::pow(2.0, 2 * n + 1) * factorial(n) * factorial(n) / factorial(2 * n + 1) * 1.25;
    CHECK(b.integral(-3.0, 3.0) == doctest::Approx(exact).epsilon(1e-12));
    double lo, hi;
    REQUIRE(b.supportInterval(lo, hi));
    CHECK(lo == doctest::Approx(-0.5));
    CHECK(hi == doctest::Approx(2.0));
  }
}

TEST_CASE("arithmetic matches pointwise evaluation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    TrigPoly a = randomPoly(rng);
    TrigPoly b = randomPoly(rng) * TrigPoly::bump(-1.0, 1.5, 2);
    TrigPoly sum = a + b, prod = a * b, diff = a - b;
    for (double t : {-1.7, -0.4, 0.0, 0.3, 1.2, 2.5}) {
      CHECK(sum.eval(t) == doctest::Approx(a.eval(t) + b.eval(t)).epsilon(1e-12));
      CHECK(prod.eval(t) == doctest::Approx(a.eval(t) * b.eval(t)).epsilon(1e-12));
      CHECK(diff.eval(t) == doctest::Approx(a.eval(t) - b.eval(t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("derivative and antiderivative") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 8; ++trial) {
    TrigPoly p = randomPoly(rng) * TrigPoly::bump(-2.0, 1.0, 3);
    TrigPoly dp = p.deriv();
    double hstep = 1e-6;
    for (double t : {-1.5, -0.2, 0.6}) {
      double fd = (p.eval(t + hstep) - p.eval(t - hstep)) / (2 * hstep);
      CHECK(dp.eval(t) == doctest::Approx(fd).epsilon(1e-6));
    }
    TrigPoly A = p.antideriv(-2.5);
    CHECK(A.eval(-2.5) == doctest::Approx(0.0));
    TrigPoly round = A.deriv();
    for (double t : {-1.8, -0.9, 0.4, 0.95}) {
      CHECK(round.eval(t) == doctest::Approx(p.eval(t)).epsilon(1e-10));
    }
    // integral agrees with independent adaptive quadrature
    double got = p.integral(-2.0, 1.0);
    double ref = integrateAdaptive([&](double t) { return p.eval(t); }, -2.0, 1.0, 1e-12);
    CHECK(got == doctest::Approx(ref).epsilon(1e-10));
  }
}

TEST_CASE("window clips support exactly") {
  TrigPoly p = TrigPoly::cosWave(1.0, 2.0) + TrigPoly::constant(0.3);
  TrigPoly w = p.window(-1.0, 2.0);
  CHECK(w.eval(-1.2) == 0.0);
  CHECK(w.eval(2.2) == 0.0);
  CHECK(w.eval(0.5) == doctest::Approx(p.eval(0.5)));
  double lo, hi;
  REQUIRE(w.supportInterval(lo, hi));
  CHECK(lo == doctest::Approx(-1.0));
  CHECK(hi == doctest::Approx(2.0));
}

TEST_CASE("cutoff is monotone 1 -> 0 with flat C^2 ends") {
  TrigPoly chi = TrigPoly::cutoff(0.0, 1.0);
  CHECK(chi.eval(-2.0) == doctest::Approx(1.0));
  CHECK(chi.eval(0.0) == doctest::Approx(1.0));
  CHECK(chi.eval(0.5) == doctest::Approx(0.5));
  CHECK(chi.eval(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(chi.eval(3.0) == doctest::Approx(0.0).epsilon(1e-12));
  TrigPoly d1 = chi.deriv(), d2 = d1.deriv();
  for (double t : {0.0, 1.0}) {
    CHECK(std::abs(d1.eval(t)) < 1e-12);
    CHECK(std::abs(d2.eval(t)) < 1e-12);
  }
  for (double t = 0.05; t < 1.0; t += 0.05) CHECK(d1.eval(t) <= 1e-15);
}

TEST_CASE("duhamel: retarded solution of u'' + k^2 u = f") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (double k : {0.0, 1.0, 3.5}) {
    for (int trial = 0; trial < 4; ++trial) {
      TrigPoly f = (TrigPoly::polynomial({U(rng), U(rng)}) + TrigPoly::cosWave(U(rng), 2.2)) *
                   TrigPoly::bump(-1.0, 1.0, 3);
      TrigPoly u = TrigPoly::duhamelRetarded(k, f, -4.0);
      // residual vanishes identically
      TrigPoly res = u.deriv().deriv() + u * (k * k) - f;
      CHECK(res.maxAbsOn(-4.0, 4.0) < 1e-9 * (1.0 + f.maxAbsCoeff()));
      // zero before the source switches on
      CHECK(u.maxAbsOn(-4.0, -1.0) < 1e-10 * (1.0 + f.maxAbsCoeff()));
      // matches the explicit kernel integral at spot points
      for (double t : {-0.5, 0.4, 1.3, 2.7}) {
        double ref = integrateAdaptive(
            [&](double s) {
              double tau = t - s;
              double ker = (k == 0.0) ? tau : std::sin(k * tau) / k;
              return ker * f.eval(s);
            },
            -1.0, t, 1e-12);
        CHECK(u.eval(t) == doctest::Approx(ref).epsilon(1e-9));
      }
      // advanced solution vanishes after the source switches off
      TrigPoly v = TrigPoly::duhamelAdvanced(k, f, 4.0);
      TrigPoly resA = v.deriv().deriv() + v * (k * k) - f;
      CHECK(resA.maxAbsOn(-4.0, 4.0) < 1e-9 * (1.0 + f.maxAbsCoeff()));
      CHECK(v.maxAbsOn(1.0, 4.0) < 1e-10 * (1.0 + f.maxAbsCoeff()));
    }
  }
}

TEST_CASE("duhamel resonance: source at the mode frequency") {
  double k = 2.0;
  TrigPoly f = TrigPoly::cosWave(1.0, k) * TrigPoly::bump(-1.0, 1.0, 4);
  TrigPoly u = TrigPoly::duhamelRetarded(k, f, -3.0);
  TrigPoly res = u.deriv().deriv() + u * (k * k) - f;
  CHECK(res.maxAbsOn(-3.0, 5.0) < 1e-10);
  CHECK(u.maxAbsOn(-3.0, -1.0) < 1e-12);
  // after the source window the solution is a free oscillation, nonzero here
  CHECK(u.maxAbsOn(1.0, 5.0) > 1e-3);
}

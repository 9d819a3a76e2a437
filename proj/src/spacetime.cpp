#include "gravfact/spacetime.hpp"

#include <cmath>
#include <random>

#include "gravfact/errors.hpp"
#include "gravfact/geometry.hpp"

namespace gravfact {

namespace {

const double kPi = 3.14159265358979323846;

// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
std::vector<double> symEigenvalues(std::vector<double> a, int n) {
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::abs(a[static_cast<size_t>(p) * n + q]);
    if (off < 1e-15) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = a[static_cast<size_t>(p) * n + q];
        if (std::abs(apq) < 1e-18) continue;
        double app = a[static_cast<size_t>(p) * n + p];
        double aqq = a[static_cast<size_t>(q) * n + q];
        double theta = 0.5 * std::atan2(2.0 * apq, aqq - app);
        double c = std::cos(theta), s = std::sin(theta);
        for (int k = 0; k < n; ++k) {
          double akp = a[static_cast<size_t>(k) * n + p];
          double akq = a[static_cast<size_t>(k) * n + q];
          a[static_cast<size_t>(k) * n + p] = c * akp - s * akq;
          a[static_cast<size_t>(k) * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a[static_cast<size_t>(p) * n + k];
          double aqk = a[static_cast<size_t>(q) * n + k];
          a[static_cast<size_t>(p) * n + k] = c * apk - s * aqk;
          a[static_cast<size_t>(q) * n + k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a[static_cast<size_t>(i) * n + i];
  return ev;
}

std::vector<std::vector<Expr>> zeroMatrix(int n) {
  return std::vector<std::vector<Expr>>(n, std::vector<Expr>(n, Expr(0.0)));
}

}  // namespace

std::vector<std::vector<double>> Spacetime::samplePoints(int count, unsigned seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> pts;
  pts.reserve(count);
  for (int k = 0; k < count; ++k) {
    std::vector<double> x(dim);
    for (int i = 0; i < dim; ++i) {
      double lo = bounds[i].first, hi = bounds[i].second;
      double margin = (period[i] > 0.0) ? 0.0 : 0.12 * (hi - lo);
      x[i] = lo + margin + (hi - lo - 2.0 * margin) * u(rng);
    }
    pts.push_back(std::move(x));
  }
  return pts;
}

void validateSpacetime(const Spacetime& st, int samples, unsigned seed) {
  const int n = st.dim;
  if (n < 2 || n > 4) throw DimensionUnsupported("supported dimensions are 2..4");
  bool needBach = st.claims.bachFlat && n == 4;
  int order = needBach ? 4 : 2;
  int count = needBach ? std::min(samples, 3) : samples;
  for (const auto& x : st.samplePoints(count, seed)) {
    MetricEval me(st, x, order);
    // symmetry
    double gs = std::max(1.0, me.g.maxAbsValue());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (std::abs(me.g.at2(i, j).value() - me.g.at2(j, i).value()) > 1e-12 * gs)
          throw ClaimViolation("metric expression matrix is not symmetric");
    // Lorentzian signature: exactly one negative eigenvalue
    std::vector<double> m(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m[static_cast<size_t>(i) * n + j] = me.g.at2(i, j).value();
    int neg = 0;
    for (double ev : symEigenvalues(m, n)) {
      if (std::abs(ev) < 1e-12) throw SingularMetric("degenerate metric eigenvalue");
      if (ev < 0.0) ++neg;
    }
    if (neg != 1) throw ClaimViolation("metric does not have Lorentzian signature");
    // timelike future orientation
    double tt = 0.0;
    std::vector<double> T(n);
    for (int i = 0; i < n; ++i) T[i] = st.timeOrientation[i].eval(x);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) tt += m[static_cast<size_t>(i) * n + j] * T[i] * T[j];
    if (tt >= 0.0) throw ClaimViolation("time orientation vector is not timelike");

    Curvature cv = curvature(me);
    double riemScale = std::max(1.0, cv.riemann04.maxAbsValue());
    if (st.claims.ricciFlat && cv.ricci.maxAbsValue() > 1e-8 * riemScale)
      throw ClaimViolation("Ricci flatness claim fails at sample point");
    if (st.claims.einstein) {
      double lam = cv.scalar.value() / n;
      TensorJ dev = cv.ricci;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          dev.at2(i, j) = dev.at2(i, j) - lam * me.g.at2(i, j).truncated(dev.order());
      if (dev.maxAbsValue() > 1e-8 * std::max(1.0, riemScale))
        throw ClaimViolation("Einstein claim fails at sample point");
    }
    if (st.claims.conformallyFlat && n >= 3) {
      if (weyl04(me, cv).maxAbsValue() > 1e-8 * riemScale)
        throw ClaimViolation("conformal flatness claim fails at sample point");
    }
    if (needBach) {
      double bscale = std::max(1.0, riemScale * riemScale);
      if (bach(me).maxAbsValue() > 1e-6 * bscale)
        throw ClaimViolation("Bach flatness claim fails at sample point");
    }
  }
}

Spacetime makeMinkowski(int dim) {
  Spacetime st;
  st.dim = dim;
  st.kind = ChartKind::MinkowskiBox;
  st.name = "minkowski" + std::to_string(dim) + "d";
  st.bounds.assign(dim, {-5.0, 5.0});
  st.period.assign(dim, 0.0);
  st.metric = zeroMatrix(dim);
  st.metric[0][0] = Expr(-1.0);
  for (int i = 1; i < dim; ++i) st.metric[i][i] = Expr(1.0);
  st.timeOrientation.assign(dim, Expr(0.0));
  st.timeOrientation[0] = Expr(1.0);
  st.claims = {true, true, true, true};
  if (dim < 4) st.claims.bachFlat = false;
  if (dim < 3) st.claims.conformallyFlat = false;
  validateSpacetime(st);
  return st;
}

Spacetime makeTorusSlab(int dim, double t0, double t1, double L) {
  Spacetime st = makeMinkowski(dim);
  st.kind = ChartKind::UltrastaticTorusSlab;
  st.name = "torus_slab_" + std::to_string(dim) + "d";
  st.bounds[0] = {t0, t1};
  for (int i = 1; i < dim; ++i) {
    st.bounds[i] = {0.0, L};
    st.period[i] = L;
  }
  validateSpacetime(st);
  return st;
}

Spacetime makeSphericalStatic(const Expr& V, double rmin, double rmax,
                              const std::string& name, Claims claims) {
  Spacetime st;
  st.dim = 4;
  st.kind = ChartKind::SphericalStatic;
  st.name = name;
  st.bounds = {{-10.0, 10.0}, {rmin, rmax}, {0.4, kPi - 0.4}, {0.2, 2.0 * kPi - 0.2}};
  st.period.assign(4, 0.0);
  Expr r = Expr::coord(1), th = Expr::coord(2);
  st.metric = zeroMatrix(4);
  st.metric[0][0] = -V;
  st.metric[1][1] = Expr(1.0) / V;
  st.metric[2][2] = r * r;
  st.metric[3][3] = r * r * sin(th) * sin(th);
  st.timeOrientation = {Expr(1.0), Expr(0.0), Expr(0.0), Expr(0.0)};
  st.claims = claims;
  validateSpacetime(st);
  return st;
}

Spacetime makeSchwarzschild(double mass) {
  Expr r = Expr::coord(1);
  Expr V = Expr(1.0) - Expr(2.0 * mass) / r;
  Claims c;
  c.ricciFlat = true;
  c.bachFlat = true;
  return makeSphericalStatic(V, 2.5 * mass, 20.0 * mass, "schwarzschild", c);
}

Spacetime makeMannheim(double b, double c) {
  Expr r = Expr::coord(1);
  Expr V = Expr(1.0) - Expr(2.0 * b) / r + Expr(c) * r;
  return makeSphericalStatic(V, 2.5 * b, 15.0, "mannheim", Claims{});
}

Spacetime makeMannheimExact(double beta, double gamma) {
  Expr r = Expr::coord(1);
  double w = 1.0 - 3.0 * beta * gamma;
  Expr V = Expr(w) - Expr(beta * (2.0 - 3.0 * beta * gamma)) / r + Expr(gamma) * r;
  Claims c;
  c.bachFlat = true;
  return makeSphericalStatic(V, 2.5 * beta, 15.0, "mannheim_exact", c);
}

Spacetime conformalRescale(const Spacetime& st, const Expr& f) {
  Spacetime out = st;
  out.name = st.name + "_conformal";
  Expr omega = exp(Expr(2.0) * f);
  for (int i = 0; i < st.dim; ++i)
    for (int j = 0; j < st.dim; ++j) out.metric[i][j] = omega * st.metric[i][j];
  Claims c;
  c.conformallyFlat = st.claims.conformallyFlat;
  out.claims = c;
  validateSpacetime(out, 4);
  return out;
}

Spacetime perturbMetric(const Spacetime& st, const std::vector<std::vector<Expr>>& k,
                        double eps, const std::string& name) {
  Spacetime out = st;
  out.name = name;
  for (int i = 0; i < st.dim; ++i)
    for (int j = 0; j < st.dim; ++j) out.metric[i][j] = st.metric[i][j] + Expr(eps) * k[i][j];
  out.claims = Claims{};
  return out;
}

}  // namespace gravfact

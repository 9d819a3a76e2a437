#include "gravfact/geometry.hpp"

#include <cmath>

#include "gravfact/errors.hpp"

namespace gravfact {

namespace {

// Invert a symmetric jet matrix by Gauss-Jordan with partial value pivoting.
std::vector<Jet> invertMatrix(std::vector<Jet> a, int n, int jdim, int jord) {
  std::vector<Jet> inv(static_cast<size_t>(n) * n, Jet::constant(jdim, jord, 0.0));
  for (int i = 0; i < n; ++i) inv[static_cast<size_t>(i) * n + i] = Jet::constant(jdim, jord, 1.0);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[static_cast<size_t>(r) * n + col].value()) >
          std::abs(a[static_cast<size_t>(piv) * n + col].value()))
        piv = r;
    if (std::abs(a[static_cast<size_t>(piv) * n + col].value()) < 1e-14)
      throw SingularMetric("metric matrix is numerically singular");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(a[static_cast<size_t>(piv) * n + j], a[static_cast<size_t>(col) * n + j]);
        std::swap(inv[static_cast<size_t>(piv) * n + j], inv[static_cast<size_t>(col) * n + j]);
      }
    Jet r = a[static_cast<size_t>(col) * n + col].reciprocal();
    for (int j = 0; j < n; ++j) {
      a[static_cast<size_t>(col) * n + j] = a[static_cast<size_t>(col) * n + j] * r;
      inv[static_cast<size_t>(col) * n + j] = inv[static_cast<size_t>(col) * n + j] * r;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      Jet f = a[static_cast<size_t>(row) * n + col];
      for (int j = 0; j < n; ++j) {
        a[static_cast<size_t>(row) * n + j] =
            a[static_cast<size_t>(row) * n + j] - f * a[static_cast<size_t>(col) * n + j];
        inv[static_cast<size_t>(row) * n + j] =
            inv[static_cast<size_t>(row) * n + j] - f * inv[static_cast<size_t>(col) * n + j];
      }
    }
  }
  return inv;
}

Jet detJet(const std::vector<Jet>& a, int n) {
  // cofactor expansion; n <= 4 so this is fine
  if (n == 1) return a[0];
  Jet det = Jet::constant(a[0].dim(), a[0].order(), 0.0);
  std::vector<Jet> minor(static_cast<size_t>(n - 1) * (n - 1), det);
  double sign = 1.0;
  for (int col = 0; col < n; ++col) {
    for (int r = 1; r < n; ++r) {
      int mc = 0;
      for (int cidx = 0; cidx < n; ++cidx) {
        if (cidx == col) continue;
        minor[static_cast<size_t>(r - 1) * (n - 1) + mc] = a[static_cast<size_t>(r) * n + cidx];
        ++mc;
      }
    }
    det = det + sign * a[col] * detJet(minor, n - 1);
    sign = -sign;
  }
  return det;
}

}  // namespace

MetricEval::MetricEval(const Spacetime& st, const std::vector<double>& xx, int ord)
    : dim(st.dim), order(ord), x(xx) {
  if (!st.contains(x)) throw OutOfChart("evaluation point outside chart box");
  g = TensorJ(dim, {false, false}, dim, order);
  std::vector<Jet> seeds;
  seeds.reserve(dim);
  for (int i = 0; i < dim; ++i) seeds.push_back(Jet::variable(dim, order, i, x[i]));
  std::vector<Jet> gm;
  gm.reserve(static_cast<size_t>(dim) * dim);
  Expr::JetMemo memo;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      g.at2(i, j) = st.metric[i][j].evalCached(seeds, memo);
      gm.push_back(g.at2(i, j));
    }
  detg = detJet(gm, dim);
  if (std::abs(detg.value()) < 1e-12)
    throw SingularMetric("metric determinant below threshold at evaluation point");
  std::vector<Jet> inv = invertMatrix(gm, dim, dim, order);
  ginv = TensorJ(dim, {true, true}, dim, order);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) ginv.at2(i, j) = inv[static_cast<size_t>(i) * dim + j];
  sqrtAbsDet = sqrt(detg.value() < 0.0 ? -detg : detg);
}

const TensorJ& MetricEval::christoffel() const {
  if (haveGamma_) return gamma_;
  int ord = order - 1;
  if (ord < 0) throw Error("jet order too low for Christoffel symbols");
  gamma_ = TensorJ(dim, {true, false, false}, dim, ord);
  // precompute partials of g
  std::vector<TensorJ> dg(dim, TensorJ(dim, {false, false}, dim, ord));
  for (int c = 0; c < dim; ++c)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) dg[c].at2(i, j) = g.at2(i, j).deriv(c);
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int cc = 0; cc < dim; ++cc) {
        Jet s = Jet::constant(dim, ord, 0.0);
        for (int d = 0; d < dim; ++d)
          s = s + ginv.at2(a, d) * (dg[b].at2(d, cc) + dg[cc].at2(b, d) - dg[d].at2(b, cc));
        gamma_.at({a, b, cc}) = s * 0.5;
      }
  gammaZero_ = true;
  for (const Jet& j : gamma_.c)
    if (j.maxAbsCoeff() != 0.0) {
      gammaZero_ = false;
      break;
    }
  haveGamma_ = true;
  return gamma_;
}

bool MetricEval::christoffelZero() const {
  christoffel();
  return gammaZero_;
}

TensorJ covariantDeriv(const MetricEval& me, const TensorJ& t) {
  int m = t.order();
  if (m < 1) throw Error("jet order exhausted in covariant derivative");
  int ord = m - 1;
  const TensorJ& Gam = me.christoffel();
  std::vector<bool> outUp;
  outUp.push_back(false);
  for (bool u : t.up) outUp.push_back(u);
  TensorJ out(me.dim, outUp, me.dim, ord);
  int rank = t.slots();
  std::vector<int> idx(static_cast<size_t>(rank), 0);
  if (rank == 0) {
    for (int c = 0; c < me.dim; ++c) out.at1(c) = t.c[0].deriv(c);
    return out;
  }
  const bool plain = me.christoffelZero();
  do {
    const Jet base0 = t.at(idx);
    for (int c = 0; c < me.dim; ++c) {
      Jet s = base0.deriv(c);
      for (int slot = 0; !plain && slot < rank; ++slot) {
        std::vector<int> jdx = idx;
        for (int mI = 0; mI < me.dim; ++mI) {
          jdx[slot] = mI;
          Jet tm = t.at(jdx).truncated(ord);
          if (t.up[slot])
            s = s + Gam.at({idx[slot], c, mI}) * tm;
          else
            s = s - Gam.at({mI, c, idx[slot]}) * tm;
        }
      }
      std::vector<int> odx;
      odx.reserve(rank + 1);
      odx.push_back(c);
      for (int v : idx) odx.push_back(v);
      out.at(odx) = s;
    }
  } while (nextIndex(idx, me.dim));
  return out;
}

Curvature curvature(const MetricEval& me) {
  const int n = me.dim;
  const TensorJ& Gam = me.christoffel();
  int ord = Gam.order() - 1;
  if (ord < 0) throw Error("jet order too low for curvature");
  Curvature cv;
  cv.riemann13 = TensorJ(n, {true, false, false, false}, n, ord);
  // dGam[c](a,b,d) = partial_c Gamma^a_{bd}
  std::vector<TensorJ> dGam(n, TensorJ(n, {true, false, false}, n, ord));
  for (int c = 0; c < n; ++c) {
    std::vector<int> idx(3, 0);
    do {
      dGam[c].at(idx) = Gam.at(idx).deriv(c);
    } while (nextIndex(idx, n));
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          // R^a_{bcd} = d_c Gam^a_{db} - d_d Gam^a_{cb}
          //           + Gam^a_{ce} Gam^e_{db} - Gam^a_{de} Gam^e_{cb}
          Jet s = dGam[c].at({a, d, b}) - dGam[d].at({a, c, b});
          for (int e = 0; e < n; ++e)
            s = s + Gam.at({a, c, e}).truncated(ord) * Gam.at({e, d, b}).truncated(ord) -
                Gam.at({a, d, e}).truncated(ord) * Gam.at({e, c, b}).truncated(ord);
          cv.riemann13.at({a, b, c, d}) = s;
        }
  cv.riemann04 = lowerSlot(me, cv.riemann13, 0);
  cv.ricci = TensorJ(n, {false, false}, n, ord);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      Jet s = Jet::constant(n, ord, 0.0);
      for (int a = 0; a < n; ++a) s = s + cv.riemann13.at({a, b, a, d});
      cv.ricci.at2(b, d) = s;
    }
  cv.scalar = traceSym2(me, cv.ricci);
  return cv;
}

TensorJ raiseSlot(const MetricEval& me, const TensorJ& t, int slot) {
  assert(!t.up[slot]);
  int ord = t.order();
  TensorJ out = t;
  out.up[slot] = true;
  std::vector<int> idx(static_cast<size_t>(t.slots()), 0);
  do {
    Jet s = Jet::constant(me.dim, ord, 0.0);
    std::vector<int> jdx = idx;
    for (int m = 0; m < me.dim; ++m) {
      jdx[slot] = m;
      s = s + me.ginv.at2(idx[slot], m).truncated(ord) * t.at(jdx);
    }
    out.at(idx) = s;
  } while (nextIndex(idx, me.dim));
  return out;
}

TensorJ lowerSlot(const MetricEval& me, const TensorJ& t, int slot) {
  assert(t.up[slot]);
  int ord = t.order();
  TensorJ out = t;
  out.up[slot] = false;
  std::vector<int> idx(static_cast<size_t>(t.slots()), 0);
  do {
    Jet s = Jet::constant(me.dim, ord, 0.0);
    std::vector<int> jdx = idx;
    for (int m = 0; m < me.dim; ++m) {
      jdx[slot] = m;
      s = s + me.g.at2(idx[slot], m).truncated(ord) * t.at(jdx);
    }
    out.at(idx) = s;
  } while (nextIndex(idx, me.dim));
  return out;
}

Jet traceSym2(const MetricEval& me, const TensorJ& h) {
  int ord = h.order();
  Jet s = Jet::constant(me.dim, ord, 0.0);
  for (int a = 0; a < me.dim; ++a)
    for (int b = 0; b < me.dim; ++b) s = s + me.ginv.at2(a, b).truncated(ord) * h.at2(a, b);
  return s;
}

Jet traceSym2Con(const MetricEval& me, const TensorJ& hd) {
  int ord = hd.order();
  Jet s = Jet::constant(me.dim, ord, 0.0);
  for (int a = 0; a < me.dim; ++a)
    for (int b = 0; b < me.dim; ++b) s = s + me.g.at2(a, b).truncated(ord) * hd.at2(a, b);
  return s;
}

TensorJ traceReverse(const MetricEval& me, const TensorJ& h) {
  int ord = h.order();
  bool con = h.up[0];
  Jet tr = con ? traceSym2Con(me, h) : traceSym2(me, h);
  TensorJ out = h;
  const TensorJ& gg = con ? me.ginv : me.g;
  for (int a = 0; a < me.dim; ++a)
    for (int b = 0; b < me.dim; ++b)
      out.at2(a, b) = h.at2(a, b) - 0.5 * tr * gg.at2(a, b).truncated(ord);
  return out;
}

TensorJ weyl04(const MetricEval& me, const Curvature& cv) {
  const int n = me.dim;
  if (n < 3) throw DimensionUnsupported("Weyl tensor requires dim >= 3");
  int ord = cv.riemann04.order();
  TensorJ W(n, {false, false, false, false}, n, ord);
  double c1 = 1.0 / (n - 2);
  double c2 = 1.0 / ((n - 1.0) * (n - 2.0));
  auto G = [&](int a, int b) { return me.g.at2(a, b).truncated(ord); };
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu)
      for (int al = 0; al < n; ++al)
        for (int be = 0; be < n; ++be) {
          Jet s = cv.riemann04.at({mu, nu, al, be});
          s = s + c1 * (cv.ricci.at2(mu, be) * G(nu, al) - cv.ricci.at2(mu, al) * G(nu, be) +
                        cv.ricci.at2(nu, al) * G(mu, be) - cv.ricci.at2(nu, be) * G(mu, al));
          s = s + c2 * cv.scalar * (G(mu, al) * G(nu, be) - G(mu, be) * G(nu, al));
          W.at({mu, nu, al, be}) = s;
        }
  return W;
}

TensorJ weyl13(const MetricEval& me, const Curvature& cv) {
  return raiseSlot(me, weyl04(me, cv), 0);
}

TensorJ bach(const MetricEval& me) {
  const int n = me.dim;
  if (n != 4) throw DimensionUnsupported("Bach tensor implemented for dim 4");
  if (me.order < 4) throw Error("Bach tensor needs jet order >= 4");
  Curvature cv = curvature(me);
  TensorJ W = weyl04(me, cv);                 // order-2
  TensorJ dW = covariantDeriv(me, W);         // order-3, slots (c, al, mu, nu, be)
  TensorJ ddW = covariantDeriv(me, dW);       // order-4, slots (d, c, al, mu, nu, be)
  int ord = ddW.order();
  TensorJ B(n, {false, false}, n, ord);
  for (int mu = 0; mu < n; ++mu)
    for (int nu = 0; nu < n; ++nu) {
      Jet s = Jet::constant(n, ord, 0.0);
      for (int d = 0; d < n; ++d)
        for (int al = 0; al < n; ++al)
          for (int c = 0; c < n; ++c)
            for (int be = 0; be < n; ++be) {
              Jet gda = me.ginv.at2(d, al).truncated(ord);
              Jet gcb = me.ginv.at2(c, be).truncated(ord);
              s = s + gda * gcb *
                      (ddW.at({d, c, al, mu, nu, be}) +
                       0.5 * cv.ricci.at2(d, c).truncated(ord) * W.at({al, mu, nu, be}).truncated(ord));
            }
      B.at2(mu, nu) = s;
    }
  return B;
}

Jet kretschmann(const MetricEval& me, const Curvature& cv) {
  TensorJ up = cv.riemann04;
  for (int s = 0; s < 4; ++s) up = raiseSlot(me, up, s);
  int ord = up.order();
  Jet sum = Jet::constant(me.dim, ord, 0.0);
  std::vector<int> idx(4, 0);
  do {
    sum = sum + cv.riemann04.at(idx).truncated(ord) * up.at(idx);
  } while (nextIndex(idx, me.dim));
  return sum;
}

Jet weylNormSq(const MetricEval& me) {
  Curvature cv = curvature(me);
  TensorJ W = weyl04(me, cv);
  TensorJ up = W;
  for (int s = 0; s < 4; ++s) up = raiseSlot(me, up, s);
  int ord = up.order();
  Jet sum = Jet::constant(me.dim, ord, 0.0);
  std::vector<int> idx(4, 0);
  do {
    sum = sum + W.at(idx).truncated(ord) * up.at(idx);
  } while (nextIndex(idx, me.dim));
  return sum;
}

Jet weylActionDensity(const MetricEval& me) {
  Jet w = weylNormSq(me);
  return w * me.sqrtAbsDet.truncated(w.order());
}

TensorJ lieMetric(const MetricEval& me, const TensorJ& X) {
  const int n = me.dim;
  int ord = X.order() - 1;
  if (ord < 0) throw Error("jet order exhausted in Lie derivative");
  TensorJ out(n, {false, false}, n, ord);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet s = Jet::constant(n, ord, 0.0);
      for (int c = 0; c < n; ++c) {
        s = s + X.at1(c).truncated(ord) * me.g.at2(a, b).deriv(c) +
            me.g.at2(c, b).truncated(ord) * X.at1(c).deriv(a) +
            me.g.at2(a, c).truncated(ord) * X.at1(c).deriv(b);
      }
      out.at2(a, b) = s;
    }
  return out;
}

TensorJ lieBracket(const TensorJ& X, const TensorJ& Y) {
  const int n = X.dim;
  int ord = std::min(X.order(), Y.order()) - 1;
  if (ord < 0) throw Error("jet order exhausted in Lie bracket");
  TensorJ out(n, {true}, n, ord);
  for (int a = 0; a < n; ++a) {
    Jet s = Jet::constant(n, ord, 0.0);
    for (int c = 0; c < n; ++c)
      s = s + X.at1(c).truncated(ord) * Y.at1(a).deriv(c) -
          Y.at1(c).truncated(ord) * X.at1(a).deriv(c);
    out.at1(a) = s;
  }
  return out;
}

TensorJ lieTensor(const TensorJ& t, const TensorJ& X) {
  const int n = t.dim;
  int ord = std::min(t.order(), X.order()) - 1;
  if (ord < 0) throw Error("jet order exhausted in Lie derivative");
  TensorJ out(n, t.up, n, ord);
  int rank = t.slots();
  std::vector<int> idx(static_cast<size_t>(rank), 0);
  auto body = [&](const std::vector<int>& ix) {
    Jet s = Jet::constant(n, ord, 0.0);
    for (int c = 0; c < n; ++c) s = s + X.at1(c).truncated(ord) * t.at(ix).deriv(c);
    for (int slot = 0; slot < rank; ++slot) {
      std::vector<int> jdx = ix;
      for (int m = 0; m < n; ++m) {
        jdx[slot] = m;
        Jet tm = t.at(jdx).truncated(ord);
        if (t.up[slot])
          s = s - X.at1(ix[slot]).deriv(m) * tm;
        else
          s = s + X.at1(m).deriv(ix[slot]) * tm;
      }
    }
    out.at(ix) = s;
  };
  if (rank == 0) {
    Jet s = Jet::constant(n, ord, 0.0);
    for (int c = 0; c < n; ++c) s = s + X.at1(c).truncated(ord) * t.c[0].deriv(c);
    out.c[0] = s;
    return out;
  }
  do {
    body(idx);
  } while (nextIndex(idx, n));
  return out;
}

TensorJ divSym2Cov(const MetricEval& me, const TensorJ& h) {
  TensorJ dh = covariantDeriv(me, h);  // (c, a, b)
  int ord = dh.order();
  TensorJ out(me.dim, {false}, me.dim, ord);
  for (int b = 0; b < me.dim; ++b) {
    Jet s = Jet::constant(me.dim, ord, 0.0);
    for (int c = 0; c < me.dim; ++c)
      for (int a = 0; a < me.dim; ++a)
        s = s + me.ginv.at2(c, a).truncated(ord) * dh.at({c, a, b});
    out.at1(b) = s;
  }
  return out;
}

TensorJ divSym2Con(const MetricEval& me, const TensorJ& hd) {
  TensorJ dh = covariantDeriv(me, hd);  // (c, a, b) with a,b up
  int ord = dh.order();
  TensorJ out(me.dim, {true}, me.dim, ord);
  for (int b = 0; b < me.dim; ++b) {
    Jet s = Jet::constant(me.dim, ord, 0.0);
    for (int c = 0; c < me.dim; ++c) s = s + dh.at({c, c, b});
    out.at1(b) = s;
  }
  return out;
}

TensorJ linearizedRicci(const MetricEval& me, const TensorJ& h) {
  const int n = me.dim;
  TensorJ dh = covariantDeriv(me, h);    // (c, a, b)
  TensorJ ddh = covariantDeriv(me, dh);  // (d, c, a, b)
  int ord = ddh.order();

  Jet tr = traceSym2(me, h);
  TensorJ trT(n, {}, n, tr.order());
  trT.c[0] = tr;
  TensorJ ddtr = covariantDeriv(me, covariantDeriv(me, trT));  // (d, c)

  TensorJ out(n, {false, false}, n, ord);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet s = Jet::constant(n, ord, 0.0);
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Jet gcd = me.ginv.at2(c, d).truncated(ord);
          // -box h_{ab} + nabla^c nabla_a h_{bc} + nabla^c nabla_b h_{ac}
          s = s - gcd * ddh.at({c, d, a, b});
          s = s + gcd * ddh.at({d, a, b, c});
          s = s + gcd * ddh.at({d, b, a, c});
        }
      s = s - ddtr.at2(a, b);
      out.at2(a, b) = s * 0.5;
    }
  return out;
}

TensorJ tensorWaveCov(const MetricEval& me, const TensorJ& h) {
  const int n = me.dim;
  Curvature cv = curvature(me);
  TensorJ dh = covariantDeriv(me, h);
  TensorJ ddh = covariantDeriv(me, dh);
  int ord = ddh.order();
  // R_a{}^c{}_b{}^d with slots 1,3 raised
  TensorJ R = raiseSlot(me, raiseSlot(me, cv.riemann04, 1), 3);
  TensorJ out(n, {false, false}, n, ord);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Jet s = Jet::constant(n, ord, 0.0);
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          s = s - me.ginv.at2(c, d).truncated(ord) * ddh.at({c, d, a, b});
          // The endomorphism sign is pinned to this Riemann sign convention
          // (R^a_{bcd} = d_c Gamma^a_{db} - ...): calibrated against QW + WQ.
          s = s - 2.0 * R.at({a, c, b, d}).truncated(ord) * h.at2(c, d).truncated(ord);
        }
      out.at2(a, b) = s;
    }
  return out;
}

TensorJ tensorWaveCon(const MetricEval& me, const TensorJ& hd) {
  TensorJ low = lowerSlot(me, lowerSlot(me, hd, 0), 1);
  TensorJ w = tensorWaveCov(me, low);
  return raiseSlot(me, raiseSlot(me, w, 0), 1);
}

TensorJ waveRank1(const MetricEval& me, const TensorJ& v) {
  TensorJ dd = covariantDeriv(me, covariantDeriv(me, v));  // (d, c, a)
  int ord = dd.order();
  TensorJ out(me.dim, {v.up[0]}, me.dim, ord);
  for (int a = 0; a < me.dim; ++a) {
    Jet s = Jet::constant(me.dim, ord, 0.0);
    for (int c = 0; c < me.dim; ++c)
      for (int d = 0; d < me.dim; ++d)
        s = s - me.ginv.at2(c, d).truncated(ord) * dd.at({c, d, a});
    out.at1(a) = s;
  }
  return out;
}

namespace {

TensorJ ricciValues(const Spacetime& st, const std::vector<double>& x) {
  MetricEval me(st, x, 2);
  Curvature cv = curvature(me);
  TensorJ out(st.dim, {false, false}, 1, 0);
  for (int a = 0; a < st.dim; ++a)
    for (int b = 0; b < st.dim; ++b)
      out.at2(a, b) = Jet::constant(1, 0, cv.ricci.at2(a, b).value());
  return out;
}

TensorJ bachValues(const Spacetime& st, const std::vector<double>& x) {
  MetricEval me(st, x, 4);
  TensorJ B = bach(me);
  TensorJ out(st.dim, {false, false}, 1, 0);
  for (int a = 0; a < st.dim; ++a)
    for (int b = 0; b < st.dim; ++b) out.at2(a, b) = Jet::constant(1, 0, B.at2(a, b).value());
  return out;
}

template <typename F>
TensorJ directionalFD(const Spacetime& st, const std::vector<std::vector<Expr>>& k,
                      const std::vector<double>& x, double step, F&& f) {
  auto diff = [&](double h) {
    Spacetime p = perturbMetric(st, k, h, st.name + "+");
    Spacetime m = perturbMetric(st, k, -h, st.name + "-");
    TensorJ fp = f(p, x), fm = f(m, x);
    return (fp - fm) * (0.5 / h);
  };
  TensorJ d1 = diff(step);
  TensorJ d2 = diff(step * 0.5);
  // one Richardson level for the O(h^2) central difference
  return (d2 * 4.0 - d1) * (1.0 / 3.0);
}

}  // namespace

TensorJ linearizedRicciFD(const Spacetime& st, const std::vector<std::vector<Expr>>& k,
                          const std::vector<double>& x, double step) {
  return directionalFD(st, k, x, step, ricciValues);
}

TensorJ linearizedBachFD(const Spacetime& st, const std::vector<std::vector<Expr>>& k,
                         const std::vector<double>& x, double step) {
  return directionalFD(st, k, x, step, bachValues);
}

std::vector<std::vector<Expr>> lieMetricExprs(const Spacetime& st,
                                              const std::vector<Expr>& X) {
  const int n = st.dim;
  std::vector<std::vector<Expr>> out(n, std::vector<Expr>(n, Expr(0.0)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Expr s(0.0);
      for (int c = 0; c < n; ++c)
        s = s + X[c] * st.metric[a][b].d(c) + st.metric[c][b] * X[c].d(a) +
            st.metric[a][c] * X[c].d(b);
      out[a][b] = s;
    }
  return out;
}

}  // namespace gravfact

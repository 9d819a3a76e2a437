#include "gravfact/trigpoly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gravfact/errors.hpp"

namespace gravfact {

namespace {

constexpr double kFreqTol = 1e-9;

void pushTerm(std::vector<TrigTerm>& out, TrigTerm t) {
  if (t.w < 0.0) {
    t.w = -t.w;
    if (t.isSin) t.c = -t.c;
  }
  if (std::abs(t.w) < 1e-12) {
    t.w = 0.0;
    if (t.isSin) return;  // sin(0) = 0
  }
  if (t.c == 0.0) return;
  out.push_back(t);
}

std::vector<TrigTerm> mergeTerms(std::vector<TrigTerm> terms) {
  std::sort(terms.begin(), terms.end(), [](const TrigTerm& a, const TrigTerm& b) {
    if (a.m != b.m) return a.m < b.m;
    if (std::abs(a.w - b.w) > kFreqTol) return a.w < b.w;
    return a.isSin < b.isSin;
  });
  std::vector<TrigTerm> out;
  for (const TrigTerm& t : terms) {
    if (!out.empty() && out.back().m == t.m && std::abs(out.back().w - t.w) < kFreqTol &&
        out.back().isSin == t.isSin) {
      out.back().c += t.c;
    } else {
      out.push_back(t);
    }
  }
  double scale = 0.0;
  for (const TrigTerm& t : out) scale = std::max(scale, std::abs(t.c));
  std::vector<TrigTerm> clean;
  for (const TrigTerm& t : out)
    if (std::abs(t.c) > 1e-14 * scale) clean.push_back(t);
  return clean;
}

double evalTerms(const std::vector<TrigTerm>& terms, double t, double center) {
  double s = t - center;
  double sum = 0.0;
  for (const TrigTerm& tm : terms) {
    double v = tm.c;
    for (int i = 0; i < tm.m; ++i) v *= s;
    if (tm.w != 0.0) v *= tm.isSin ? std::sin(tm.w * t) : std::cos(tm.w * t);
    sum += v;
  }
  return sum;
}

// Rewrite monomials in (t - a) as monomials in (t - b), delta = b - a, via
// (t - a)^m = ((t - b) + delta)^m. The trig phase is absolute and untouched.
std::vector<TrigTerm> recenterTerms(const std::vector<TrigTerm>& terms, double delta) {
  if (delta == 0.0) return terms;
  std::vector<TrigTerm> out;
  for (const TrigTerm& t : terms) {
    double binom = 1.0, power = 1.0;  // C(m, j) delta^(m-j), j = m .. 0
    for (int j = t.m; j >= 0; --j) {
      pushTerm(out, {j, t.w, t.isSin, t.c * binom * power});
      binom *= j / double(t.m - j + 1);
      power *= delta;
    }
  }
  return mergeTerms(out);
}

std::vector<TrigTerm> mulTermLists(const std::vector<TrigTerm>& a,
                                   const std::vector<TrigTerm>& b) {
  std::vector<TrigTerm> out;
  for (const TrigTerm& x : a)
    for (const TrigTerm& y : b) {
      int m = x.m + y.m;
      double c = x.c * y.c;
      if (x.w == 0.0 && !x.isSin) {
        pushTerm(out, {m, y.w, y.isSin, c});
        continue;
      }
      if (y.w == 0.0 && !y.isSin) {
        pushTerm(out, {m, x.w, x.isSin, c});
        continue;
      }
      double wm = x.w - y.w, wp = x.w + y.w;
      if (!x.isSin && !y.isSin) {  // cos cos
        pushTerm(out, {m, wm, false, 0.5 * c});
        pushTerm(out, {m, wp, false, 0.5 * c});
      } else if (x.isSin && y.isSin) {  // sin sin
        pushTerm(out, {m, wm, false, 0.5 * c});
        pushTerm(out, {m, wp, false, -0.5 * c});
      } else if (x.isSin && !y.isSin) {  // sin cos
        pushTerm(out, {m, wp, true, 0.5 * c});
        pushTerm(out, {m, wm, true, 0.5 * c});
      } else {  // cos sin
        pushTerm(out, {m, wp, true, 0.5 * c});
        pushTerm(out, {m, wm, true, -0.5 * c});
      }
    }
  return mergeTerms(out);
}

std::vector<TrigTerm> derivTerms(const std::vector<TrigTerm>& terms) {
  std::vector<TrigTerm> out;
  for (const TrigTerm& t : terms) {
    if (t.m > 0) pushTerm(out, {t.m - 1, t.w, t.isSin, t.c * t.m});
    if (t.w != 0.0) {
      if (t.isSin)
        pushTerm(out, {t.m, t.w, false, t.c * t.w});
      else
        pushTerm(out, {t.m, t.w, true, -t.c * t.w});
    }
  }
  return mergeTerms(out);
}

// Closed-form antiderivative of a single term in the piece-local variable
// s = t - center (ds = dt, so the recursion is center independent).
void antiderivTerm(const TrigTerm& t, std::vector<TrigTerm>& out) {
  if (t.w == 0.0) {  // c s^m
    pushTerm(out, {t.m + 1, 0.0, false, t.c / (t.m + 1)});
    return;
  }
  if (!t.isSin) {  // int s^m cos = s^m sin/w - (m/w) int s^{m-1} sin
    pushTerm(out, {t.m, t.w, true, t.c / t.w});
    if (t.m > 0) antiderivTerm({t.m - 1, t.w, true, -t.c * t.m / t.w}, out);
  } else {  // int s^m sin = -s^m cos/w + (m/w) int s^{m-1} cos
    pushTerm(out, {t.m, t.w, false, -t.c / t.w});
    if (t.m > 0) antiderivTerm({t.m - 1, t.w, false, t.c * t.m / t.w}, out);
  }
}

std::vector<TrigTerm> antiderivTerms(const std::vector<TrigTerm>& terms) {
  std::vector<TrigTerm> out;
  for (const TrigTerm& t : terms) antiderivTerm(t, out);
  return mergeTerms(out);
}

bool sameTerms(const std::vector<TrigTerm>& a, const std::vector<TrigTerm>& b) {
  if (a.size() != b.size()) return false;
  double scale = 1e-300;
  for (const TrigTerm& t : a) scale = std::max(scale, std::abs(t.c));
  for (const TrigTerm& t : b) scale = std::max(scale, std::abs(t.c));
  for (size_t j = 0; j < a.size(); ++j)
    if (a[j].m != b[j].m || std::abs(a[j].w - b[j].w) > kFreqTol ||
        a[j].isSin != b[j].isSin || std::abs(a[j].c - b[j].c) > 1e-12 * scale)
      return false;
  return true;
}

}  // namespace

double TrigPoly::center(size_t i) const {
  if (breaks_.empty()) return 0.0;
  if (i == 0) return breaks_.front();
  if (i == breaks_.size()) return breaks_.back();
  return 0.5 * (breaks_[i - 1] + breaks_[i]);
}

TrigPoly TrigPoly::fromGlobal(std::vector<TrigTerm> terms) {
  TrigPoly p;
  p.pieces_[0] = mergeTerms(std::move(terms));
  return p;
}

TrigPoly TrigPoly::constant(double c) { return fromGlobal({{0, 0.0, false, c}}); }

TrigPoly TrigPoly::polynomial(const std::vector<double>& coef) {
  std::vector<TrigTerm> terms;
  for (size_t i = 0; i < coef.size(); ++i)
    pushTerm(terms, {static_cast<int>(i), 0.0, false, coef[i]});
  return fromGlobal(std::move(terms));
}

TrigPoly TrigPoly::cosWave(double amp, double w) { return fromGlobal({{0, w, false, amp}}); }
TrigPoly TrigPoly::sinWave(double amp, double w) { return fromGlobal({{0, w, true, amp}}); }

namespace {
// Coefficients of p(a + b s) given coefficients of p(u).
std::vector<double> composeLinear(const std::vector<double>& p, double a, double b) {
  std::vector<double> out(p.size(), 0.0);
  // Horner in u = a + b s with polynomial coefficient vectors.
  for (size_t i = p.size(); i-- > 0;) {
    // out = out * (a + b s) + p[i]
    std::vector<double> next(out.size(), 0.0);
    for (size_t j = 0; j < out.size(); ++j) {
      next[j] += out[j] * a;
      if (j + 1 < out.size()) next[j + 1] += out[j] * b;
    }
    next[0] += p[i];
    out = next;
  }
  return out;
}

std::vector<TrigTerm> termsFromCoeffs(const std::vector<double>& coef) {
  std::vector<TrigTerm> terms;
  for (size_t i = 0; i < coef.size(); ++i)
    pushTerm(terms, {static_cast<int>(i), 0.0, false, coef[i]});
  return mergeTerms(std::move(terms));
}
}  // namespace

TrigPoly TrigPoly::bump(double t0, double t1, int power) {
  // (1 - u^2)^power with u = 2 s / (t1 - t0), s relative to the midpoint,
  // which is exactly the interior piece's center.
  std::vector<double> q = {1.0};
  for (int i = 0; i < power; ++i) {
    std::vector<double> next(q.size() + 2, 0.0);
    for (size_t j = 0; j < q.size(); ++j) {
      next[j] += q[j];
      next[j + 2] -= q[j];
    }
    q = next;
  }
  TrigPoly p;
  p.breaks_ = {t0, t1};
  p.pieces_.assign(3, {});
  p.pieces_[1] = termsFromCoeffs(composeLinear(q, 0.0, 2.0 / (t1 - t0)));
  return p;
}

TrigPoly TrigPoly::cutoff(double t0, double t1) {
  // 1 - smoothstep5(u), u = (t - t0)/(t1 - t0) = 1/2 + s/(t1 - t0) with s
  // relative to the midpoint.
  std::vector<double> q = {1.0, 0.0, 0.0, -10.0, 15.0, -6.0};  // 1 - (10u^3-15u^4+6u^5)
  TrigPoly p;
  p.breaks_ = {t0, t1};
  p.pieces_.assign(3, {});
  p.pieces_[0] = {{0, 0.0, false, 1.0}};
  p.pieces_[1] = termsFromCoeffs(composeLinear(q, 0.5, 1.0 / (t1 - t0)));
  return p;
}

double TrigPoly::eval(double t) const {
  size_t i = std::upper_bound(breaks_.begin(), breaks_.end(), t) - breaks_.begin();
  return evalTerms(pieces_[i], t, center(i));
}

TrigPoly TrigPoly::refinedTo(const std::vector<double>& newBreaks) const {
  TrigPoly out;
  out.breaks_ = newBreaks;
  out.pieces_.resize(newBreaks.size() + 1);
  for (size_t i = 0; i <= newBreaks.size(); ++i) {
    // Representative point of the new piece.
    double lo = (i == 0) ? -std::numeric_limits<double>::infinity() : newBreaks[i - 1];
    double hi = (i == newBreaks.size()) ? std::numeric_limits<double>::infinity()
                                        : newBreaks[i];
    double rep;
    if (std::isinf(lo) && std::isinf(hi))
      rep = 0.0;
    else if (std::isinf(lo))
      rep = hi - 1.0;
    else if (std::isinf(hi))
      rep = lo + 1.0;
    else
      rep = 0.5 * (lo + hi);
    size_t j = std::upper_bound(breaks_.begin(), breaks_.end(), rep) - breaks_.begin();
    out.pieces_[i] = recenterTerms(pieces_[j], out.center(i) - center(j));
  }
  return out;
}

namespace {
std::vector<double> unionBreaks(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> u;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  u.erase(std::unique(u.begin(), u.end(),
                      [](double x, double y) { return std::abs(x - y) < 1e-13; }),
          u.end());
  return u;
}
}  // namespace

TrigPoly mergeBinary(const TrigPoly& a, const TrigPoly& b, double sb) {
  std::vector<double> u = unionBreaks(a.breaks_, b.breaks_);
  TrigPoly ra = a.refinedTo(u), rb = b.refinedTo(u);
  TrigPoly out;
  out.breaks_ = u;
  out.pieces_.resize(u.size() + 1);
  for (size_t i = 0; i <= u.size(); ++i) {
    std::vector<TrigTerm> terms = ra.pieces_[i];
    for (TrigTerm t : rb.pieces_[i]) {
      t.c *= sb;
      terms.push_back(t);
    }
    out.pieces_[i] = mergeTerms(std::move(terms));
  }
  out.simplify();
  return out;
}

TrigPoly TrigPoly::operator+(const TrigPoly& o) const { return mergeBinary(*this, o, 1.0); }
TrigPoly TrigPoly::operator-(const TrigPoly& o) const { return mergeBinary(*this, o, -1.0); }

TrigPoly TrigPoly::operator*(const TrigPoly& o) const {
  std::vector<double> u = unionBreaks(breaks_, o.breaks_);
  TrigPoly ra = refinedTo(u), rb = o.refinedTo(u);
  TrigPoly out;
  out.breaks_ = u;
  out.pieces_.resize(u.size() + 1);
  for (size_t i = 0; i <= u.size(); ++i)
    out.pieces_[i] = mulTermLists(ra.pieces_[i], rb.pieces_[i]);
  out.simplify();
  return out;
}

TrigPoly TrigPoly::operator*(double s) const {
  TrigPoly out = *this;
  for (auto& piece : out.pieces_)
    for (auto& t : piece) t.c *= s;
  return out;
}

TrigPoly TrigPoly::deriv() const {
  TrigPoly out;
  out.breaks_ = breaks_;
  out.pieces_.clear();
  for (const auto& piece : pieces_) out.pieces_.push_back(derivTerms(piece));
  return out;
}

TrigPoly TrigPoly::antideriv(double t0) const {
  TrigPoly out;
  out.breaks_ = breaks_;
  out.pieces_.resize(pieces_.size());
  std::vector<std::vector<TrigTerm>> raw(pieces_.size());
  for (size_t i = 0; i < pieces_.size(); ++i) raw[i] = antiderivTerms(pieces_[i]);
  // Piece containing t0 gets constant -A(t0); neighbours are fixed by
  // continuity at the breakpoints.
  size_t i0 = std::upper_bound(breaks_.begin(), breaks_.end(), t0) - breaks_.begin();
  std::vector<double> C(pieces_.size(), 0.0);
  C[i0] = -evalTerms(raw[i0], t0, center(i0));
  for (size_t i = i0; i + 1 < pieces_.size(); ++i) {
    double b = breaks_[i];
    C[i + 1] = evalTerms(raw[i], b, center(i)) + C[i] - evalTerms(raw[i + 1], b, center(i + 1));
  }
  for (size_t i = i0; i-- > 0;) {
    double b = breaks_[i];
    C[i] = evalTerms(raw[i + 1], b, center(i + 1)) + C[i + 1] - evalTerms(raw[i], b, center(i));
  }
  for (size_t i = 0; i < pieces_.size(); ++i) {
    std::vector<TrigTerm> terms = raw[i];
    pushTerm(terms, {0, 0.0, false, C[i]});
    out.pieces_[i] = mergeTerms(std::move(terms));
  }
  return out;
}

double TrigPoly::integral(double a, double b) const { return antideriv(a).eval(b); }

TrigPoly TrigPoly::window(double lo, double hi) const {
  std::vector<double> extra;
  if (!std::isinf(lo)) extra.push_back(lo);
  if (!std::isinf(hi)) extra.push_back(hi);
  TrigPoly r = refinedTo(unionBreaks(breaks_, extra));
  for (size_t i = 0; i <= r.breaks_.size(); ++i) {
    double plo = (i == 0) ? -std::numeric_limits<double>::infinity() : r.breaks_[i - 1];
    double phi = (i == r.breaks_.size()) ? std::numeric_limits<double>::infinity()
                                         : r.breaks_[i];
    if (plo < lo - 1e-13 || phi > hi + 1e-13) r.pieces_[i].clear();
  }
  r.simplify();
  return r;
}

TrigPoly TrigPoly::shifted(double dt) const {
  TrigPoly out;
  out.breaks_ = breaks_;
  for (double& b : out.breaks_) b += dt;
  out.pieces_.resize(pieces_.size());
  // Centers translate with the breaks, so the monomial part is untouched;
  // only the absolute trig phase rotates: trig(w (t - dt)) by angle addition.
  for (size_t i = 0; i < pieces_.size(); ++i) {
    std::vector<TrigTerm> terms;
    for (const TrigTerm& t : pieces_[i]) {
      if (t.w == 0.0) {
        pushTerm(terms, t);
        continue;
      }
      double cw = std::cos(t.w * dt), sw = std::sin(t.w * dt);
      if (!t.isSin) {
        pushTerm(terms, {t.m, t.w, false, t.c * cw});
        pushTerm(terms, {t.m, t.w, true, t.c * sw});
      } else {
        pushTerm(terms, {t.m, t.w, true, t.c * cw});
        pushTerm(terms, {t.m, t.w, false, -t.c * sw});
      }
    }
    out.pieces_[i] = mergeTerms(std::move(terms));
  }
  return out;
}

bool TrigPoly::isZero(double tol) const {
  for (const auto& piece : pieces_)
    for (const auto& t : piece)
      if (std::abs(t.c) > tol) return false;
  return true;
}

bool TrigPoly::supportInterval(double& lo, double& hi) const {
  if (!pieces_.front().empty() || !pieces_.back().empty()) return false;
  size_t first = pieces_.size(), last = 0;
  for (size_t i = 0; i < pieces_.size(); ++i)
    if (!pieces_[i].empty()) {
      first = std::min(first, i);
      last = std::max(last, i);
    }
  if (first == pieces_.size()) return false;  // identically zero
  lo = breaks_[first - 1];
  hi = breaks_[last];
  return true;
}

double TrigPoly::maxAbsCoeff() const {
  double m = 0.0;
  for (const auto& piece : pieces_)
    for (const auto& t : piece) m = std::max(m, std::abs(t.c));
  return m;
}

double TrigPoly::maxAbsOn(double a, double b, int n) const {
  double m = 0.0;
  for (int i = 0; i <= n; ++i) m = std::max(m, std::abs(eval(a + (b - a) * i / n)));
  return m;
}

void TrigPoly::simplify() {
  // Drop breakpoints whose two sides carry the same function. Centers are
  // derived from the break list, so track each piece's current center and
  // recenter everything once the final break list is known.
  std::vector<double> cs(pieces_.size());
  for (size_t i = 0; i < pieces_.size(); ++i) cs[i] = center(i);
  for (size_t i = 0; i < breaks_.size();) {
    std::vector<TrigTerm> right = recenterTerms(pieces_[i + 1], cs[i] - cs[i + 1]);
    if (sameTerms(pieces_[i], right)) {
      breaks_.erase(breaks_.begin() + i);
      pieces_.erase(pieces_.begin() + i + 1);
      cs.erase(cs.begin() + i + 1);
    } else {
      ++i;
    }
  }
  for (size_t i = 0; i < pieces_.size(); ++i)
    pieces_[i] = recenterTerms(pieces_[i], center(i) - cs[i]);
}

namespace {
TrigPoly duhamelFrom(double k, const TrigPoly& f, double base) {
  if (k < 0.0) k = -k;
  if (k < 1e-12) {
    TrigPoly F1 = f.antideriv(base);
    TrigPoly F2 = (f * TrigPoly::polynomial({0.0, 1.0})).antideriv(base);
    return TrigPoly::polynomial({0.0, 1.0}) * F1 - F2;
  }
  TrigPoly A = (f * TrigPoly::cosWave(1.0, k)).antideriv(base);
  TrigPoly B = (f * TrigPoly::sinWave(1.0, k)).antideriv(base);
  return (TrigPoly::sinWave(1.0 / k, k) * A - TrigPoly::cosWave(1.0 / k, k) * B);
}
}  // namespace

TrigPoly TrigPoly::duhamelRetarded(double k, const TrigPoly& f, double tLeft) {
  return duhamelFrom(k, f, tLeft);
}

TrigPoly TrigPoly::duhamelAdvanced(double k, const TrigPoly& f, double tRight) {
  return duhamelFrom(k, f, tRight);
}

}  // namespace gravfact

#pragma once

// Closed piecewise algebra of functions sum_j c_j t^m_j {cos,sin}(w_j t) on
// intervals between breakpoints. The class is closed under +, *, d/dt and
// antidifferentiation, which makes the per-mode Duhamel solutions of
// u'' + k^2 u = f exact (including the resonant k = 0 case).

#include <vector>

namespace gravfact {

struct TrigTerm {
  int m = 0;          // power of (t - center of the owning piece)
  double w = 0.0;     // frequency >= 0; the trig phase is in absolute t
  bool isSin = false; // false: cos(w t) (constant 1 when w = 0)
  double c = 0.0;
};

class TrigPoly {
 public:
  TrigPoly() : pieces_(1) {}  // identically zero

  static TrigPoly constant(double c);
  static TrigPoly polynomial(const std::vector<double>& coef);  // sum coef[i] t^i
  static TrigPoly cosWave(double amp, double w);
  static TrigPoly sinWave(double amp, double w);
  // (1 - u^2)^power on (t0, t1) with u the normalized coordinate, 0 outside.
  static TrigPoly bump(double t0, double t1, int power = 4);
  // 1 for t <= t0, 0 for t >= t1, quintic smoothstep transition (C^2).
  static TrigPoly cutoff(double t0, double t1);

  double eval(double t) const;
  TrigPoly operator+(const TrigPoly& o) const;
  TrigPoly operator-(const TrigPoly& o) const;
  TrigPoly operator*(const TrigPoly& o) const;
  TrigPoly operator*(double s) const;
  TrigPoly deriv() const;
  // F(t) = int_{t0}^t f(s) ds, continuous across breakpoints.
  TrigPoly antideriv(double t0) const;
  double integral(double a, double b) const;

  // Support restriction: multiply by the indicator of (lo, hi).
  TrigPoly window(double lo, double hi) const;
  // p(t - dt): the graph translated right by dt.
  TrigPoly shifted(double dt) const;

  bool isZero(double tol = 0.0) const;
  // Smallest closed interval outside which f vanishes identically; false if
  // the support is empty or unbounded.
  bool supportInterval(double& lo, double& hi) const;
  double maxAbsCoeff() const;
  // Largest |f| on [a, b] estimated on n uniform samples.
  double maxAbsOn(double a, double b, int n = 400) const;

  // Retarded/advanced solutions of u'' + k^2 u = f with f supported inside
  // (tLeft, tRight): u vanishes before (after) the support of f.
  static TrigPoly duhamelRetarded(double k, const TrigPoly& f, double tLeft);
  static TrigPoly duhamelAdvanced(double k, const TrigPoly& f, double tRight);

  const std::vector<double>& breakpoints() const { return breaks_; }

 private:
  // pieces_[i] lives on (breaks_[i-1], breaks_[i]); pieces_.size() ==
  // breaks_.size() + 1, covering (-inf, b0), ..., (b_last, inf). Monomials
  // are stored relative to a per-piece center derived from the breaks (the
  // midpoint for interior pieces, the single adjacent break for the edge
  // pieces, 0 for a break-free polynomial), which keeps products of narrow
  // bumps far from the origin well conditioned.
  std::vector<double> breaks_;
  std::vector<std::vector<TrigTerm>> pieces_;

  double center(size_t i) const;
  static TrigPoly fromGlobal(std::vector<TrigTerm> terms);
  TrigPoly refinedTo(const std::vector<double>& newBreaks) const;
  void simplify();
  friend TrigPoly mergeBinary(const TrigPoly& a, const TrigPoly& b, double sb);
};

inline TrigPoly operator*(double s, const TrigPoly& p) { return p * s; }

}  // namespace gravfact

#pragma once

// Spacetime charts: a coordinate box, a symmetric metric given by analytic
// expressions, a future-pointing timelike vector field, and a set of claimed
// curvature properties that are spot-checked at construction time.

#include <string>
#include <vector>

#include "gravfact/expr.hpp"

namespace gravfact {

enum class ChartKind {
  MinkowskiBox,         // inertial coordinates on a box
  UltrastaticTorusSlab, // [a,b] x (R/L_1 Z) x ... , metric -dt^2 + sum dx_i^2
  SphericalStatic,      // (t, r, theta, phi), static spherically symmetric
};

struct Claims {
  bool ricciFlat = false;
  bool bachFlat = false;
  bool conformallyFlat = false;
  bool einstein = false;  // Ric = lambda g for some constant lambda
};

class Spacetime {
 public:
  int dim = 4;
  ChartKind kind = ChartKind::MinkowskiBox;
  std::string name;
  // Coordinate box; for torus slabs the spatial entries are one fundamental
  // domain [0, L_i).
  std::vector<std::pair<double, double>> bounds;
  // Periodic circumference per coordinate; 0 = non-periodic.
  std::vector<double> period;
  std::vector<std::vector<Expr>> metric;  // dim x dim, symmetric
  std::vector<Expr> timeOrientation;      // future-pointing timelike vector
  Claims claims;

  bool contains(const std::vector<double>& x) const {
    for (int i = 0; i < dim; ++i) {
      if (period[i] > 0.0) continue;
      if (x[i] < bounds[i].first || x[i] > bounds[i].second) return false;
    }
    return true;
  }

  // Deterministic interior sample points for validation and testing.
  std::vector<std::vector<double>> samplePoints(int count, unsigned seed) const;
};

// Factories validate metric symmetry, Lorentzian signature, orientation, and
// any curvature claims at sample points; they throw on violation.
Spacetime makeMinkowski(int dim);
Spacetime makeTorusSlab(int dim, double t0, double t1, double L);
Spacetime makeSchwarzschild(double mass);
// Static spherically symmetric metric -V dt^2 + dr^2/V + r^2 dOmega^2.
Spacetime makeSphericalStatic(const Expr& V, double rmin, double rmax,
                              const std::string& name, Claims claims);
Spacetime makeMannheim(double b, double c);
Spacetime makeMannheimExact(double beta, double gamma);
// Conformal rescaling g -> exp(2f) g; curvature claims are dropped except
// conformal flatness, which is preserved.
Spacetime conformalRescale(const Spacetime& st, const Expr& f);
// g -> g + eps * k for a symmetric expression matrix k; claims are dropped.
Spacetime perturbMetric(const Spacetime& st, const std::vector<std::vector<Expr>>& k,
                        double eps, const std::string& name);

// Claim spot-checks (implemented with the curvature pipeline).
void validateSpacetime(const Spacetime& st, int samples = 6, unsigned seed = 7u);

}  // namespace gravfact

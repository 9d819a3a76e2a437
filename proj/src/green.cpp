#include "gravfact/green.hpp"

#include <cmath>
#include <numbers>

#include "gravfact/complex.hpp"
#include "gravfact/errors.hpp"

namespace gravfact {

namespace {

// Flat-slab metric sign eta_aa (mostly-plus signature).
double sgn(int a) { return a == 0 ? -1.0 : 1.0; }

void requireFlatSlab(const Spacetime& st) {
  if (st.kind != ChartKind::UltrastaticTorusSlab)
    throw UnsupportedBackground("mode sections require an ultrastatic torus slab");
}

double waveNumberSq(const Spacetime& st, const SpatialMode& m) {
  double k2 = 0.0;
  for (size_t i = 0; i < m.n.size(); ++i) {
    double k = 2.0 * std::numbers::pi * m.n[i] / st.period[i + 1];
    k2 += k * k;
  }
  return k2;
}

int componentCount(int dim, int degree) {
  int rank = static_cast<int>(degreeValence(degree).size());
  int c = 1;
  for (int r = 0; r < rank; ++r) c *= dim;
  return c;
}

std::vector<ModeFn> zeroComp(int count) { return std::vector<ModeFn>(count); }

void accumulateComp(std::map<int, std::vector<ModeFn>>& dest, int degree,
                    const std::vector<ModeFn>& src) {
  auto it = dest.find(degree);
  if (it == dest.end()) {
    dest.emplace(degree, src);
    return;
  }
  for (size_t i = 0; i < src.size(); ++i) it->second[i] = it->second[i] + src[i];
}

ModeFn derivAxis(const Spacetime& st, const ModeFn& f, int axis) {
  return axis == 0 ? modeDt(f) : modeDx(st, f, axis);
}

// Trace-reverse against eta: I(T)_ab = T_ab - (1/2) eta_ab tr T.
std::vector<ModeFn> traceReverseFlat(int dim, const std::vector<ModeFn>& T) {
  ModeFn tr;
  for (int c = 0; c < dim; ++c) tr = tr + T[c * dim + c] * sgn(c);
  std::vector<ModeFn> out = T;
  for (int a = 0; a < dim; ++a) out[a * dim + a] = out[a * dim + a] - tr * (0.5 * sgn(a));
  return out;
}

GradedModeSection sectionAdd(const GradedModeSection& a, const GradedModeSection& b) {
  GradedModeSection out = a;
  for (const auto& [deg, comp] : b.comp) accumulateComp(out.comp, deg, comp);
  return out;
}

}  // namespace

double ModeFn::eval(const Spacetime& st, const std::vector<double>& x) const {
  double total = 0.0;
  for (const auto& [m, a] : terms) {
    double v = a.eval(x[0]);
    for (size_t i = 0; i < m.n.size(); ++i) {
      double k = 2.0 * std::numbers::pi * m.n[i] / st.period[i + 1];
      v *= m.isSin[i] ? std::sin(k * x[i + 1]) : std::cos(k * x[i + 1]);
    }
    total += v;
  }
  return total;
}

void ModeFn::add(const SpatialMode& mode, const TrigPoly& a) {
  for (size_t i = 0; i < mode.n.size(); ++i) {
    if (mode.n[i] < 0) throw Error("spatial mode indices must be nonnegative");
    if (mode.n[i] == 0 && mode.isSin[i]) return;  // sin(0 x) = 0
  }
  auto it = terms.find(mode);
  if (it == terms.end())
    terms.emplace(mode, a);
  else
    it->second = it->second + a;
}

ModeFn ModeFn::operator+(const ModeFn& o) const {
  ModeFn out = *this;
  for (const auto& [m, a] : o.terms) out.add(m, a);
  return out;
}

ModeFn ModeFn::operator-(const ModeFn& o) const { return *this + o * -1.0; }

ModeFn ModeFn::operator*(double s) const {
  ModeFn out;
  for (const auto& [m, a] : terms) out.terms.emplace(m, a * s);
  return out;
}

ModeFn ModeFn::timesTime(const TrigPoly& chi) const {
  ModeFn out;
  for (const auto& [m, a] : terms) out.terms.emplace(m, a * chi);
  return out;
}

double ModeFn::maxAbsCoeff() const {
  double m = 0.0;
  for (const auto& [mode, a] : terms) m = std::max(m, a.maxAbsCoeff());
  return m;
}

int ModeFn::maxModeIndex() const {
  int m = 0;
  for (const auto& [mode, a] : terms)
    for (int n : mode.n) m = std::max(m, n);
  return m;
}

ModeFn modeDt(const ModeFn& f) {
  ModeFn out;
  for (const auto& [m, a] : f.terms) out.add(m, a.deriv());
  return out;
}

ModeFn modeDx(const Spacetime& st, const ModeFn& f, int axis) {
  ModeFn out;
  int slot = axis - 1;
  for (const auto& [m, a] : f.terms) {
    if (m.n[slot] == 0) continue;
    double k = 2.0 * std::numbers::pi * m.n[slot] / st.period[axis];
    SpatialMode flipped = m;
    flipped.isSin[slot] = !m.isSin[slot];
    // d/dx cos(kx) = -k sin(kx);  d/dx sin(kx) = k cos(kx)
    out.add(flipped, a * (m.isSin[slot] ? k : -k));
  }
  return out;
}

ModeFn modeWave(const Spacetime& st, const ModeFn& f) {
  ModeFn out;
  for (const auto& [m, a] : f.terms) out.add(m, a.deriv().deriv() + a * waveNumberSq(st, m));
  return out;
}

GradedModeSection applyQModes(const Spacetime& st, const GradedModeSection& s) {
  requireFlatSlab(st);
  int dim = st.dim;
  GradedModeSection out;
  for (const auto& [deg, comp] : s.comp) {
    switch (deg) {
      case -1: {
        std::vector<ModeFn> lie = zeroComp(dim * dim);
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b)
            lie[a * dim + b] = derivAxis(st, comp[b] * sgn(b), a) +
                               derivAxis(st, comp[a] * sgn(a), b);
        accumulateComp(out.comp, 0, lie);
        break;
      }
      case 0: {
        // linearized Ricci, trace-reversed and raised, times 2
        ModeFn tr;
        for (int c = 0; c < dim; ++c) tr = tr + comp[c * dim + c] * sgn(c);
        std::vector<ModeFn> dric = zeroComp(dim * dim);
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b) {
            ModeFn v = modeWave(st, comp[a * dim + b]);  // -box h_ab
            v = v - derivAxis(st, derivAxis(st, tr, b), a);
            for (int c = 0; c < dim; ++c) {
              v = v + derivAxis(st, derivAxis(st, comp[b * dim + c], a), c) * sgn(c);
              v = v + derivAxis(st, derivAxis(st, comp[a * dim + c], b), c) * sgn(c);
            }
            dric[a * dim + b] = v * 0.5;
          }
        std::vector<ModeFn> rev = traceReverseFlat(dim, dric);
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b) rev[a * dim + b] = rev[a * dim + b] * (2.0 * sgn(a) * sgn(b));
        accumulateComp(out.comp, 1, rev);
        break;
      }
      case 1: {
        std::vector<ModeFn> div = zeroComp(dim);
        for (int b = 0; b < dim; ++b) {
          ModeFn v;
          for (int a = 0; a < dim; ++a) v = v + derivAxis(st, comp[a * dim + b], a);
          div[b] = v * (-2.0 * sgn(b));
        }
        accumulateComp(out.comp, 2, div);
        break;
      }
      case 2:
        break;  // top degree
      default:
        throw Error("degree outside supported range");
    }
  }
  return out;
}

GradedModeSection applyWModes(const Spacetime& st, const GradedModeSection& s) {
  requireFlatSlab(st);
  int dim = st.dim;
  GradedModeSection out;
  for (const auto& [deg, comp] : s.comp) {
    switch (deg) {
      case -1:
        break;  // bottom degree
      case 0: {
        std::vector<ModeFn> rev = traceReverseFlat(dim, comp);
        std::vector<ModeFn> div = zeroComp(dim);
        for (int b = 0; b < dim; ++b) {
          ModeFn v;
          for (int a = 0; a < dim; ++a) v = v + derivAxis(st, rev[a * dim + b], a) * sgn(a);
          div[b] = v * (-1.0 * sgn(b));
        }
        accumulateComp(out.comp, -1, div);
        break;
      }
      case 1: {
        std::vector<ModeFn> low = zeroComp(dim * dim);
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b) low[a * dim + b] = comp[a * dim + b] * (sgn(a) * sgn(b));
        accumulateComp(out.comp, 0, traceReverseFlat(dim, low));
        break;
      }
      case 2: {
        std::vector<ModeFn> lie = zeroComp(dim * dim);
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b)
            lie[a * dim + b] = derivAxis(st, comp[b], a) + derivAxis(st, comp[a], b);
        std::vector<ModeFn> rev = traceReverseFlat(dim, lie);
        for (int a = 0; a < dim; ++a)
          for (int b = 0; b < dim; ++b) rev[a * dim + b] = rev[a * dim + b] * (0.5 * sgn(a) * sgn(b));
        accumulateComp(out.comp, 1, rev);
        break;
      }
      default:
        throw Error("degree outside supported range");
    }
  }
  return out;
}

GradedModeSection applyPModes(const Spacetime& st, const GradedModeSection& s) {
  return sectionAdd(applyQModes(st, applyWModes(st, s)),
                    applyWModes(st, applyQModes(st, s)));
}

GradedModeSection applyWaveModes(const Spacetime& st, const GradedModeSection& s) {
  requireFlatSlab(st);
  GradedModeSection out;
  for (const auto& [deg, comp] : s.comp) {
    std::vector<ModeFn> w = zeroComp(static_cast<int>(comp.size()));
    for (size_t i = 0; i < comp.size(); ++i) w[i] = modeWave(st, comp[i]);
    out.comp.emplace(deg, std::move(w));
  }
  return out;
}

double pairingModes(const Spacetime& st, const GradedModeSection& a,
                    const GradedModeSection& b) {
  requireFlatSlab(st);
  double t0 = st.bounds[0].first, t1 = st.bounds[0].second;
  double total = 0.0;
  for (const auto& [p, compA] : a.comp) {
    auto it = b.comp.find(1 - p);
    if (it == b.comp.end()) continue;
    const std::vector<ModeFn>& compB = it->second;
    TrigPoly timeIntegrand;
    for (size_t i = 0; i < compA.size(); ++i) {
      for (const auto& [m, fa] : compA[i].terms) {
        auto jt = compB[i].terms.find(m);
        if (jt == compB[i].terms.end()) continue;
        double norm = 1.0;  // distinct modes are L^2-orthogonal on the torus
        for (size_t s = 0; s < m.n.size(); ++s)
          norm *= (m.n[s] == 0) ? st.period[s + 1] : 0.5 * st.period[s + 1];
        timeIntegrand = timeIntegrand + fa * jt->second * norm;
      }
    }
    total += pairingSign(p) * timeIntegrand.integral(t0, t1);
  }
  return total;
}

GradedModeSection greenApply(const GreenOperatorHandle& h, const GradedModeSection& psi) {
  requireFlatSlab(h.st);
  double t0 = h.st.bounds[0].first, t1 = h.st.bounds[0].second;
  GradedModeSection out;
  for (const auto& [deg, comp] : psi.comp) {
    std::vector<ModeFn> sol = zeroComp(static_cast<int>(comp.size()));
    for (size_t i = 0; i < comp.size(); ++i) {
      for (const auto& [m, a] : comp[i].terms) {
        if (a.maxAbsCoeff() < 1e-300) continue;
        for (int n : m.n)
          if (n > h.modeCutoff && a.maxAbsCoeff() > 1e-12)
            throw ModeCutoffTooLow("source has a mode above the spectral cutoff");
        double lo, hi;
        if (!a.supportInterval(lo, hi)) {
          if (a.isZero(0.0)) continue;
          throw SupportTooCloseToBoundary("source is not compactly supported in time");
        }
        if (lo < t0 + h.boundaryMargin || hi > t1 - h.boundaryMargin)
          throw SupportTooCloseToBoundary();
        double k = std::sqrt(waveNumberSq(h.st, m));
        sol[i].add(m, h.retarded ? TrigPoly::duhamelRetarded(k, a, t0)
                                 : TrigPoly::duhamelAdvanced(k, a, t1));
      }
    }
    out.comp.emplace(deg, std::move(sol));
  }
  return out;
}

Propagated propagators(const GreenOperatorHandle& retardedHandle,
                       const GreenOperatorHandle& advancedHandle,
                       const GradedModeSection& psi) {
  GradedModeSection gp = greenApply(retardedHandle, psi);
  GradedModeSection gm = greenApply(advancedHandle, psi);
  Propagated out;
  out.G = sectionSub(gp, gm);
  out.GD = sectionAdd(gp, gm);
  for (auto& [deg, comp] : out.GD.comp)
    for (ModeFn& f : comp) f = f * 0.5;
  return out;
}

GradedModeSection greenHomotopy(const GreenOperatorHandle& h, const GradedModeSection& s) {
  return applyWModes(h.st, greenApply(h, s));
}

TemporalCutoff makeCutoff(double tMinus, double tPlus) {
  return TemporalCutoff{tMinus, tPlus, TrigPoly::cutoff(tMinus, tPlus)};
}

TimeSliceResult timeSliceReduce(const GreenOperatorHandle& base, const GradedModeSection& psi,
                                const TemporalCutoff& cutoff,
                                std::pair<double, double> imageSlab) {
  if (cutoff.tMinus < imageSlab.first || cutoff.tPlus > imageSlab.second)
    throw CutoffOutsideImage();
  GreenOperatorHandle hp = base, hm = base;
  hp.retarded = true;
  hm.retarded = false;
  GradedModeSection gp = greenApply(hp, psi);
  GradedModeSection gm = greenApply(hm, psi);
  TrigPoly one = TrigPoly::constant(1.0);
  TimeSliceResult out;
  for (const auto& [deg, comp] : gp.comp) {
    std::vector<ModeFn> cert = zeroComp(static_cast<int>(comp.size()));
    const std::vector<ModeFn>& compM = gm.comp.at(deg);
    for (size_t i = 0; i < comp.size(); ++i)
      cert[i] = comp[i].timesTime(cutoff.chi) + compM[i].timesTime(one - cutoff.chi);
    out.certificate.comp.emplace(deg, std::move(cert));
  }
  out.psiM = sectionSub(psi, applyWaveModes(base.st, out.certificate));
  return out;
}

GradedModeSection singleModeSection(const Spacetime& st, int degree, int index, int n,
                                    bool isSin, const TrigPoly& a) {
  requireFlatSlab(st);
  GradedModeSection out;
  std::vector<ModeFn> comp = zeroComp(componentCount(st.dim, degree));
  SpatialMode m;
  m.n.assign(st.dim - 1, 0);
  m.isSin.assign(st.dim - 1, false);
  m.n[0] = n;
  m.isSin[0] = isSin;
  comp[index].add(m, a);
  out.comp.emplace(degree, std::move(comp));
  return out;
}

GradedModeSection randomModeSection(std::mt19937_64& rng, const Spacetime& st, int nMax,
                                    double t0, double t1,
                                    const std::vector<int>& degrees) {
  requireFlatSlab(st);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> N(0, nMax);
  std::uniform_int_distribution<int> B(0, 1);
  GradedModeSection out;
  for (int deg : degrees) {
    std::vector<ModeFn> comp = zeroComp(componentCount(st.dim, deg));
    for (ModeFn& f : comp) {
      int nterms = 1 + B(rng);
      for (int t = 0; t < nterms; ++t) {
        SpatialMode m;
        for (int i = 0; i < st.dim - 1; ++i) {
          int n = N(rng);
          m.n.push_back(n);
          m.isSin.push_back(n > 0 && B(rng) == 1);
        }
        double a = t0 + 0.1 * (t1 - t0) * (U(rng) + 1.0);  // sub-interval start
        double b = t1 - 0.1 * (t1 - t0) * (U(rng) + 1.0);
        f.add(m, TrigPoly::bump(a, b, 4) * U(rng));
      }
    }
    if (degreeValence(deg).size() == 2) {
      for (int a = 0; a < st.dim; ++a)
        for (int b = a + 1; b < st.dim; ++b)
          comp[a * st.dim + b] = comp[b * st.dim + a];
    }
    out.comp.emplace(deg, std::move(comp));
  }
  return out;
}

double sectionMaxAbsCoeff(const GradedModeSection& s) {
  double m = 0.0;
  for (const auto& [deg, comp] : s.comp)
    for (const ModeFn& f : comp) m = std::max(m, f.maxAbsCoeff());
  return m;
}

GradedModeSection sectionSub(const GradedModeSection& a, const GradedModeSection& b) {
  GradedModeSection out = a;
  for (const auto& [deg, comp] : b.comp) {
    std::vector<ModeFn> neg = comp;
    for (ModeFn& f : neg) f = f * -1.0;
    accumulateComp(out.comp, deg, neg);
  }
  return out;
}

}  // namespace gravfact

#pragma once

#include <stdexcept>
#include <string>

namespace gravfact {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct SingularMetric : Error {
  explicit SingularMetric(const std::string& w = "metric determinant below threshold") : Error(w) {}
};
struct OutOfChart : Error {
  explicit OutOfChart(const std::string& w = "point outside chart") : Error(w) {}
};
struct DimensionUnsupported : Error {
  explicit DimensionUnsupported(const std::string& w = "operation requires dimension 4") : Error(w) {}
};
struct ModeUnsupported : Error {
  explicit ModeUnsupported(const std::string& w = "requested mode unsupported on this background") : Error(w) {}
};
struct ClaimViolation : Error {
  explicit ClaimViolation(const std::string& w = "background claims do not hold") : Error(w) {}
};
struct UnsupportedBackground : Error {
  explicit UnsupportedBackground(const std::string& w = "causal decisions need Minkowski or ultrastatic torus slab") : Error(w) {}
};
struct NonDiamondRegion : Error {
  explicit NonDiamondRegion(const std::string& w = "region is not a diamond union") : Error(w) {}
};
struct EmptyCover : Error {
  explicit EmptyCover(const std::string& w = "cover has no boxes") : Error(w) {}
};
struct OverlappingRegions : Error {
  explicit OverlappingRegions(const std::string& w = "regions overlap") : Error(w) {}
};
struct OverlappingImages : Error {
  explicit OverlappingImages(const std::string& w = "morphism images overlap") : Error(w) {}
};
struct NotTimeOrderableError : Error {
  explicit NotTimeOrderableError(const std::string& w = "tuple is not time-orderable") : Error(w) {}
};
struct NotCauchy : Error {
  explicit NotCauchy(const std::string& w = "morphism is not Cauchy") : Error(w) {}
};
struct QuadratureDivergence : Error {
  explicit QuadratureDivergence(const std::string& w = "quadrature error estimate above tolerance") : Error(w) {}
};
struct ModeCutoffTooLow : Error {
  explicit ModeCutoffTooLow(const std::string& w = "spectral tail above tolerance at mode cutoff") : Error(w) {}
};
struct SupportTooCloseToBoundary : Error {
  explicit SupportTooCloseToBoundary(const std::string& w = "support too close to slab time boundary") : Error(w) {}
};
struct CutoffOutsideImage : Error {
  explicit CutoffOutsideImage(const std::string& w = "cutoff transition slab not inside morphism image") : Error(w) {}
};
struct SupportEscapesImage : Error {
  explicit SupportEscapesImage(const std::string& w = "pushforward support escapes morphism image") : Error(w) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(w) {}
};
struct UnsupportedCombination : Error {
  explicit UnsupportedCombination(const std::string& w) : Error(w) {}
};

}  // namespace gravfact

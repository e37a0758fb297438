#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rnshelix {

enum class ErrorKind {
  // lorentz_core
  LightlikeInput,
  OppositeCone,
  DegeneratePlane,
  // ingest
  SyntaxError,
  UnknownIdentifier,
  EvalError,
  LightlikeVelocity,
  CurveNotOnSurface,
  InvalidDocument,
  // frames
  LightlikeNormal,
  MixedCausalCharacter,
  VanishingCurvature,
  LightlikePrincipalNormal,
  DegenerateNormal,
  AngleUndefined,
  GridMismatch,
  // helix analysis
  VanishingKappaG,
  EmptyValidGrid,
  AmbiguousAngle,
  RadicandViolation,
  // synthesis
  BadInitialFrame,
  StepTooLarge,
  DomainGuard,
};

std::string_view to_string(ErrorKind kind);

/// True for errors caused by malformed input rather than by the numerics.
bool is_validation_error(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<double> at = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  /// Arc-length (or curve parameter) of the first offending sample, if any.
  std::optional<double> at() const noexcept { return at_; }
  /// Message without the kind and location prefix.
  const std::string& detail() const noexcept { return detail_; }

 protected:
  std::string detail_;

 private:
  ErrorKind kind_;
  std::optional<double> at_;
};

/// Parse failures carry the byte offset into the source text.
class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t offset, const std::string& message);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace rnshelix

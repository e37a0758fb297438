#include "rnshelix/error.hpp"

namespace rnshelix {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::LightlikeInput: return "LightlikeInput";
    case ErrorKind::OppositeCone: return "OppositeCone";
    case ErrorKind::DegeneratePlane: return "DegeneratePlane";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::EvalError: return "EvalError";
    case ErrorKind::LightlikeVelocity: return "LightlikeVelocity";
    case ErrorKind::CurveNotOnSurface: return "CurveNotOnSurface";
    case ErrorKind::InvalidDocument: return "InvalidDocument";
    case ErrorKind::LightlikeNormal: return "LightlikeNormal";
    case ErrorKind::MixedCausalCharacter: return "MixedCausalCharacter";
    case ErrorKind::VanishingCurvature: return "VanishingCurvature";
    case ErrorKind::LightlikePrincipalNormal: return "LightlikePrincipalNormal";
    case ErrorKind::DegenerateNormal: return "DegenerateNormal";
    case ErrorKind::AngleUndefined: return "AngleUndefined";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::VanishingKappaG: return "VanishingKappaG";
    case ErrorKind::EmptyValidGrid: return "EmptyValidGrid";
    case ErrorKind::AmbiguousAngle: return "AmbiguousAngle";
    case ErrorKind::RadicandViolation: return "RadicandViolation";
    case ErrorKind::BadInitialFrame: return "BadInitialFrame";
    case ErrorKind::StepTooLarge: return "StepTooLarge";
    case ErrorKind::DomainGuard: return "DomainGuard";
  }
  return "Unknown";
}

bool is_validation_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::InvalidDocument:
    case ErrorKind::DomainGuard:
      return true;
    default:
      return false;
  }
}

namespace {

std::string decorate(ErrorKind kind, const std::string& message,
                     std::optional<double> at) {
  std::string out(to_string(kind));
  if (at) out += " at s=" + std::to_string(*at);
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::optional<double> at)
    : std::runtime_error(decorate(kind, message, at)), detail_(message), kind_(kind), at_(at) {}

ParseError::ParseError(ErrorKind kind, std::size_t offset, const std::string& message)
    : Error(kind, "byte " + std::to_string(offset) + ": " + message), offset_(offset) {
  detail_ = message;
}

}  // namespace rnshelix

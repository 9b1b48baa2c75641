#include "kslab/errors.hpp"

namespace kslab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NoEquilibrium: return "NoEquilibrium";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::TailNotDecaying: return "TailNotDecaying";
    case ErrorKind::NoContraction: return "NoContraction";
    case ErrorKind::BlowupBeforeRmax: return "BlowupBeforeRmax";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::DegenerateZero: return "DegenerateZero";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::ProfileCoverage: return "ProfileCoverage";
    case ErrorKind::PivotBreakdown: return "PivotBreakdown";
    case ErrorKind::UnsupportedBorderline: return "UnsupportedBorderline";
    case ErrorKind::NotEnoughCriticalPoints: return "NotEnoughCriticalPoints";
    case ErrorKind::BracketFailure: return "BracketFailure";
    case ErrorKind::NoRootInBracket: return "NoRootInBracket";
    case ErrorKind::MultipleRoots: return "MultipleRoots";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
  }
  return "Unknown";
}

bool is_usage_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::UnsupportedDimension:
    case ErrorKind::NotApplicable:
    case ErrorKind::UnsupportedBorderline:
    case ErrorKind::PreconditionViolated:
    case ErrorKind::ParseError:
    case ErrorKind::ValidationError:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace kslab

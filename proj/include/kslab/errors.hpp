#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kslab {

/// Failure categories raised by the library. The CLI maps computational
/// kinds to exit code 1 and usage kinds to exit code 2.
enum class ErrorKind {
  NoEquilibrium,
  UnsupportedDimension,
  NotApplicable,
  TailNotDecaying,
  NoContraction,
  BlowupBeforeRmax,
  StepUnderflow,
  DegenerateZero,
  PreconditionViolated,
  ProfileCoverage,
  PivotBreakdown,
  UnsupportedBorderline,
  NotEnoughCriticalPoints,
  BracketFailure,
  NoRootInBracket,
  MultipleRoots,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// True for errors caused by bad input rather than a failed computation.
bool is_usage_error(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kslab

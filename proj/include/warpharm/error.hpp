#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace warpharm {

enum class ErrorCode {
  OutOfDomain,
  InvalidFamily,
  UnsupportedDimension,
  IndexOutOfRange,
  GridTooCoarse,
  InvalidTolerance,
  QuadratureFailure,
  StepSizeUnderflow,
  NonPositiveWarp,
  DegenerateProfile,
  TailNotTight,
  NotConvergent,
  NotSolvable,
  OutOfRange,
  BoundaryPoint,
  SolverDivergence,
  Overflow,
  InvalidInput,
  Io,
};

std::string_view to_string(ErrorCode code);

// All library failures surface as this exception; `code()` carries the
// contract-level error name, `what()` a human readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace warpharm

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace regret {

enum class ErrorCode {
  NoStabilizingSolution,
  SingularInnovation,
  UnstableOperator,
  UnstablePair,
  SingularResolvent,
  DimensionMismatch,
  IndefiniteRQ,
  BracketFailure,
  SingularPencil,
  Infeasible,
  NonConvergedQuadrature,
  InvalidArgument,
  ParseError,
  IoError,
};

/// Stable identifier used in machine-readable error reports.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace regret

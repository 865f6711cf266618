#pragma once

#include <stdexcept>
#include <string>

namespace discordlab {

enum class ErrorCode {
  NonHermitian,
  DimensionMismatch,
  NotPSD,
  InvalidState,
  OutOfRange,
  ConditionalOnNullEvent,
  DegenerateParams,
  NotConverged,
  InconsistentConditionals,
  MissingProjectors,
  BadCounts,
  NegativeDiscord,
  TooFewSamples,
  BadSpec,
  BadInput,
};

/// Module that owns an error code, used for "module.Code" diagnostics.
const char* error_module(ErrorCode code) noexcept;
const char* error_name(ErrorCode code) noexcept;

/// True for errors caused by malformed user input rather than numerics.
bool is_input_error(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

  /// e.g. "tomo.NotConverged"
  std::string qualified_name() const;

 private:
  ErrorCode code_;
};

}  // namespace discordlab

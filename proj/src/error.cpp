#include "discordlab/error.hpp"

namespace discordlab {

const char* error_module(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHermitian:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotPSD:
    case ErrorCode::InvalidState:
      return "qmat";
    case ErrorCode::OutOfRange:
      return "states";
    case ErrorCode::ConditionalOnNullEvent:
    case ErrorCode::BadCounts:
      return "measure";
    case ErrorCode::DegenerateParams:
    case ErrorCode::NotConverged:
      return "tomo";
    case ErrorCode::InconsistentConditionals:
    case ErrorCode::MissingProjectors:
    case ErrorCode::NegativeDiscord:
      return "discord";
    case ErrorCode::TooFewSamples:
      return "analysis";
    case ErrorCode::BadSpec:
    case ErrorCode::BadInput:
      return "cli";
  }
  return "unknown";
}

const char* error_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::InvalidState: return "InvalidState";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ConditionalOnNullEvent: return "ConditionalOnNullEvent";
    case ErrorCode::DegenerateParams: return "DegenerateParams";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::InconsistentConditionals: return "InconsistentConditionals";
    case ErrorCode::MissingProjectors: return "MissingProjectors";
    case ErrorCode::BadCounts: return "BadCounts";
    case ErrorCode::NegativeDiscord: return "NegativeDiscord";
    case ErrorCode::TooFewSamples: return "TooFewSamples";
    case ErrorCode::BadSpec: return "BadSpec";
    case ErrorCode::BadInput: return "BadInput";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::BadSpec:
    case ErrorCode::BadInput:
    case ErrorCode::BadCounts:
    case ErrorCode::MissingProjectors:
    case ErrorCode::OutOfRange:
    case ErrorCode::TooFewSamples:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonHermitian:
    case ErrorCode::InvalidState:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

std::string Error::qualified_name() const {
  return std::string(error_module(code_)) + "." + error_name(code_);
}

}  // namespace discordlab

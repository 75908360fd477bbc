#include "lacvar/error.hpp"

namespace lacvar {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::NotIncreasing: return "NotIncreasing";
    case ErrorCode::RatioBelowBeta: return "RatioBelowBeta";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::IntervalTooSmall: return "IntervalTooSmall";
    case ErrorCode::BadParams: return "BadParams";
    case ErrorCode::NonPositiveWindow: return "NonPositiveWindow";
    case ErrorCode::TailTooLarge: return "TailTooLarge";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::IdentityViolated: return "IdentityViolated";
    case ErrorCode::BoundViolation: return "BoundViolation";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::ScenarioInvalid: return "ScenarioInvalid";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what,
             std::optional<std::int64_t> index, std::optional<double> value)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      index_(index),
      value_(value) {}

}  // namespace lacvar

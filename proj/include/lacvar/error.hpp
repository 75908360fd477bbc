#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace lacvar {

enum class ErrorCode {
  InvalidArgument,
  NonPositiveScale,
  NotIncreasing,
  RatioBelowBeta,
  GridMismatch,
  EmptyFamily,
  IntervalTooSmall,
  BadParams,
  NonPositiveWindow,
  TailTooLarge,
  EmptyGrid,
  PreconditionViolated,
  IdentityViolated,
  BoundViolation,
  NonPositiveWeight,
  ScenarioInvalid,
  Io,
};

const char* to_string(ErrorCode code);

/// Library error. `index` carries the offending position where one exists
/// (first violating scale, required truncation index, kernel level).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::int64_t> index = std::nullopt,
        std::optional<double> value = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::int64_t> index() const noexcept { return index_; }
  std::optional<double> value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  std::optional<std::int64_t> index_;
  std::optional<double> value_;
};

}  // namespace lacvar

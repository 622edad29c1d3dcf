#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace medjn {

enum class ErrorCode {
  NonPositiveWeight,
  TriangleViolation,
  AsymmetricMetric,
  ZeroDistance,
  UnknownCenter,
  UnknownPoint,
  NonPositiveRadius,
  NonPositiveDilation,
  EmptyRegion,
  EmptySet,
  InvalidS,
  NonPositiveQ,
  InvalidParams,
  ExactModeTooLarge,
  EmptyFamily,
  EmptyBase,
  InvalidLevel,
  EmptyLevelSet,
  ThresholdViolated,
  PreconditionViolated,
  InvalidCenterLevel,
  UnverifiedDecomposition,
  ConstructionFailed,
  InvalidDim,
  UnknownKind,
  NonFiniteValue,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this exception; `code()` lets
// callers (and the CLI exit-code mapping) branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace medjn

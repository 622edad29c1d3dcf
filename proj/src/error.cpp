#include "medjn/error.hpp"

namespace medjn {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::TriangleViolation: return "TriangleViolation";
    case ErrorCode::AsymmetricMetric: return "AsymmetricMetric";
    case ErrorCode::ZeroDistance: return "ZeroDistance";
    case ErrorCode::UnknownCenter: return "UnknownCenter";
    case ErrorCode::UnknownPoint: return "UnknownPoint";
    case ErrorCode::NonPositiveRadius: return "NonPositiveRadius";
    case ErrorCode::NonPositiveDilation: return "NonPositiveDilation";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::InvalidS: return "InvalidS";
    case ErrorCode::NonPositiveQ: return "NonPositiveQ";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::ExactModeTooLarge: return "ExactModeTooLarge";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::EmptyBase: return "EmptyBase";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::EmptyLevelSet: return "EmptyLevelSet";
    case ErrorCode::ThresholdViolated: return "ThresholdViolated";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::InvalidCenterLevel: return "InvalidCenterLevel";
    case ErrorCode::UnverifiedDecomposition: return "UnverifiedDecomposition";
    case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    case ErrorCode::InvalidDim: return "InvalidDim";
    case ErrorCode::UnknownKind: return "UnknownKind";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::Parse: return "Parse";
  }
  return "Unknown";
}

}  // namespace medjn

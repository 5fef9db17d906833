#include "regen/error.hpp"

namespace regen {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::Ok: return "Ok";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InvalidStochasticMatrix: return "InvalidStochasticMatrix";
    case ErrorCode::InvalidSmallSet: return "InvalidSmallSet";
    case ErrorCode::MinorizationViolated: return "MinorizationViolated";
    case ErrorCode::TourLengthOverflow: return "TourLengthOverflow";
    case ErrorCode::InsufficientTrajectory: return "InsufficientTrajectory";
    case ErrorCode::EmptyTourList: return "EmptyTourList";
    case ErrorCode::NonpositiveM: return "NonpositiveM";
    case ErrorCode::StoppingRuleViolated: return "StoppingRuleViolated";
    case ErrorCode::NotDoeblin: return "NotDoeblin";
    case ErrorCode::EmptySampleList: return "EmptySampleList";
    case ErrorCode::NotIrreducible: return "NotIrreducible";
    case ErrorCode::Periodic: return "Periodic";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::VNotBoundedBelowByOne: return "VNotBoundedBelowByOne";
    case ErrorCode::UnsupportedTarget: return "UnsupportedTarget";
    case ErrorCode::DriftNotSatisfied: return "DriftNotSatisfied";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::DensityRatioUndefined: return "DensityRatioUndefined";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

}  // namespace regen

namespace regen {

bool is_config_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DomainError:
    case ErrorCode::InvalidStochasticMatrix:
    case ErrorCode::InvalidSmallSet:
    case ErrorCode::MinorizationViolated:
    case ErrorCode::NonpositiveM:
    case ErrorCode::NotDoeblin:
    case ErrorCode::NotIrreducible:
    case ErrorCode::Periodic:
    case ErrorCode::VNotBoundedBelowByOne:
    case ErrorCode::UnsupportedTarget:
    case ErrorCode::DriftNotSatisfied:
    case ErrorCode::StateSpaceTooLarge:
    case ErrorCode::ParseError:
    case ErrorCode::ConfigError:
      return true;
    default:
      return false;
  }
}

}  // namespace regen

#include "bf/error.hpp"

namespace bf {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SingularKappa: return "SingularKappa";
    case ErrorCode::ResonantKappa: return "ResonantKappa";
    case ErrorCode::NotUnstable: return "NotUnstable";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::GapFailure: return "GapFailure";
    case ErrorCode::ContourTooTight: return "ContourTooTight";
    case ErrorCode::RankFailure: return "RankFailure";
    case ErrorCode::StructureViolation: return "StructureViolation";
    case ErrorCode::DegenerateG: return "DegenerateG";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::IoError:
      return 3;
    case ErrorCode::NoConvergence:
    case ErrorCode::GapFailure:
    case ErrorCode::ContourTooTight:
    case ErrorCode::RankFailure:
    case ErrorCode::StructureViolation:
    case ErrorCode::DegenerateG:
    case ErrorCode::SingularSystem:
      return 4;
    default:
      return 2;
  }
}

}  // namespace bf

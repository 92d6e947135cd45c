#include "chenmap/errors.hpp"

namespace chenmap {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMetric: return "SingularMetric";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::DegeneratePlane: return "DegeneratePlane";
    case ErrorCode::NonOrthonormalFrame: return "NonOrthonormalFrame";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::IsometryViolation: return "IsometryViolation";
    case ErrorCode::StructureViolation: return "StructureViolation";
    case ErrorCode::XiMixed: return "XiMixed";
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHarmonic: return "NotHarmonic";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::UnknownBuiltin: return "UnknownBuiltin";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_configuration_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::SchemaError:
    case ErrorCode::UnknownBuiltin:
    case ErrorCode::UnknownFamily:
    case ErrorCode::IoError:
      return true;
    default:
      return false;
  }
}

GeometryError::GeometryError(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

void fail(ErrorCode code, const std::string& detail) { throw GeometryError(code, detail); }

}  // namespace chenmap

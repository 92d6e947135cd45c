#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chenmap {

enum class ErrorCode {
  SingularMetric,
  OutOfDomain,
  DegeneratePlane,
  NonOrthonormalFrame,
  RankDeficient,
  IsometryViolation,
  StructureViolation,
  XiMixed,
  UnknownFamily,
  DimensionMismatch,
  NotHarmonic,
  ModelMismatch,
  ParseError,
  SchemaError,
  UnknownBuiltin,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Configuration errors come from user input; everything else is an engine
// or numerical failure.
bool is_configuration_error(ErrorCode code);

class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorCode code, const std::string& detail);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& detail);

}  // namespace chenmap

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chenmap/catalog.hpp"
#include "chenmap/config.hpp"
#include "chenmap/delta.hpp"

namespace chenmap {

inline constexpr const char* kSchemaVersion = "1";

enum class PlaneMode { Indices, Angles, Sweep };

struct PlaneSpec {
  PlaneMode mode = PlaneMode::Indices;
  std::vector<std::pair<int, int>> indices{{1, 2}};  // 1-based
  std::vector<std::vector<double>> angles;
  int sweep_count = 16;
};

struct ScenarioFile {
  std::string schema_version = kSchemaVersion;
  std::string scenario_name;
  ScenarioDefinition definition;
  std::optional<ModelBlock> model;
  std::vector<Vec> points;  // empty when random_points > 0
  int random_points = 0;
  PlaneSpec planes;
  std::vector<std::string> checks;
  Tolerances tolerances;
  std::uint64_t seed = 0;
  SearchOptions search;
};

// Check names accepted in the "checks" list.
const std::vector<std::string>& known_checks();
bool check_needs_model(const std::string& check);

// ParseError (with line and column), SchemaError naming the field, UnknownBuiltin.
ScenarioFile parse_scenario(const std::string& text);
ScenarioFile load_scenario(const std::string& path);

// One (point, plane, check) evaluation.
struct Record {
  std::string name;
  std::string check;
  int point_index = 0;
  std::string plane_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
  bool equality = false;
  std::string status = "ok";  // ok | error | skipped
  std::string error;          // error code name when status != ok
  std::string message;
  std::map<std::string, double> values;
  std::map<std::string, bool> flags;
  std::map<std::string, std::string> labels;
  std::vector<std::string> notes;
  std::vector<std::string> equality_violations;

  [[nodiscard]] bool violated() const { return status == "ok" && !holds; }
};

struct GateResult {
  int point_index = 0;
  std::vector<double> point;
  int rank = 0;
  double gauss_residual = 0.0;
  double sff_symmetry = 0.0;
  double sff_range = 0.0;
  double model_consistency = 0.0;  // NaN when no model is evaluated
  bool passed = false;
  std::string error;
  std::string message;
};

struct Provenance {
  std::uint64_t seed = 0;
  Tolerances tolerances;
  double tolerance_scale = 1.0;
  std::string tool = "chenmap";
  std::string version;
  std::string schema_version = kSchemaVersion;
  std::string scenario;
  std::string simd;
  std::vector<std::string> checks;
  std::optional<double> wall_time_s;
};

struct Summary {
  int records = 0;
  int holds = 0;
  int violations = 0;
  int errors = 0;
  int skipped = 0;
  int equality = 0;
  double min_slack = 0.0;  // over evaluated records; 0 when there are none
  std::vector<std::string> failures;  // "name@point_index/plane_id: reason"
};

struct RunReport {
  std::vector<Record> records;
  std::vector<GateResult> gates;
  Provenance provenance;

  [[nodiscard]] Summary summary() const;
};

enum class ReportFormat { Json, Csv };

std::string render_json(const RunReport& report);
std::string render_csv(const RunReport& report);
RunReport parse_report_json(const std::string& text);

// Writes to `path`, or to standard output when the path is empty or "-". IoError on failure.
void emit_report(const RunReport& report, ReportFormat format, const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace chenmap

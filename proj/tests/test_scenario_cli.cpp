#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "chenmap/catalog.hpp"
#include "chenmap/errors.hpp"
#include "chenmap/runner.hpp"
#include "chenmap/scenario_io.hpp"

namespace chenmap {
namespace {

using nlohmann::json;

const std::string kScenarioDir = CHENMAP_SCENARIO_DIR;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const GeometryError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no GeometryError thrown";
  return ErrorCode::IoError;
}

ErrorCode parse_error(const std::string& text) {
  return code_of([&] { static_cast<void>(parse_scenario(text)); });
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

class ScopedEnv {
 public:
  ScopedEnv(const char* name, const char* value) : name_(name) {
    if (const char* old = std::getenv(name)) old_ = old;
    ::setenv(name, value, 1);
  }
  ~ScopedEnv() {
    if (old_.empty()) {
      ::unsetenv(name_);
    } else {
      ::setenv(name_, old_.c_str(), 1);
    }
  }

 private:
  const char* name_;
  std::string old_;
};

constexpr const char* kMinimal = R"({"schema_version": "1", "scenario": "flat_identity_r3", "checks": ["general_cfi"]})";

TEST(ScenarioLoading, MinimalScenarioGetsDefaults) {
  const ScenarioFile sf = parse_scenario(kMinimal);
  EXPECT_EQ(sf.scenario_name, "flat_identity_r3");
  EXPECT_EQ(sf.schema_version, "1");
  EXPECT_FALSE(sf.model.has_value());
  ASSERT_EQ(sf.points.size(), 1u);
  EXPECT_EQ(sf.points[0], sf.definition.default_point);
  EXPECT_EQ(sf.planes.mode, PlaneMode::Indices);
  ASSERT_EQ(sf.planes.indices.size(), 1u);
  EXPECT_EQ(sf.planes.indices[0], std::make_pair(1, 2));
  EXPECT_EQ(sf.seed, 0u);
  EXPECT_EQ(sf.tolerances.slack, Tolerances{}.slack);
}

TEST(ScenarioLoading, ExampleFilesLoad) {
  for (const auto& entry : std::filesystem::directory_iterator(kScenarioDir)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(static_cast<void>(load_scenario(entry.path().string()))) << entry.path();
  }
}

TEST(ScenarioLoading, FamilyAndExplicitCoefficientsAreExclusive) {
  EXPECT_EQ(parse_error(R"({"schema_version": "1", "scenario": "flat_identity_r3",
    "model": {"kind": "GCSF", "family": "real", "c": 0, "f1": 1}, "checks": ["general_cfi"]})"),
            ErrorCode::SchemaError);
}

TEST(ScenarioLoading, ModelChecksNeedAModel) {
  EXPECT_EQ(parse_error(R"({"schema_version": "1", "scenario": "flat_identity_r3", "checks": ["gcsf_cfi"]})"),
            ErrorCode::SchemaError);
}

TEST(ScenarioLoading, SyntaxErrorsCarryLineAndColumn) {
  try {
    static_cast<void>(parse_scenario("{\"schema_version\": \"1\",\n  \"scenario\": flat}"));
    FAIL() << "expected ParseError";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2, column"), std::string::npos) << e.what();
  }
}

TEST(ScenarioLoading, SchemaViolationsAreRejected) {
  // wrong version
  EXPECT_EQ(parse_error(R"({"schema_version": "2", "scenario": "flat_identity_r3", "checks": ["general_cfi"]})"),
            ErrorCode::SchemaError);
  // unknown key
  EXPECT_EQ(parse_error(R"({"schema_version": "1", "scenario": "flat_identity_r3", "checks": ["general_cfi"],
    "colour": "blue"})"),
            ErrorCode::SchemaError);
  // unknown check
  EXPECT_EQ(parse_error(R"({"schema_version": "1", "scenario": "flat_identity_r3", "checks": ["ricci"]})"),
            ErrorCode::SchemaError);
  // point of the wrong dimension
  EXPECT_EQ(parse_error(R"({"schema_version": "1", "scenario": "flat_identity_r3", "checks": ["general_cfi"],
    "points": [[0, 0]]})"),
            ErrorCode::SchemaError);
  // family of the wrong type for the model kind
  EXPECT_EQ(parse_error(R"({"schema_version": "1", "scenario": "flat_identity_r3",
    "model": {"kind": "GCSF", "family": "sasakian", "c": 1}, "checks": ["gcsf_cfi"]})"),
            ErrorCode::SchemaError);
}

TEST(ScenarioLoading, UnknownNamesAreReported) {
  EXPECT_EQ(parse_error(R"({"schema_version": "1", "scenario": "klein_bottle", "checks": ["general_cfi"]})"),
            ErrorCode::UnknownBuiltin);
  EXPECT_EQ(parse_error(R"({"schema_version": "1", "scenario": "flat_identity_r4",
    "model": {"kind": "GCSF", "family": "quaternionic", "c": 1}, "checks": ["gcsf_cfi"]})"),
            ErrorCode::UnknownFamily);
  EXPECT_EQ(code_of([] { static_cast<void>(load_scenario("/nonexistent/scenario.json")); }), ErrorCode::IoError);
}

TEST(ScenarioLoading, ConfigurationErrorClassification) {
  for (ErrorCode c : {ErrorCode::ParseError, ErrorCode::SchemaError, ErrorCode::UnknownBuiltin,
                      ErrorCode::UnknownFamily, ErrorCode::IoError})
    EXPECT_TRUE(is_configuration_error(c)) << to_string(c);
  for (ErrorCode c : {ErrorCode::SingularMetric, ErrorCode::RankDeficient, ErrorCode::NotHarmonic,
                      ErrorCode::ModelMismatch, ErrorCode::XiMixed})
    EXPECT_FALSE(is_configuration_error(c)) << to_string(c);
}

TEST(Reports, EmptyReportHasZeroedSummary) {
  RunReport report;
  const json j = json::parse(render_json(report));
  EXPECT_TRUE(j.at("records").empty());
  const json& s = j.at("summary");
  for (const char* key : {"records", "holds", "violations", "errors", "skipped", "equality"})
    EXPECT_EQ(s.at(key).get<int>(), 0) << key;
  EXPECT_EQ(s.at("min_slack").get<double>(), 0.0);
  EXPECT_TRUE(s.at("failures").empty());
  EXPECT_EQ(exit_code(report), kExitOk);
}

Record sample_record() {
  Record r;
  r.name = "general_cfi";
  r.check = "general_cfi";
  r.plane_id = "1-2";
  r.lhs = 0.1;
  r.rhs = -1.0 / 3.0;
  r.slack = r.lhs - r.rhs;
  r.holds = true;
  r.values["tau_sq"] = 2.5;
  return r;
}

TEST(Reports, SingleRecordCsvHasHeaderAndOneRow) {
  RunReport report;
  report.records.push_back(sample_record());
  const std::string csv = render_csv(report);
  EXPECT_EQ(line_count(csv), 2u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "name,point_index,plane_id,lhs,rhs,slack,holds,equality,error");
  EXPECT_NE(csv.find("-0.33333333333333331"), std::string::npos) << csv;
}

TEST(Reports, SkippedRecordsAreMarkedInCsv) {
  RunReport report;
  Record r = sample_record();
  r.status = "skipped";
  r.error = "GaussGate";
  report.records.push_back(r);
  EXPECT_NE(render_csv(report).find("SKIPPED:GaussGate"), std::string::npos);
  EXPECT_EQ(exit_code(report), kExitEngine);
}

TEST(Reports, JsonRoundTripIsExact) {
  RunReport report;
  Record r = sample_record();
  r.values["nan_value"] = std::nan("");
  r.flags["printed_formula_agrees"] = false;
  r.labels["model"] = "GCSF";
  r.notes.push_back("note");
  report.records.push_back(r);
  GateResult g;
  g.point = {0.1, 0.2, 0.3};
  g.rank = 3;
  g.passed = true;
  g.model_consistency = std::nan("");
  report.gates.push_back(g);
  report.provenance.seed = 42;
  report.provenance.tolerance_scale = 2.0;
  report.provenance.tolerances = Tolerances{}.scaled(2.0);
  report.provenance.scenario = "flat_identity_r3";
  report.provenance.checks = {"general_cfi"};
  const std::string first = render_json(report);
  const RunReport back = parse_report_json(first);
  EXPECT_EQ(render_json(back), first);
  EXPECT_TRUE(std::isnan(back.records[0].values.at("nan_value")));
  EXPECT_EQ(back.provenance.seed, 42u);
}

TEST(Reports, ExitCodePrecedence) {
  RunReport report;
  report.records.push_back(sample_record());
  EXPECT_EQ(exit_code(report), kExitOk);

  Record engine = sample_record();
  engine.status = "error";
  engine.error = "RankDeficient";
  report.records.push_back(engine);
  EXPECT_EQ(exit_code(report), kExitEngine);

  Record config = sample_record();
  config.status = "error";
  config.error = "SchemaError";
  report.records.push_back(config);
  EXPECT_EQ(exit_code(report), kExitConfig);

  Record violated = sample_record();
  violated.holds = false;
  violated.slack = -1.0;
  report.records.push_back(violated);
  EXPECT_EQ(exit_code(report), kExitViolation);
  EXPECT_EQ(report.summary().violations, 1);
  EXPECT_EQ(report.summary().min_slack, -1.0);
}

TEST(Reports, EmitWritesFilesAndReportsIoErrors) {
  RunReport report;
  report.records.push_back(sample_record());
  const auto path = std::filesystem::temp_directory_path() / "chenmap_emit_test.csv";
  emit_report(report, ReportFormat::Csv, path.string());
  EXPECT_EQ(read_text_file(path.string()), render_csv(report));
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([&] { emit_report(report, ReportFormat::Json, "/nonexistent/dir/out.json"); }),
            ErrorCode::IoError);
}

TEST(Runner, MinimalScenarioIsEquality) {
  const RunReport report = run_checks(parse_scenario(kMinimal));
  ASSERT_EQ(report.records.size(), 1u);
  EXPECT_TRUE(report.records[0].holds);
  EXPECT_TRUE(report.records[0].equality);
  EXPECT_EQ(report.records[0].plane_id, "1-2");
  EXPECT_EQ(exit_code(report), kExitOk);
}

TEST(Runner, RecordsAreOrderedByPointPlaneAndCheck) {
  const ScenarioFile sf = load_scenario(kScenarioDir + "/sphere_in_sphere.json");
  const RunReport report = run_checks(sf);
  ASSERT_FALSE(report.records.empty());
  for (std::size_t i = 1; i < report.records.size(); ++i)
    EXPECT_LE(report.records[i - 1].point_index, report.records[i].point_index);
  EXPECT_EQ(exit_code(report), kExitOk);
}

TEST(Runner, RankDeficientMapGivesEngineError) {
  const RunReport report = run_checks(load_scenario(kScenarioDir + "/projection_plumbing.json"));
  ASSERT_FALSE(report.records.empty());
  for (const Record& r : report.records) {
    EXPECT_EQ(r.status, "error");
    EXPECT_EQ(r.error, "RankDeficient");
  }
  EXPECT_EQ(exit_code(report), kExitEngine);
}

TEST(Runner, GaussGateSkipsInconsistentMaps) {
  // The inclusion is isometric only at the origin, so the Gauss equation fails there.
  const ScenarioFile sf = parse_scenario(R"({"schema_version": "1",
    "scenario": {"name": "bent", "source": {"polynomial": {"dim": 3, "metric": [
      [[[1, 0, 0, 0], [0.5, 2, 0, 0]], [], []],
      [[], [[1, 0, 0, 0], [0.5, 2, 0, 0]], []],
      [[], [], [[1, 0, 0, 0], [0.5, 2, 0, 0]]]]}},
      "target": {"builtin": "euclidean", "dim": 3}, "map": {"builtin": "identity"}},
    "checks": ["general_cfi"]})");
  const RunReport report = run_checks(sf);
  ASSERT_EQ(report.records.size(), 1u);
  EXPECT_EQ(report.records[0].status, "skipped");
  EXPECT_EQ(report.records[0].error, "GaussGate");
  EXPECT_FALSE(report.gates[0].passed);
  EXPECT_EQ(exit_code(report), kExitEngine);
}

TEST(Runner, ModelMismatchSkipsModelChecks) {
  const ScenarioFile sf = parse_scenario(R"({"schema_version": "1", "scenario": "sphere_in_sphere",
    "model": {"kind": "GCSF", "family": "real", "c": 2}, "checks": ["general_cfi", "gcsf_cfi"]})");
  const RunReport report = run_checks(sf);
  ASSERT_EQ(report.records.size(), 2u);
  std::set<std::string> statuses;
  for (const Record& r : report.records) statuses.insert(r.check + ":" + r.status + ":" + r.error);
  EXPECT_TRUE(statuses.count("gcsf_cfi:skipped:ModelMismatch")) << *statuses.begin();
  EXPECT_TRUE(statuses.count("general_cfi:ok:"));
}

TEST(Runner, ToleranceScaleIsRecorded) {
  RunOptions opts;
  opts.tolerance_scale = 10.0;
  opts.seed = 7;
  const RunReport report = run_checks(parse_scenario(kMinimal), opts);
  EXPECT_EQ(report.provenance.tolerance_scale, 10.0);
  EXPECT_EQ(report.provenance.seed, 7u);
  EXPECT_DOUBLE_EQ(report.provenance.tolerances.slack, 10.0 * Tolerances{}.slack);
  EXPECT_DOUBLE_EQ(report.provenance.tolerances.fd_step, Tolerances{}.fd_step);
}

TEST(Runner, OutputIsIndependentOfThreadCount) {
  const ScenarioFile sf = load_scenario(kScenarioDir + "/odd_sphere_contact.json");
  RunOptions serial;
  serial.threads = 1;
  RunOptions parallel;
  parallel.threads = 6;
  EXPECT_EQ(render_json(run_checks(sf, serial)), render_json(run_checks(sf, parallel)));
}

TEST(Runner, SeedDrivesRandomPoints) {
  const std::string text = R"({"schema_version": "1", "scenario": "sphere_in_flat", "points": {"random": 3},
    "checks": ["general_cfi"]})";
  RunOptions a;
  a.seed = 1;
  RunOptions b;
  b.seed = 2;
  const ScenarioFile sf = parse_scenario(text);
  EXPECT_EQ(render_json(run_checks(sf, a)), render_json(run_checks(sf, a)));
  EXPECT_NE(render_json(run_checks(sf, a)), render_json(run_checks(sf, b)));
}

TEST(Runner, WorkerCountHonoursEnvironment) {
  {
    ScopedEnv env("CHENMAP_THREADS", "3");
    EXPECT_EQ(worker_count(), 3);
    EXPECT_EQ(worker_count(2), 2);
  }
  {
    ScopedEnv env("CHENMAP_THREADS", "0");
    EXPECT_GE(worker_count(), 1);
  }
  {
    ScopedEnv env("CHENMAP_THREADS", "many");
    EXPECT_EQ(code_of([] { static_cast<void>(worker_count()); }), ErrorCode::SchemaError);
  }
}

TEST(Runner, ParallelForVisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 8, [&](std::size_t i) { ++hits[i]; });
  for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Catalog, RequiredBuiltinsArePresent) {
  std::set<std::string> names;
  for (const CatalogListing& l : list_builtins())
    if (l.required) names.insert(l.name);
  for (const char* n : {"flat_identity_r3", "flat_identity_r4", "flat_identity_r5", "projection_plumbing",
                        "sphere_inclusion", "sphere_in_sphere", "cp1_chart", "cp2_chart", "odd_sphere_contact",
                        "product_s2xr"})
    EXPECT_TRUE(names.count(n)) << n;
}

TEST(Catalog, EveryBuiltinEvaluatesAtItsDefaultPoint) {
  for (const CatalogListing& l : list_builtins()) {
    const ScenarioDefinition def = builtin_scenario(l.name);
    EXPECT_TRUE(def.admits(def.default_point)) << l.name;
    EXPECT_FALSE(l.description.empty()) << l.name;
    std::mt19937_64 rng(1);
    EXPECT_FALSE(def.sample_points(rng, 2).empty()) << l.name;
  }
  EXPECT_EQ(code_of([] { static_cast<void>(builtin_scenario("torus")); }), ErrorCode::UnknownBuiltin);
}

TEST(Catalog, RandomCasesAreReproducible) {
  for (int i = 0; i < kRandomTargetKinds; ++i) {
    const RandomCase a = random_case(5, i);
    const RandomCase b = random_case(5, i);
    EXPECT_EQ(a.target_label, b.target_label);
    EXPECT_EQ(a.scenario.default_point, b.scenario.default_point);
    EXPECT_EQ(a.scenario.map.value(a.scenario.default_point), b.scenario.map.value(b.scenario.default_point));
  }
}

}  // namespace
}  // namespace chenmap

#include "chenmap/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

#include "chenmap/chen.hpp"
#include "chenmap/errors.hpp"
#include "chenmap/kernels.hpp"

#ifndef CHENMAP_VERSION
#define CHENMAP_VERSION "0.0.0"
#endif

namespace chenmap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct PlaneSlot {
  std::string id;
  std::optional<HorizontalPlane> plane;
  std::string error;
  std::string message;
};

struct PointState {
  Vec x;
  std::optional<MapBundle> bundle;
  GateResult gate;
  std::string model_error;  // set when model checks cannot run at this point
  std::string model_message;
  bool model_skipped = false;
  std::vector<PlaneSlot> planes;
};

struct Task {
  int point = 0;
  int plane = -1;  // -1 for whole-point checks
  std::string check;
};

Record error_record(const Task& t, const std::string& plane_id, const std::string& status, const std::string& code,
                    const std::string& message) {
  Record r;
  r.name = t.check;
  r.check = t.check;
  r.point_index = t.point;
  r.plane_id = plane_id;
  r.lhs = r.rhs = r.slack = kNaN;
  r.status = status;
  r.error = code;
  r.message = message;
  return r;
}

Record from_inequality(const InequalityReport& rep, const Task& t, const std::string& plane_id) {
  Record r;
  r.name = rep.name;
  r.check = t.check;
  r.point_index = t.point;
  r.plane_id = plane_id;
  r.lhs = rep.lhs;
  r.rhs = rep.rhs;
  r.slack = rep.slack;
  r.holds = rep.holds;
  r.equality = rep.equality;
  r.values = rep.values;
  r.flags = rep.flags;
  r.notes = rep.notes;
  if (rep.equality_structure) {
    r.flags["equality_structure"] = rep.equality_structure->is_equality_form;
    r.values["equality_max_violation"] = rep.equality_structure->max_violation;
    r.equality_violations = rep.equality_structure->violations;
  }
  return r;
}

Record from_delta(const DeltaReport& rep, const Task& t) {
  Record r;
  r.name = rep.name;
  r.check = t.check;
  r.point_index = t.point;
  r.plane_id = "min";
  r.lhs = rep.delta;
  r.rhs = rep.bound_value;
  r.slack = rep.slack;
  r.holds = rep.holds;
  r.equality = rep.equality;
  r.values = rep.values;
  r.notes = rep.notes;
  for (const auto& [k, v] : rep.statement_flags) r.flags["statement_" + k] = v;
  r.labels["bound"] = rep.bound_name;
  r.labels["equality_statements"] = rep.equality_statements;
  r.labels["search_method"] = std::string(to_string(rep.search.method));
  r.values["search_evaluations"] = static_cast<double>(rep.search.evaluations);
  r.values["search_certified_gap"] = rep.search.certified_gap;
  r.values["search_resolution"] = rep.search.resolution;
  r.values["search_unconverged"] = rep.search.unconverged;
  r.values["min_sectional_curvature"] = rep.search.min_value;
  return r;
}

std::vector<PlaneSlot> resolve_planes(const PlaneSpec& spec, int r, std::uint64_t seed, int point) {
  std::vector<PlaneSlot> out;
  switch (spec.mode) {
    case PlaneMode::Indices:
      for (const auto& [i, j] : spec.indices) {
        PlaneSlot s;
        s.id = std::to_string(i) + "-" + std::to_string(j);
        if (i > r || j > r) {
          s.error = std::string(to_string(ErrorCode::DimensionMismatch));
          s.message = "plane " + s.id + " exceeds rank " + std::to_string(r);
        } else {
          s.plane = HorizontalPlane::from_indices(r, i - 1, j - 1);
          s.plane->id = s.id;
        }
        out.push_back(std::move(s));
      }
      break;
    case PlaneMode::Angles:
      for (std::size_t k = 0; k < spec.angles.size(); ++k) {
        PlaneSlot s;
        s.id = "a" + std::to_string(k + 1);
        try {
          s.plane = plane_from_angles(r, spec.angles[k]);
          s.plane->id = s.id;
        } catch (const GeometryError& e) {
          s.error = std::string(to_string(e.code()));
          s.message = e.what();
        }
        out.push_back(std::move(s));
      }
      break;
    case PlaneMode::Sweep: {
      std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(point + 1)));
      for (int k = 0; k < spec.sweep_count; ++k) {
        PlaneSlot s;
        s.id = "s" + std::to_string(k + 1);
        if (r >= 2) {
          const Mat q = random_orthogonal(rng, r);
          s.plane = HorizontalPlane{q.col(0), q.col(1), s.id};
        } else {
          s.error = std::string(to_string(ErrorCode::RankDeficient));
          s.message = "no horizontal planes at rank " + std::to_string(r);
        }
        out.push_back(std::move(s));
      }
      break;
    }
  }
  return out;
}

std::vector<std::string> plane_ids(const PlaneSpec& spec) {
  std::vector<std::string> ids;
  if (spec.mode == PlaneMode::Indices)
    for (const auto& [i, j] : spec.indices) ids.push_back(std::to_string(i) + "-" + std::to_string(j));
  if (spec.mode == PlaneMode::Angles)
    for (std::size_t k = 0; k < spec.angles.size(); ++k) ids.push_back("a" + std::to_string(k + 1));
  if (spec.mode == PlaneMode::Sweep)
    for (int k = 0; k < spec.sweep_count; ++k) ids.push_back("s" + std::to_string(k + 1));
  return ids;
}

bool whole_point_check(const std::string& c) { return c == "delta" || c == "harmonic"; }

}  // namespace

int worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CHENMAP_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0)
      fail(ErrorCode::SchemaError, "CHENMAP_THREADS must be a non-negative integer");
    if (v > 0) return static_cast<int>(std::min<long>(v, 1024));
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (std::thread& t : pool) t.join();
}

RunReport run_checks(const ScenarioFile& sf, const RunOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t seed = opts.seed.value_or(sf.seed);
  const Tolerances tol = sf.tolerances.scaled(opts.tolerance_scale);
  const int threads = worker_count(opts.threads);
  std::vector<std::string> checks = opts.checks.value_or(sf.checks);
  std::sort(checks.begin(), checks.end());
  for (const std::string& c : checks)
    if (check_needs_model(c) && !sf.model) fail(ErrorCode::SchemaError, "check '" + c + "' needs a model block");

  SearchOptions search = opts.search.value_or(sf.search);
  search.seed = seed;

  std::vector<Vec> points = sf.points;
  if (sf.random_points > 0) {
    std::mt19937_64 rng(seed);
    points = sf.definition.sample_points(rng, sf.random_points);
  }

  std::optional<SpaceFormModel> model;
  if (sf.model) model = resolve_model(*sf.model, sf.definition);
  const bool model_checks = std::any_of(checks.begin(), checks.end(), check_needs_model);

  RunReport report;
  std::vector<PointState> states(points.size());
  parallel_for(points.size(), threads, [&](std::size_t p) {
    PointState& st = states[p];
    st.x = points[p];
    GateResult& g = st.gate;
    g.point_index = static_cast<int>(p);
    g.point.assign(st.x.data(), st.x.data() + st.x.size());
    g.model_consistency = kNaN;
    try {
      MapBundle b = evaluate_bundle(sf.definition.at(st.x), tol);
      g.rank = b.rank();
      g.gauss_residual = gauss_residual(b.frames, b.sff, b.source_curvature, b.target_curvature);
      g.sff_symmetry = b.sff.symmetry_residual;
      g.sff_range = b.sff.range_residual;
      g.passed = g.gauss_residual < tol.gauss && g.sff_symmetry < tol.sff && g.sff_range < tol.sff;
      if (!g.passed) {
        g.error = "GaussGate";
        g.message = "gauss " + std::to_string(g.gauss_residual) + ", sff symmetry " + std::to_string(g.sff_symmetry) +
                    ", sff range " + std::to_string(g.sff_range);
      }
      if (model && model_checks) {
        try {
          g.model_consistency = model_consistency(b, *model, tol);
          if (!(g.model_consistency < tol.model_consistency)) {
            st.model_skipped = true;
            st.model_error = std::string(to_string(ErrorCode::ModelMismatch));
            st.model_message = "model curvature differs from the target by " + std::to_string(g.model_consistency);
          }
        } catch (const GeometryError& e) {
          st.model_error = std::string(to_string(e.code()));
          st.model_message = e.what();
        }
      }
      st.planes = resolve_planes(sf.planes, b.rank(), seed, static_cast<int>(p));
      st.bundle = std::move(b);
    } catch (const GeometryError& e) {
      g.passed = false;
      g.gauss_residual = g.sff_symmetry = g.sff_range = kNaN;
      g.error = std::string(to_string(e.code()));
      g.message = e.what();
    }
  });

  const std::vector<std::string> ids = plane_ids(sf.planes);
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t k = 0; k < ids.size(); ++k)
      for (const std::string& c : checks)
        if (!whole_point_check(c)) tasks.push_back({static_cast<int>(p), static_cast<int>(k), c});
    for (const std::string& c : checks)
      if (whole_point_check(c)) tasks.push_back({static_cast<int>(p), -1, c});
  }

  report.records.resize(tasks.size());
  parallel_for(tasks.size(), threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    const PointState& st = states[static_cast<std::size_t>(t.point)];
    const std::string plane_id = t.plane < 0 ? "min" : ids[static_cast<std::size_t>(t.plane)];
    Record& out = report.records[i];
    if (!st.bundle) {
      out = error_record(t, plane_id, "error", st.gate.error, st.gate.message);
      return;
    }
    if (!st.gate.passed) {
      out = error_record(t, plane_id, "skipped", st.gate.error, st.gate.message);
      return;
    }
    if (check_needs_model(t.check) && !st.model_error.empty()) {
      out = error_record(t, plane_id, st.model_skipped ? "skipped" : "error", st.model_error, st.model_message);
      return;
    }
    const MapBundle& b = *st.bundle;
    try {
      if (t.check == "delta") {
        out = from_delta(model->kind == ModelKind::Gcsf ? verify_delta_bound_gcsf(b, *model, search, tol)
                                                        : verify_delta_bound_gssf(b, *model, search, tol),
                         t);
        return;
      }
      if (t.check == "harmonic") {
        out = from_delta(verify_harmonic_corollaries(b, *model, search, tol), t);
        return;
      }
      const PlaneSlot& slot = st.planes[static_cast<std::size_t>(t.plane)];
      if (!slot.plane) {
        out = error_record(t, plane_id, "error", slot.error, slot.message);
        return;
      }
      const HorizontalPlane& plane = *slot.plane;
      InequalityReport rep;
      if (t.check == "general_cfi") {
        rep = verify_general_cfi(b, plane, tol);
      } else if (t.check == "gcsf_cfi") {
        rep = verify_gcsf_cfi(b, *model, plane, tol);
      } else if (t.check == "gssf_cfi") {
        rep = verify_gssf_cfi(b, *model, plane, tol);
      } else {
        const ModelBlock& mb = *sf.model;
        if (mb.kind == ModelKind::Gcsf) {
          rep = verify_corollary_gcsf(b, *mb.family, mb.c, mb.alpha, model->structure, plane, tol);
        } else {
          XiPosition expected;
          if (mb.xi_case) {
            expected = *mb.xi_case;
          } else {
            const StructureAt s = model->at(b.frames.image_point, b.frames.target_metric);
            expected = xi_position(s, b.frames, tol);
          }
          rep = verify_corollary_gssf(b, *mb.family, mb.c, mb.alpha, expected, model->structure, plane, tol);
        }
      }
      out = from_inequality(rep, t, plane_id);
    } catch (const GeometryError& e) {
      out = error_record(t, plane_id, "error", std::string(to_string(e.code())), e.what());
    } catch (const std::exception& e) {
      out = error_record(t, plane_id, "error", "InternalError", e.what());
    }
  });

  for (PointState& st : states) report.gates.push_back(std::move(st.gate));
  Provenance& pv = report.provenance;
  pv.seed = seed;
  pv.tolerances = tol;
  pv.tolerance_scale = opts.tolerance_scale;
  pv.version = CHENMAP_VERSION;
  pv.scenario = sf.scenario_name;
  pv.simd = std::string(kernels::to_string(kernels::active_isa()));
  pv.checks = checks;
  if (opts.timing)
    pv.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

int exit_code(const RunReport& report) {
  bool config = false, engine = false;
  for (const Record& r : report.records) {
    if (r.violated()) return kExitViolation;
    if (r.status == "ok") continue;
    const auto& codes = r.error;
    bool is_config = false;
    for (int c = 0; c <= static_cast<int>(ErrorCode::IoError); ++c) {
      const auto code = static_cast<ErrorCode>(c);
      if (codes == to_string(code)) is_config = is_configuration_error(code);
    }
    (is_config ? config : engine) = true;
  }
  if (config) return kExitConfig;
  if (engine) return kExitEngine;
  return kExitOk;
}

}  // namespace chenmap

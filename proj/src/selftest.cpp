#include "chenmap/selftest.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>

#include "chenmap/catalog.hpp"
#include "chenmap/chart_geometry.hpp"
#include "chenmap/chen.hpp"
#include "chenmap/delta.hpp"
#include "chenmap/errors.hpp"
#include "chenmap/runner.hpp"
#include "chenmap/scenario_io.hpp"

namespace chenmap {

namespace {

using Clock = std::chrono::steady_clock;

// Collects the first few failure messages from parallel workers.
class FailureLog {
 public:
  void add(const std::string& msg) {
    std::lock_guard<std::mutex> lock(mu_);
    ++count_;
    if (first_.size() < 3) first_.push_back(msg);
  }
  [[nodiscard]] int count() const { return count_; }
  [[nodiscard]] std::string summary() const {
    std::string s;
    for (const std::string& m : first_) s += (s.empty() ? "" : "; ") + m;
    return s;
  }

 private:
  std::mutex mu_;
  int count_ = 0;
  std::vector<std::string> first_;
};

CriterionResult finish(int id, std::string title, bool passed, std::string detail, Clock::time_point start) {
  return {id, std::move(title), passed, std::move(detail),
          std::chrono::duration<double>(Clock::now() - start).count()};
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(3);
  ss << v;
  return ss.str();
}

std::vector<std::string> required_builtins() {
  std::vector<std::string> out;
  for (const CatalogListing& l : list_builtins())
    if (l.required) out.push_back(l.name);
  return out;
}

HorizontalPlane random_plane(std::mt19937_64& rng, int r) {
  const Mat q = random_orthogonal(rng, r);
  return {q.col(0), q.col(1), "random"};
}

// g-orthonormal frame whose first vector is `lead` when given.
Mat random_frame(std::mt19937_64& rng, const Mat& g, int r, const Vec* lead) {
  const int n = static_cast<int>(g.rows());
  std::normal_distribution<double> nd(0.0, 1.0);
  Mat a(n, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = nd(rng);
  if (lead != nullptr) a.col(0) = *lead;
  for (int j = 0; j < r; ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) a.col(j) -= a.col(i).dot(g * a.col(j)) * a.col(i);
    a.col(j) /= std::sqrt(a.col(j).dot(g * a.col(j)));
  }
  return a;
}

bool gate_ok(const MapBundle& b, const Tolerances& tol, double& residual) {
  residual = gauss_residual(b.frames, b.sff, b.source_curvature, b.target_curvature);
  return residual < tol.gauss && b.sff.symmetry_residual < tol.sff && b.sff.range_residual < tol.sff;
}

const char* kDeterminismScenario = R"({
  "schema_version": "1",
  "scenario": "sphere_in_flat",
  "model": {"kind": "GCSF", "family": "complex", "c": 0, "structure": "standard_complex"},
  "points": {"random": 4},
  "planes": {"mode": "sweep", "data": 6},
  "checks": ["general_cfi", "gcsf_cfi", "corollary", "delta"],
  "seed": 11
})";

}  // namespace

CriterionResult criterion_gauss_gate(std::uint64_t seed) {
  const auto start = Clock::now();
  const Tolerances tol;
  const std::vector<std::string> names = required_builtins();
  struct Job {
    std::string name;
    Vec x;
  };
  std::vector<Job> jobs;
  for (const std::string& name : names) {
    const ScenarioDefinition def = builtin_scenario(name);
    std::mt19937_64 rng(seed);
    for (const Vec& x : def.sample_points(rng, 10)) jobs.push_back({name, x});
  }
  FailureLog log;
  double worst = 0.0;
  std::mutex mu;
  parallel_for(jobs.size(), worker_count(), [&](std::size_t i) {
    try {
      const ScenarioDefinition def = builtin_scenario(jobs[i].name);
      const MapBundle b = evaluate_bundle(def.at(jobs[i].x), tol);
      const double res = gauss_residual(b.frames, b.sff, b.source_curvature, b.target_curvature);
      {
        std::lock_guard<std::mutex> lock(mu);
        worst = std::max(worst, res);
      }
      if (!(res < 1e-3)) log.add(jobs[i].name + " residual " + fmt(res));
    } catch (const GeometryError& e) {
      log.add(jobs[i].name + ": " + e.what());
    }
  });
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  const bool ok = log.count() == 0 && secs < 30.0;
  std::string detail = std::to_string(jobs.size()) + " points over " + std::to_string(names.size()) +
                       " built-ins, max residual " + fmt(worst) + ", " + fmt(secs) + " s";
  if (log.count() > 0) detail += "; " + std::to_string(log.count()) + " failures: " + log.summary();
  return finish(1, "Gauss-equation gate", ok, detail, start);
}

CriterionResult criterion_model_curvature(std::uint64_t seed) {
  const auto start = Clock::now();
  const Tolerances tol;
  struct Case {
    std::string label;
    MetricChart chart;
    SpaceFormModel model;
    double radius;
  };
  std::vector<Case> cases;
  for (double c : {1.0, 0.25})
    for (int n : {3, 4})
      cases.push_back({"sphere" + std::to_string(n) + "(c=" + fmt(c) + ")", charts::stereographic_sphere(n, c),
                       SpaceFormModel{ModelKind::Gcsf, c, 0.0, 0.0, {}}, 0.4});
  for (int s : {1, 2})
    cases.push_back({"CP" + std::to_string(s), charts::fubini_study(s, 1.0),
                     SpaceFormModel{ModelKind::Gcsf, 1.0, 1.0, 0.0, structures::standard_complex(2 * s)}, 0.4});
  cases.push_back({"S3 hopf (1,0,0)", charts::stereographic_sphere(3, 1.0),
                   SpaceFormModel{ModelKind::Gssf, 1.0, 0.0, 0.0, structures::hopf_contact(3, 1.0)}, 0.4});
  double worst = 0.0;
  FailureLog log;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (const Case& c : cases) {
    for (int k = 0; k < 10; ++k) {
      Vec x(c.chart.dim);
      for (int i = 0; i < c.chart.dim; ++i) x[i] = c.radius * ud(rng) / std::sqrt(static_cast<double>(c.chart.dim));
      try {
        const Mat g = checked_metric(c.chart, x, tol);
        const CurvatureTensor numeric = riemann(c.chart, x, tol.fd_step, tol);
        const CurvatureTensor closed = c.model.structure.endomorphism
                                           ? model_curvature(c.model, g, x, tol)
                                           : constant_curvature_tensor(g, c.model.f1);
        const double dev = closed.max_abs_difference(numeric);
        worst = std::max(worst, dev);
        if (!(dev < 1e-4)) log.add(c.label + " deviation " + fmt(dev));
      } catch (const GeometryError& e) {
        log.add(c.label + ": " + e.what());
      }
    }
  }
  std::string detail = std::to_string(cases.size() * 10) + " evaluations, max deviation " + fmt(worst);
  if (log.count() > 0) detail += "; " + log.summary();
  return finish(2, "Model-vs-numeric curvature", log.count() == 0, detail, start);
}

namespace {

struct SweepCase {
  RandomCase rc;
  std::optional<MapBundle> bundle;
  HorizontalPlane plane;
  std::string gate_error;
};

SweepCase prepare_case(std::uint64_t seed, int index) {
  SweepCase sc{random_case(seed, index), std::nullopt, {}, {}};
  const Tolerances tol;
  try {
    MapBundle b = evaluate_bundle(sc.rc.scenario.at(sc.rc.scenario.default_point), tol);
    double res = 0.0;
    if (!gate_ok(b, tol, res)) {
      sc.gate_error = "gate residual " + fmt(res);
      return sc;
    }
    const SpaceFormModel model = resolve_model(sc.rc.model, sc.rc.scenario);
    const double mc = model_consistency(b, model, tol);
    if (!(mc < tol.model_consistency)) {
      sc.gate_error = "model consistency " + fmt(mc);
      return sc;
    }
    if (b.rank() < 3) {
      sc.gate_error = "rank " + std::to_string(b.rank());
      return sc;
    }
    std::mt19937_64 rng(seed + 7919ULL * static_cast<std::uint64_t>(index));
    sc.plane = random_plane(rng, b.rank());
    sc.bundle = std::move(b);
  } catch (const GeometryError& e) {
    sc.gate_error = e.what();
  }
  return sc;
}

}  // namespace

CriterionResult criterion_soundness(std::uint64_t seed, int cases) {
  const auto start = Clock::now();
  const Tolerances tol;
  FailureLog log;
  std::atomic<int> triples{0}, reports{0};
  std::mutex mu;
  double min_slack = std::numeric_limits<double>::infinity();
  parallel_for(static_cast<std::size_t>(cases), worker_count(), [&](std::size_t i) {
    const SweepCase sc = prepare_case(seed, static_cast<int>(i));
    const std::string label = sc.rc.scenario.name;
    if (!sc.bundle) {
      log.add(label + ": " + sc.gate_error);
      return;
    }
    ++triples;
    const MapBundle& b = *sc.bundle;
    try {
      const SpaceFormModel model = resolve_model(sc.rc.model, sc.rc.scenario);
      std::vector<InequalityReport> reps;
      reps.push_back(verify_general_cfi(b, sc.plane, tol));
      reps.push_back(model.kind == ModelKind::Gcsf ? verify_gcsf_cfi(b, model, sc.plane, tol)
                                                   : verify_gssf_cfi(b, model, sc.plane, tol));
      for (const ModelBlock& fam : sc.rc.scenario.realized_families) {
        const AmbientStructure st = resolve_structure(sc.rc.scenario, fam.structure);
        reps.push_back(fam.kind == ModelKind::Gcsf
                           ? verify_corollary_gcsf(b, *fam.family, fam.c, fam.alpha, st, sc.plane, tol)
                           : verify_corollary_gssf(b, *fam.family, fam.c, fam.alpha, *fam.xi_case, st, sc.plane, tol));
      }
      for (const InequalityReport& r : reps) {
        ++reports;
        {
          std::lock_guard<std::mutex> lock(mu);
          min_slack = std::min(min_slack, r.slack);
        }
        if (!r.holds || r.slack < -1e-4) log.add(label + " " + r.name + " slack " + fmt(r.slack));
      }
    } catch (const GeometryError& e) {
      log.add(label + ": " + e.what());
    }
  });
  const bool ok = log.count() == 0 && triples.load() >= 200;
  std::string detail = std::to_string(triples.load()) + " triples, " + std::to_string(reports.load()) +
                       " reports, min slack " + fmt(min_slack);
  if (log.count() > 0) detail += "; " + std::to_string(log.count()) + " failures: " + log.summary();
  return finish(3, "Theorem soundness sweep", ok, detail, start);
}

CriterionResult criterion_equality(std::uint64_t seed) {
  const auto start = Clock::now();
  const Tolerances tol;
  FailureLog log;
  int checked = 0;
  double worst = 0.0;
  for (const std::string name : {"flat_identity_r3", "flat_identity_r4", "flat_identity_r5", "sphere_in_sphere"}) {
    const ScenarioDefinition def = builtin_scenario(name);
    std::mt19937_64 rng(seed);
    for (const Vec& x : def.sample_points(rng, 5)) {
      try {
        const MapBundle b = evaluate_bundle(def.at(x), tol);
        for (const HorizontalPlane& plane : {HorizontalPlane::from_indices(b.rank(), 0, 1), random_plane(rng, b.rank())}) {
          const InequalityReport rep = verify_general_cfi(b, plane, tol);
          ++checked;
          worst = std::max(worst, std::abs(rep.slack));
          if (!(std::abs(rep.slack) < 1e-5)) log.add(name + " slack " + fmt(rep.slack));
          if (!rep.equality_structure || !rep.equality_structure->is_equality_form)
            log.add(name + " equality structure not detected");
        }
      } catch (const GeometryError& e) {
        log.add(name + ": " + e.what());
      }
    }
  }
  std::string detail = std::to_string(checked) + " reports, max |slack| " + fmt(worst);
  if (log.count() > 0) detail += "; " + log.summary();
  return finish(4, "Equality reproduction", log.count() == 0, detail, start);
}

CriterionResult criterion_contractions(std::uint64_t seed, int draws) {
  const auto start = Clock::now();
  const Tolerances tol;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uf(-2.0, 2.0), ux(-0.4, 0.4);
  std::uniform_int_distribution<int> pick(0, 1000);
  double worst_c = 0.0, worst_s = 0.0;
  FailureLog log;
  for (int k = 0; k < draws; ++k) {
    try {
      const int s = 2 + pick(rng) % 2;
      const int n = 2 * s;
      const MetricChart chart = charts::fubini_study(s, 0.5);
      Vec x(n);
      for (int i = 0; i < n; ++i) x[i] = ux(rng) / std::sqrt(static_cast<double>(n));
      const Mat g = checked_metric(chart, x, tol);
      const SpaceFormModel model{ModelKind::Gcsf, uf(rng), uf(rng), 0.0, structures::standard_complex(n)};
      const StructureAt st = model.at(x, g);
      const int r = 3 + pick(rng) % (n - 2);
      const Mat frame = random_frame(rng, g, r, nullptr);
      const CurvatureTensor t = assemble_model_curvature(ModelKind::Gcsf, model.f1, model.f2, 0.0, g, st).restrict_to(frame);
      const Mat p = frame.transpose() * g * st.endomorphism * frame;
      const double lhs = doubled_scalar_curvature(t);
      const double rhs = r * (r - 1.0) * model.f1 + 3.0 * model.f2 * p.squaredNorm();
      const double dev = std::abs(lhs - rhs);
      worst_c = std::max(worst_c, dev);
      if (!(dev < 1e-9)) log.add("GCSF deviation " + fmt(dev));
    } catch (const GeometryError& e) {
      log.add(std::string("GCSF: ") + e.what());
    }
    try {
      const int s = 1 + pick(rng) % 2;
      const int n = 2 * s + 1;
      const MetricChart chart = charts::heisenberg(s);
      Vec x(n);
      for (int i = 0; i < n; ++i) x[i] = 2.0 * ux(rng);
      const Mat g = checked_metric(chart, x, tol);
      const SpaceFormModel model{ModelKind::Gssf, uf(rng), uf(rng), uf(rng), structures::heisenberg_contact(s)};
      const StructureAt st = model.at(x, g);
      validate_structure(ModelKind::Gssf, st, g, tol);
      const int r = 3 + pick(rng) % (n - 2);
      const Mat frame = random_frame(rng, g, r, &st.xi);
      const CurvatureTensor t =
          assemble_model_curvature(ModelKind::Gssf, model.f1, model.f2, model.f3, g, st).restrict_to(frame);
      const Mat p = frame.transpose() * g * st.endomorphism * frame;
      const double lhs = doubled_scalar_curvature(t);
      const double rhs = r * (r - 1.0) * model.f1 + 3.0 * model.f2 * p.squaredNorm() - 2.0 * (r - 1.0) * model.f3;
      const double dev = std::abs(lhs - rhs);
      worst_s = std::max(worst_s, dev);
      if (!(dev < 1e-9)) log.add("GSSF deviation " + fmt(dev));
    } catch (const GeometryError& e) {
      log.add(std::string("GSSF: ") + e.what());
    }
  }
  std::string detail = std::to_string(draws) + " draws each, max deviation GCSF " + fmt(worst_c) + ", GSSF " +
                       fmt(worst_s);
  if (log.count() > 0) detail += "; " + log.summary();
  return finish(5, "Contraction identities", log.count() == 0, detail, start);
}

CriterionResult criterion_delta_oracle(std::uint64_t seed, int tensors) {
  const auto start = Clock::now();
  FailureLog log;
  std::mt19937_64 rng(seed);
  double worst_gap_use = 0.0;
  for (int k = 0; k < tensors; ++k) {
    const CurvatureTensor t = random_algebraic_curvature(rng, 3);
    SearchOptions ex;
    ex.mode = SearchMode::ExhaustiveGrid;
    ex.mode_set = true;
    SearchOptions ms;
    ms.mode = SearchMode::MultistartLocal;
    ms.mode_set = true;
    ms.seed = seed + static_cast<std::uint64_t>(k);
    const PlaneSearchResult a = min_sectional_curvature(t, ex);
    const PlaneSearchResult b = min_sectional_curvature(t, ms);
    const double diff = std::abs(a.min_value - b.min_value);
    worst_gap_use = std::max(worst_gap_use, diff / std::max(a.certified_gap, 1e-300));
    if (!(diff <= a.certified_gap + 1e-6))
      log.add("tensor " + std::to_string(k) + " differs by " + fmt(diff) + " (gap " + fmt(a.certified_gap) + ")");
  }
  double worst_const = 0.0;
  for (int r : {3, 4, 5}) {
    for (double c : {-1.0, 0.0, 1.0}) {
      const CurvatureTensor t = constant_curvature_tensor(Mat::Identity(r, r), c);
      SearchOptions opts;
      opts.seed = seed;
      const PlaneSearchResult res = min_sectional_curvature(t, opts);
      const double delta = delta_h(t, res);
      const double expected = (r * (r - 1.0) / 2.0 - 1.0) * c;
      const double dev = std::abs(delta - expected);
      worst_const = std::max(worst_const, dev);
      if (!(dev < 1e-9)) log.add("r=" + std::to_string(r) + " c=" + fmt(c) + " delta deviation " + fmt(dev));
    }
  }
  std::string detail = std::to_string(tensors) + " tensors, worst |diff|/gap " + fmt(worst_gap_use) +
                       ", constant-curvature deviation " + fmt(worst_const);
  if (log.count() > 0) detail += "; " + log.summary();
  return finish(6, "Delta-invariant oracle", log.count() == 0, detail, start);
}

CriterionResult criterion_delta_bounds(std::uint64_t seed, int cases) {
  const auto start = Clock::now();
  const Tolerances tol;
  FailureLog log;
  std::atomic<int> evaluated{0};
  std::mutex mu;
  double min_slack = std::numeric_limits<double>::infinity();
  parallel_for(static_cast<std::size_t>(cases), worker_count(), [&](std::size_t i) {
    const SweepCase sc = prepare_case(seed, static_cast<int>(i));
    if (!sc.bundle) {
      log.add(sc.rc.scenario.name + ": " + sc.gate_error);
      return;
    }
    try {
      const SpaceFormModel model = resolve_model(sc.rc.model, sc.rc.scenario);
      SearchOptions opts;
      opts.seed = seed + i;
      const DeltaReport rep = model.kind == ModelKind::Gcsf ? verify_delta_bound_gcsf(*sc.bundle, model, opts, tol)
                                                            : verify_delta_bound_gssf(*sc.bundle, model, opts, tol);
      ++evaluated;
      {
        std::lock_guard<std::mutex> lock(mu);
        min_slack = std::min(min_slack, rep.slack);
      }
      if (!(rep.delta <= rep.bound_value + 1e-4))
        log.add(sc.rc.scenario.name + " " + rep.bound_name + " delta " + fmt(rep.delta) + " > " + fmt(rep.bound_value));
    } catch (const GeometryError& e) {
      log.add(sc.rc.scenario.name + ": " + e.what());
    }
  });

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uf(-2.0, 2.0);
  double worst_harmonic = 0.0, worst_branch = 0.0;
  for (int k = 0; k < 200; ++k) {
    const int r = 3 + k % 4;
    const double f1 = uf(rng), f2 = uf(rng), f3 = uf(rng), tau = std::abs(uf(rng));
    for (int br = 1; br <= 2; ++br) {
      worst_harmonic = std::max({worst_harmonic,
                                 std::abs(harmonic_constant_gcsf(r, f1, f2, br) - delta_bound_gcsf(r, 0.0, f1, f2, br)),
                                 std::abs(harmonic_constant_gssf_perp(r, f1, f2, br) -
                                          delta_bound_gssf_perp(r, 0.0, f1, f2, br))});
    }
    for (int br = 1; br <= 4; ++br)
      worst_harmonic = std::max(worst_harmonic, std::abs(harmonic_constant_gssf_range(r, f1, f2, f3, br) -
                                                         delta_bound_gssf_range(r, 0.0, f1, f2, f3, br)));
    worst_branch = std::max({worst_branch,
                             std::abs(delta_bound_gcsf(r, tau, f1, 0.0, 1) - delta_bound_gcsf(r, tau, f1, 0.0, 2)),
                             std::abs(delta_bound_gssf_perp(r, tau, f1, 0.0, 1) - delta_bound_gssf_perp(r, tau, f1, 0.0, 2)),
                             std::abs(delta_bound_gssf_range(r, tau, f1, 0.0, f3, 1) -
                                      delta_bound_gssf_range(r, tau, f1, 0.0, f3, 2)),
                             std::abs(delta_bound_gssf_range(r, tau, f1, 0.0, f3, 3) -
                                      delta_bound_gssf_range(r, tau, f1, 0.0, f3, 4)),
                             std::abs(delta_bound_gssf_range(r, tau, f1, f2, 0.0, 1) -
                                      delta_bound_gssf_range(r, tau, f1, f2, 0.0, 3)),
                             std::abs(delta_bound_gssf_range(r, tau, f1, f2, 0.0, 2) -
                                      delta_bound_gssf_range(r, tau, f1, f2, 0.0, 4))});
  }
  if (!(worst_harmonic <= 1e-12)) log.add("harmonic constants deviate by " + fmt(worst_harmonic));
  if (!(worst_branch <= 1e-12)) log.add("branch continuity deviates by " + fmt(worst_branch));
  std::string detail = std::to_string(evaluated.load()) + " bounds, min slack " + fmt(min_slack) +
                       ", harmonic deviation " + fmt(worst_harmonic) + ", branch deviation " + fmt(worst_branch);
  if (log.count() > 0) detail += "; " + std::to_string(log.count()) + " failures: " + log.summary();
  return finish(7, "Delta bound soundness", log.count() == 0 && evaluated.load() >= 200, detail, start);
}

CriterionResult criterion_hygiene(std::uint64_t seed) {
  const auto start = Clock::now();
  const Tolerances tol;
  FailureLog log;

  // Exact values on the flat polar chart.
  const MetricChart polar = charts::polar_plane();
  double polar_err = 0.0;
  for (double rad : {0.5, 1.0, 2.0}) {
    Vec x(2);
    x << rad, 0.3;
    const Christoffel c = christoffel(polar, x, tol.fd_step, tol);
    polar_err = std::max({polar_err, std::abs(c(0, 1, 1) + rad), std::abs(c(1, 0, 1) - 1.0 / rad),
                          std::abs(c(1, 1, 0) - 1.0 / rad), std::abs(c(0, 0, 0)), std::abs(c(1, 0, 0))});
  }
  if (!(polar_err < 1e-6)) log.add("polar chart Christoffel error " + fmt(polar_err));

  // Convergence order on the geodesic polar sphere, where the metric is not polynomial.
  const MetricChart sphere = charts::geodesic_polar_sphere();
  Vec x(2);
  x << 0.9, 0.4;
  auto error_at = [&](double h) {
    const Christoffel c = christoffel(sphere, x, h, tol);
    return std::max(std::abs(c(0, 1, 1) + std::sin(x[0]) * std::cos(x[0])),
                    std::abs(c(1, 0, 1) - std::cos(x[0]) / std::sin(x[0])));
  };
  const double e1 = error_at(1e-2), e2 = error_at(5e-3);
  const double ratio = e1 / e2;
  if (!(ratio >= 3.0)) log.add("convergence ratio " + fmt(ratio));

  // Symmetries of every chart curvature tensor the catalog produces.
  double worst_sym = 0.0;
  int tensors = 0;
  std::mt19937_64 rng(seed);
  for (const CatalogListing& l : list_builtins()) {
    const ScenarioDefinition def = builtin_scenario(l.name);
    for (const Vec& p : def.sample_points(rng, 10)) {
      try {
        const MapBundle b = evaluate_bundle(def.at(p), tol);
        for (const CurvatureTensor* t : {&b.source_curvature, &b.target_curvature}) {
          worst_sym = std::max(worst_sym, symmetry_residuals(*t).max());
          ++tensors;
        }
      } catch (const GeometryError& e) {
        if (e.code() != ErrorCode::RankDeficient) log.add(l.name + ": " + e.what());
      }
    }
  }
  if (!(worst_sym < 1e-6)) log.add("curvature symmetry residual " + fmt(worst_sym));
  std::string detail = "polar error " + fmt(polar_err) + ", convergence ratio " + fmt(ratio) + " (" + fmt(e1) +
                       " -> " + fmt(e2) + "), " + std::to_string(tensors) + " tensors, max symmetry residual " +
                       fmt(worst_sym);
  if (log.count() > 0) detail += "; " + log.summary();
  return finish(8, "Numerical hygiene", log.count() == 0, detail, start);
}

CriterionResult criterion_determinism(std::uint64_t seed) {
  const auto start = Clock::now();
  const ScenarioFile sf = parse_scenario(kDeterminismScenario);
  RunOptions opts;
  opts.seed = seed;
  const std::string a = render_json(run_checks(sf, opts));
  opts.threads = 1;
  const std::string b = render_json(run_checks(sf, opts));
  const std::string c = render_json(parse_report_json(a));
  const bool ok = a == b && a == c;
  std::string detail = std::to_string(a.size()) + " bytes; parallel vs serial " + (a == b ? "identical" : "DIFFERENT") +
                       ", reload round trip " + (a == c ? "identical" : "DIFFERENT");
  return finish(9, "Determinism", ok, detail, start);
}

CriterionResult property_catalog(std::uint64_t seed) {
  const auto start = Clock::now();
  const Tolerances tol;
  FailureLog log;
  for (const CatalogListing& l : list_builtins()) {
    const ScenarioDefinition def = builtin_scenario(l.name);
    std::mt19937_64 rng(seed);
    for (const Vec& x : def.sample_points(rng, 3)) {
      try {
        const MapBundle b = evaluate_bundle(def.at(x), tol);
        double res = 0.0;
        if (!gate_ok(b, tol, res)) log.add(l.name + " gate " + fmt(res));
        const HorizontalPlane plane{Vec::Unit(b.rank(), 0), Vec::Unit(b.rank(), std::min(1, b.rank() - 1)), "1-2"};
        if (l.name == "projection_plumbing") {
          try {
            static_cast<void>(verify_general_cfi(b, plane, tol));
            log.add("projection_plumbing accepted by general_cfi");
          } catch (const GeometryError& e) {
            if (e.code() != ErrorCode::RankDeficient) log.add("projection_plumbing: " + std::string(e.what()));
          }
        }
        if (def.suggested_model) {
          const SpaceFormModel m = resolve_model(*def.suggested_model, def);
          const double mc = model_consistency(b, m, tol);
          if (!(mc < tol.model_consistency)) log.add(l.name + " model consistency " + fmt(mc));
        }
      } catch (const GeometryError& e) {
        log.add(l.name + ": " + e.what());
      }
    }
  }
  std::string detail = std::to_string(list_builtins().size()) + " built-ins";
  if (log.count() > 0) detail += "; " + log.summary();
  return finish(10, "Catalog completeness", log.count() == 0, detail, start);
}

CriterionResult property_plane_swap(std::uint64_t seed) {
  const auto start = Clock::now();
  const Tolerances tol;
  FailureLog log;
  double worst = 0.0;
  for (int i = 0; i < 24; ++i) {
    const SweepCase sc = prepare_case(seed, i);
    if (!sc.bundle) continue;
    const HorizontalPlane swapped{sc.plane.v, sc.plane.u, "swapped"};
    const double a = verify_general_cfi(*sc.bundle, sc.plane, tol).slack;
    const double b = verify_general_cfi(*sc.bundle, swapped, tol).slack;
    worst = std::max(worst, std::abs(a - b));
  }
  if (!(worst <= 1e-12)) log.add("swap changes slack by " + fmt(worst));
  return finish(11, "Plane-swap invariance", log.count() == 0, "max change " + fmt(worst), start);
}

CriterionResult property_isometry(std::uint64_t seed) {
  const auto start = Clock::now();
  const Tolerances tol;
  double worst = 0.0;
  int maps = 0;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 24; ++i) {
    const RandomCase rc = random_case(seed, i);
    try {
      const SplitFrames f = split_frames(rc.scenario.at(rc.scenario.default_point), tol.fd_step, tol);
      ++maps;
      for (int k = 0; k < 20; ++k) {
        std::normal_distribution<double> nd(0.0, 1.0);
        Vec a(f.rank()), b(f.rank());
        for (int j = 0; j < f.rank(); ++j) {
          a[j] = nd(rng);
          b[j] = nd(rng);
        }
        const Vec x = f.horizontal * a, y = f.horizontal * b;
        const double src = x.dot(f.source_metric * y);
        const double tgt = (f.push * x).dot(f.target_metric * (f.push * y));
        worst = std::max(worst, std::abs(src - tgt) / std::max(1.0, std::abs(src)));
      }
    } catch (const GeometryError&) {
    }
  }
  const bool ok = worst < tol.isometry && maps > 0;
  return finish(12, "Riemannian-map isometry identity", ok,
                std::to_string(maps) + " maps x 20 pairs, max defect " + fmt(worst), start);
}

CriterionResult property_scalar_identity(std::uint64_t seed) {
  const auto start = Clock::now();
  const Tolerances tol;
  double worst = 0.0;
  FailureLog log;
  for (const std::string& name : required_builtins()) {
    const ScenarioDefinition def = builtin_scenario(name);
    std::mt19937_64 rng(seed);
    for (const Vec& x : def.sample_points(rng, 3)) {
      try {
        const MapBundle b = evaluate_bundle(def.at(x), tol);
        if (b.rank() < 3) continue;
        const InequalityReport rep = verify_general_cfi(b, HorizontalPlane::from_indices(b.rank(), 0, 1), tol);
        worst = std::max(worst, std::abs(rep.values.at("scalar_identity_residual")));
      } catch (const GeometryError& e) {
        log.add(name + ": " + e.what());
      }
    }
  }
  if (!(worst < 10.0 * tol.gauss)) log.add("identity residual " + fmt(worst));
  return finish(13, "Scalar-curvature identity", log.count() == 0, "max residual " + fmt(worst), start);
}

CriterionResult property_model_consistency(std::uint64_t seed) {
  const auto start = Clock::now();
  const Tolerances tol;
  double worst = 0.0;
  int compared = 0;
  FailureLog log;
  for (int i = 0; i < 48; ++i) {
    const SweepCase sc = prepare_case(seed, i);
    if (!sc.bundle) continue;
    try {
      const SpaceFormModel model = resolve_model(sc.rc.model, sc.rc.scenario);
      const InequalityReport g = verify_general_cfi(*sc.bundle, sc.plane, tol);
      const InequalityReport m = model.kind == ModelKind::Gcsf ? verify_gcsf_cfi(*sc.bundle, model, sc.plane, tol)
                                                               : verify_gssf_cfi(*sc.bundle, model, sc.plane, tol);
      worst = std::max(worst, std::abs(g.rhs - m.rhs));
      ++compared;
    } catch (const GeometryError& e) {
      log.add(sc.rc.scenario.name + ": " + e.what());
    }
  }
  if (!(worst < 1e-3)) log.add("rhs gap " + fmt(worst));
  return finish(14, "Numeric-versus-model rhs", log.count() == 0 && compared > 0,
                std::to_string(compared) + " pairs, max rhs gap " + fmt(worst) +
                    (log.count() ? "; " + log.summary() : ""),
                start);
}

std::vector<std::function<CriterionResult()>> acceptance_suite(std::uint64_t seed) {
  return {[=] { return criterion_gauss_gate(seed); },    [=] { return criterion_model_curvature(seed); },
          [=] { return criterion_soundness(seed); },     [=] { return criterion_equality(seed); },
          [=] { return criterion_contractions(seed); },  [=] { return criterion_delta_oracle(seed); },
          [=] { return criterion_delta_bounds(seed); },  [=] { return criterion_hygiene(seed); },
          [=] { return criterion_determinism(seed); }};
}

std::vector<std::function<CriterionResult()>> property_suite(std::uint64_t seed) {
  return {[=] { return property_catalog(seed); }, [=] { return property_plane_swap(seed); },
          [=] { return property_isometry(seed); }, [=] { return property_scalar_identity(seed); },
          [=] { return property_model_consistency(seed); }};
}

std::string format_result(const CriterionResult& r) {
  return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.title + ": " + r.detail;
}

}  // namespace chenmap

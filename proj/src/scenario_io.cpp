#include "chenmap/scenario_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "chenmap/errors.hpp"
#include "chenmap/polynomial.hpp"
#include "json.hpp"

namespace chenmap {

namespace {

using json = nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void schema(const std::string& field, const std::string& what) {
  fail(ErrorCode::SchemaError, field + ": " + what);
}

const std::vector<std::pair<const char*, double Tolerances::*>>& tolerance_fields() {
  static const std::vector<std::pair<const char*, double Tolerances::*>> fields = {
      {"degenerate_plane", &Tolerances::degenerate_plane},
      {"equality", &Tolerances::equality},
      {"fd_step", &Tolerances::fd_step},
      {"frame_orthonormal", &Tolerances::frame_orthonormal},
      {"gauss", &Tolerances::gauss},
      {"harmonic", &Tolerances::harmonic},
      {"isometry", &Tolerances::isometry},
      {"metric_condition", &Tolerances::metric_condition},
      {"model_consistency", &Tolerances::model_consistency},
      {"pd_pivot", &Tolerances::pd_pivot},
      {"rank_relative", &Tolerances::rank_relative},
      {"sff", &Tolerances::sff},
      {"slack", &Tolerances::slack},
      {"structure", &Tolerances::structure},
      {"symmetry", &Tolerances::symmetry},
      {"xi", &Tolerances::xi},
  };
  return fields;
}

const json& require(const json& obj, const std::string& key, const std::string& field) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema(field + "." + key, "missing");
  return *it;
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) schema(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema(field, "expected a finite number");
  return v;
}

int as_int(const json& j, const std::string& field, int lo, int hi) {
  if (!j.is_number_integer()) schema(field, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi) schema(field, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::string as_string(const json& j, const std::string& field) {
  if (!j.is_string()) schema(field, "expected a string");
  return j.get<std::string>();
}

void only_keys(const json& obj, const std::string& field, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) schema(field, "expected an object");
  for (const auto& item : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; }))
      schema(field + "." + item.key(), "unknown field");
  }
}

double number_or(const json& obj, const std::string& key, const std::string& field, double fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, field + "." + key);
}

Vec as_vector(const json& j, const std::string& field) {
  if (!j.is_array()) schema(field, "expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = as_number(j[i], field + "[" + std::to_string(i) + "]");
  return v;
}

Polynomial parse_polynomial(const json& j, int vars, const std::string& field) {
  if (!j.is_array()) schema(field, "expected an array of terms [coefficient, exponents...]");
  std::vector<Monomial> terms;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string tf = field + "[" + std::to_string(t) + "]";
    const json& term = j[t];
    if (!term.is_array() || static_cast<int>(term.size()) != vars + 1)
      schema(tf, "expected [coefficient, " + std::to_string(vars) + " exponents]");
    Monomial m;
    m.coefficient = as_number(term[0], tf + "[0]");
    for (int i = 0; i < vars; ++i)
      m.exponents.push_back(as_int(term[static_cast<std::size_t>(i + 1)], tf, 0, kMaxPolynomialDegree));
    if (m.degree() > kMaxPolynomialDegree) schema(tf, "degree exceeds " + std::to_string(kMaxPolynomialDegree));
    terms.push_back(std::move(m));
  }
  return Polynomial(vars, std::move(terms));
}

struct ChartInfo {
  MetricChart chart;
  std::optional<double> sphere_c;
  std::optional<int> heisenberg_s;
};

ChartInfo parse_chart(const json& j, const std::string& field) {
  if (!j.is_object()) schema(field, "expected an object");
  ChartInfo info;
  if (j.contains("polynomial")) {
    only_keys(j, field, {"polynomial", "name"});
    const json& p = j["polynomial"];
    only_keys(p, field + ".polynomial", {"dim", "metric"});
    const int dim = as_int(require(p, "dim", field + ".polynomial"), field + ".polynomial.dim", 1, 12);
    const json& m = require(p, "metric", field + ".polynomial");
    if (!m.is_array() || static_cast<int>(m.size()) != dim) schema(field + ".polynomial.metric", "expected a square table");
    std::vector<std::vector<Polynomial>> entries;
    for (int a = 0; a < dim; ++a) {
      const json& row = m[static_cast<std::size_t>(a)];
      const std::string rf = field + ".polynomial.metric[" + std::to_string(a) + "]";
      if (!row.is_array() || static_cast<int>(row.size()) != dim) schema(rf, "expected a square table");
      std::vector<Polynomial> prow;
      for (int b = 0; b < dim; ++b)
        prow.push_back(parse_polynomial(row[static_cast<std::size_t>(b)], dim, rf + "[" + std::to_string(b) + "]"));
      entries.push_back(std::move(prow));
    }
    const std::string name = j.contains("name") ? as_string(j["name"], field + ".name") : "polynomial";
    info.chart = polynomial_chart(name, dim, entries);
    return info;
  }
  const std::string kind = as_string(require(j, "builtin", field), field + ".builtin");
  if (kind == "euclidean") {
    only_keys(j, field, {"builtin", "dim"});
    info.chart = charts::euclidean(as_int(require(j, "dim", field), field + ".dim", 1, 12));
  } else if (kind == "sphere") {
    only_keys(j, field, {"builtin", "dim", "c"});
    const int dim = as_int(require(j, "dim", field), field + ".dim", 1, 12);
    const double c = as_number(require(j, "c", field), field + ".c");
    info.chart = charts::stereographic_sphere(dim, c);
    if (c > 0.0) info.sphere_c = c;
  } else if (kind == "fubini_study") {
    only_keys(j, field, {"builtin", "s", "c"});
    info.chart = charts::fubini_study(as_int(require(j, "s", field), field + ".s", 1, 6),
                                      as_number(require(j, "c", field), field + ".c"));
  } else if (kind == "heisenberg") {
    only_keys(j, field, {"builtin", "s"});
    const int s = as_int(require(j, "s", field), field + ".s", 1, 5);
    info.chart = charts::heisenberg(s);
    info.heisenberg_s = s;
  } else if (kind == "graph_sphere2") {
    only_keys(j, field, {"builtin"});
    info.chart = charts::graph_sphere2();
  } else if (kind == "polar_plane") {
    only_keys(j, field, {"builtin"});
    info.chart = charts::polar_plane();
  } else if (kind == "geodesic_polar_sphere") {
    only_keys(j, field, {"builtin"});
    info.chart = charts::geodesic_polar_sphere();
  } else if (kind == "warped_product") {
    only_keys(j, field, {"builtin", "fiber", "warp", "rate"});
    const ChartInfo fiber = parse_chart(require(j, "fiber", field), field + ".fiber");
    const std::string w = as_string(require(j, "warp", field), field + ".warp");
    charts::Warp warp;
    if (w == "constant") warp = charts::warp_constant();
    else if (w == "cosh") warp = charts::warp_cosh();
    else if (w == "cos") warp = charts::warp_cos();
    else if (w == "exp") warp = charts::warp_exp(number_or(j, "rate", field, 1.0));
    else fail(ErrorCode::UnknownBuiltin, field + ".warp: unknown warp '" + w + "'");
    info.chart = charts::warped_line_product(fiber.chart, warp);
  } else {
    fail(ErrorCode::UnknownBuiltin, field + ".builtin: unknown chart family '" + kind + "'");
  }
  return info;
}

SmoothMap parse_map(const json& j, int m, int n, const std::string& field) {
  if (!j.is_object()) schema(field, "expected an object");
  auto linear = [](const Mat& w) {
    SmoothMap s;
    s.source_dim = static_cast<int>(w.cols());
    s.target_dim = static_cast<int>(w.rows());
    s.value = [w](const Vec& x) { return Vec(w * x); };
    s.jacobian = [w](const Vec&) { return w; };
    return s;
  };
  if (j.contains("polynomial")) {
    only_keys(j, field, {"polynomial"});
    const json& comps = j["polynomial"];
    if (!comps.is_array() || static_cast<int>(comps.size()) != n)
      schema(field + ".polynomial", "expected " + std::to_string(n) + " components");
    std::vector<Polynomial> ps;
    for (int i = 0; i < n; ++i)
      ps.push_back(parse_polynomial(comps[static_cast<std::size_t>(i)], m,
                                    field + ".polynomial[" + std::to_string(i) + "]"));
    return polynomial_map(m, ps);
  }
  if (j.contains("linear")) {
    only_keys(j, field, {"linear"});
    const json& rows = j["linear"];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) schema(field + ".linear", "expected " + std::to_string(n) + " rows");
    Mat w(n, m);
    for (int i = 0; i < n; ++i) {
      const Vec row = as_vector(rows[static_cast<std::size_t>(i)], field + ".linear[" + std::to_string(i) + "]");
      if (row.size() != m) schema(field + ".linear[" + std::to_string(i) + "]", "expected " + std::to_string(m) + " entries");
      w.row(i) = row.transpose();
    }
    return linear(w);
  }
  const std::string kind = as_string(require(j, "builtin", field), field + ".builtin");
  if (kind == "identity") {
    only_keys(j, field, {"builtin"});
    if (m != n) schema(field, "identity needs equal dimensions");
    return linear(Mat::Identity(n, n));
  }
  if (kind == "inclusion") {
    only_keys(j, field, {"builtin"});
    if (m > n) schema(field, "inclusion needs source dimension <= target dimension");
    return linear(Mat::Identity(n, m));
  }
  if (kind == "projection") {
    only_keys(j, field, {"builtin"});
    if (m < n) schema(field, "projection needs source dimension >= target dimension");
    return linear(Mat::Identity(n, m));
  }
  if (kind == "inverse_stereographic") {
    only_keys(j, field, {"builtin", "c"});
    if (n != m + 1) schema(field, "inverse_stereographic maps dimension m to m + 1");
    return charts::inverse_stereographic(m, number_or(j, "c", field, 1.0));
  }
  if (kind == "graph_sphere2") {
    only_keys(j, field, {"builtin"});
    if (m != 2 || n != 3) schema(field, "graph_sphere2 maps dimension 2 to 3");
    SmoothMap s;
    s.source_dim = 2;
    s.target_dim = 3;
    s.value = charts::graph_sphere2_embedding;
    s.jacobian = charts::graph_sphere2_embedding_jacobian;
    return s;
  }
  fail(ErrorCode::UnknownBuiltin, field + ".builtin: unknown map '" + kind + "'");
}

ScenarioDefinition parse_inline_scenario(const json& j) {
  only_keys(j, "scenario", {"name", "source", "target", "map", "base_point", "declared_rank_min", "point_radius"});
  ScenarioDefinition d;
  d.name = j.contains("name") ? as_string(j["name"], "scenario.name") : "inline";
  d.description = "inline scenario";
  const ChartInfo src = parse_chart(require(j, "source", "scenario"), "scenario.source");
  const ChartInfo tgt = parse_chart(require(j, "target", "scenario"), "scenario.target");
  d.source = src.chart;
  d.target = tgt.chart;
  d.map = parse_map(require(j, "map", "scenario"), d.source.dim, d.target.dim, "scenario.map");
  d.default_point = Vec::Zero(d.source.dim);
  if (j.contains("base_point")) {
    d.default_point = as_vector(j["base_point"], "scenario.base_point");
    if (d.default_point.size() != d.source.dim) schema("scenario.base_point", "wrong dimension");
  }
  if (j.contains("declared_rank_min"))
    d.declared_rank_min = as_int(j["declared_rank_min"], "scenario.declared_rank_min", 1, 12);
  d.point_radius = number_or(j, "point_radius", "scenario", 0.3);
  const int n = d.target.dim;
  if (n % 2 == 0) d.structures["standard_complex"] = structures::standard_complex(n);
  else if (n > 1) d.structures["product"] = structures::product_contact(structures::standard_complex(n - 1), n - 1);
  if (tgt.sphere_c && n % 2 == 1) d.structures["hopf"] = structures::hopf_contact(n, *tgt.sphere_c);
  if (tgt.heisenberg_s) d.structures["heisenberg"] = structures::heisenberg_contact(*tgt.heisenberg_s);
  return d;
}

ModelBlock parse_model(const json& j) {
  only_keys(j, "model", {"kind", "family", "c", "alpha", "f1", "f2", "f3", "structure", "xi_case"});
  ModelBlock m;
  std::string kind = as_string(require(j, "kind", "model"), "model.kind");
  std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (kind == "GCSF") m.kind = ModelKind::Gcsf;
  else if (kind == "GSSF") m.kind = ModelKind::Gssf;
  else schema("model.kind", "expected GCSF or GSSF");
  const bool has_family = j.contains("family");
  const bool has_f = j.contains("f1") || j.contains("f2") || j.contains("f3");
  if (has_family == has_f) schema("model", "exactly one of family (with c, alpha) or f1, f2[, f3] is required");
  if (has_family) {
    m.family = as_string(j["family"], "model.family");
    m.c = number_or(j, "c", "model", 0.0);
    m.alpha = number_or(j, "alpha", "model", 0.0);
    if (!is_complex_family(*m.family) && !is_contact_family(*m.family))
      fail(ErrorCode::UnknownFamily, "model.family: unknown space-form family '" + *m.family + "'");
  } else {
    if (j.contains("c") || j.contains("alpha")) schema("model", "c and alpha belong to a family model");
    m.f1 = as_number(require(j, "f1", "model"), "model.f1");
    m.f2 = as_number(require(j, "f2", "model"), "model.f2");
    if (j.contains("f3")) {
      if (m.kind == ModelKind::Gcsf) schema("model.f3", "only GSSF models take f3");
      m.f3 = as_number(j["f3"], "model.f3");
    }
  }
  if (j.contains("structure")) m.structure = as_string(j["structure"], "model.structure");
  if (j.contains("xi_case")) {
    const std::string xi = as_string(j["xi_case"], "model.xi_case");
    if (xi == "range") m.xi_case = XiPosition::InRange;
    else if (xi == "perp") m.xi_case = XiPosition::InRangePerp;
    else schema("model.xi_case", "expected range or perp");
  }
  static_cast<void>(m.coefficients());
  return m;
}

PlaneSpec parse_planes(const json& j) {
  only_keys(j, "planes", {"mode", "data"});
  PlaneSpec p;
  const std::string mode = as_string(require(j, "mode", "planes"), "planes.mode");
  if (mode == "indices") {
    p.mode = PlaneMode::Indices;
    if (j.contains("data")) {
      const json& d = j["data"];
      if (!d.is_array() || d.empty()) schema("planes.data", "expected a non-empty list of index pairs");
      p.indices.clear();
      for (std::size_t i = 0; i < d.size(); ++i) {
        const std::string f = "planes.data[" + std::to_string(i) + "]";
        if (!d[i].is_array() || d[i].size() != 2) schema(f, "expected a pair [i, j]");
        const int a = as_int(d[i][0], f, 1, 64), b = as_int(d[i][1], f, 1, 64);
        if (a == b) schema(f, "indices must differ");
        p.indices.emplace_back(a, b);
      }
    }
  } else if (mode == "angles") {
    p.mode = PlaneMode::Angles;
    const json& d = require(j, "data", "planes");
    if (!d.is_array() || d.empty()) schema("planes.data", "expected a non-empty list of angle lists");
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Vec a = as_vector(d[i], "planes.data[" + std::to_string(i) + "]");
      p.angles.emplace_back(a.data(), a.data() + a.size());
    }
  } else if (mode == "sweep") {
    p.mode = PlaneMode::Sweep;
    if (j.contains("data")) p.sweep_count = as_int(j["data"], "planes.data", 1, 100000);
  } else {
    schema("planes.mode", "expected indices, angles or sweep");
  }
  return p;
}

SearchOptions parse_search(const json& j) {
  only_keys(j, "delta", {"mode", "budget"});
  SearchOptions s;
  if (j.contains("mode")) {
    const std::string mode = as_string(j["mode"], "delta.mode");
    if (mode == "exhaustive") s.mode = SearchMode::ExhaustiveGrid;
    else if (mode == "multistart") s.mode = SearchMode::MultistartLocal;
    else schema("delta.mode", "expected exhaustive or multistart");
    s.mode_set = true;
  }
  if (j.contains("budget")) s.budget = as_int(j["budget"], "delta.budget", 1, 1 << 20);
  return s;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {"general_cfi", "gcsf_cfi", "gssf_cfi", "corollary", "delta", "harmonic"};
  return names;
}

bool check_needs_model(const std::string& check) { return check != "general_cfi"; }

ScenarioFile parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  only_keys(j, "(root)", {"schema_version", "scenario", "model", "points", "planes", "checks", "tolerances", "seed", "delta"});
  ScenarioFile sf;
  sf.schema_version = as_string(require(j, "schema_version", "(root)"), "schema_version");
  if (sf.schema_version != kSchemaVersion) schema("schema_version", "unsupported version '" + sf.schema_version + "'");

  const json& sc = require(j, "scenario", "(root)");
  if (sc.is_string()) {
    sf.definition = builtin_scenario(sc.get<std::string>());
  } else if (sc.is_object()) {
    sf.definition = parse_inline_scenario(sc);
  } else {
    schema("scenario", "expected a built-in name or an inline definition");
  }
  sf.scenario_name = sf.definition.name;

  if (j.contains("model")) {
    sf.model = parse_model(j["model"]);
    if (sf.model->structure != "none" && !sf.definition.structures.count(sf.model->structure))
      fail(ErrorCode::UnknownBuiltin, "model.structure: '" + sf.model->structure + "' is not available for " + sf.scenario_name);
  }

  const json& checks = require(j, "checks", "(root)");
  if (!checks.is_array() || checks.empty()) schema("checks", "expected a non-empty list");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const std::string f = "checks[" + std::to_string(i) + "]";
    const std::string name = as_string(checks[i], f);
    const auto& known = known_checks();
    if (std::find(known.begin(), known.end(), name) == known.end()) schema(f, "unknown check '" + name + "'");
    if (!seen.insert(name).second) schema(f, "duplicate check '" + name + "'");
    if (check_needs_model(name) && !sf.model) schema(f, "check '" + name + "' needs a model block");
    if (name == "gcsf_cfi" && sf.model->kind != ModelKind::Gcsf) schema(f, "gcsf_cfi needs a GCSF model");
    if (name == "gssf_cfi" && sf.model->kind != ModelKind::Gssf) schema(f, "gssf_cfi needs a GSSF model");
    if (name == "corollary" && !sf.model->family) schema(f, "corollary needs a model family");
    sf.checks.push_back(name);
  }

  if (j.contains("points")) {
    const json& p = j["points"];
    if (p.is_object()) {
      only_keys(p, "points", {"random"});
      sf.random_points = as_int(require(p, "random", "points"), "points.random", 1, 100000);
    } else if (p.is_array() && !p.empty()) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        const std::string f = "points[" + std::to_string(i) + "]";
        Vec x = as_vector(p[i], f);
        if (x.size() != sf.definition.source.dim)
          schema(f, "expected " + std::to_string(sf.definition.source.dim) + " coordinates");
        sf.points.push_back(std::move(x));
      }
    } else {
      schema("points", "expected a non-empty list of points or {\"random\": N}");
    }
  } else {
    sf.points.push_back(sf.definition.default_point);
  }

  if (j.contains("planes")) sf.planes = parse_planes(j["planes"]);
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) schema("seed", "expected an unsigned integer");
    sf.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) schema("tolerances", "expected an object");
    for (const auto& item : t.items()) {
      const auto& fields = tolerance_fields();
      const auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return item.key() == f.first; });
      if (it == fields.end()) schema("tolerances." + item.key(), "unknown tolerance");
      const double v = as_number(item.value(), "tolerances." + item.key());
      if (!(v > 0.0)) schema("tolerances." + item.key(), "must be positive");
      sf.tolerances.*(it->second) = v;
    }
  }
  if (j.contains("delta")) sf.search = parse_search(j["delta"]);
  return sf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioFile load_scenario(const std::string& path) { return parse_scenario(read_text_file(path)); }

Summary RunReport::summary() const {
  Summary s;
  bool any_slack = false;
  for (const Record& r : records) {
    ++s.records;
    if (r.status == "error") {
      ++s.errors;
      s.failures.push_back(r.name + "@" + std::to_string(r.point_index) + "/" + r.plane_id + ": " + r.error);
      continue;
    }
    if (r.status == "skipped") {
      ++s.skipped;
      s.failures.push_back(r.name + "@" + std::to_string(r.point_index) + "/" + r.plane_id + ": SKIPPED " + r.error);
      continue;
    }
    if (r.holds) ++s.holds;
    else {
      ++s.violations;
      s.failures.push_back(r.name + "@" + std::to_string(r.point_index) + "/" + r.plane_id + ": violated");
    }
    if (r.equality) ++s.equality;
    if (std::isfinite(r.slack)) {
      s.min_slack = any_slack ? std::min(s.min_slack, r.slack) : r.slack;
      any_slack = true;
    }
  }
  return s;
}

namespace {

json to_json(const Tolerances& t) {
  json j = json::object();
  for (const auto& [name, member] : tolerance_fields()) j[name] = t.*member;
  return j;
}

Tolerances tolerances_from(const json& j) {
  Tolerances t;
  for (const auto& [name, member] : tolerance_fields())
    if (j.contains(name)) t.*member = j[name].get<double>();
  return t;
}

double number_or_nan(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

json record_json(const Record& r) {
  json d = json::object();
  d["values"] = r.values;
  d["flags"] = r.flags;
  d["labels"] = r.labels;
  d["notes"] = r.notes;
  d["equality_violations"] = r.equality_violations;
  return json{{"name", r.name},       {"check", r.check},     {"point_index", r.point_index},
              {"plane_id", r.plane_id}, {"lhs", r.lhs},       {"rhs", r.rhs},
              {"slack", r.slack},     {"holds", r.holds},     {"equality", r.equality},
              {"status", r.status},   {"error", r.error},     {"message", r.message},
              {"diagnostics", d}};
}

Record record_from(const json& j) {
  Record r;
  r.name = j.at("name").get<std::string>();
  r.check = j.at("check").get<std::string>();
  r.point_index = j.at("point_index").get<int>();
  r.plane_id = j.at("plane_id").get<std::string>();
  r.lhs = number_or_nan(j.at("lhs"));
  r.rhs = number_or_nan(j.at("rhs"));
  r.slack = number_or_nan(j.at("slack"));
  r.holds = j.at("holds").get<bool>();
  r.equality = j.at("equality").get<bool>();
  r.status = j.at("status").get<std::string>();
  r.error = j.at("error").get<std::string>();
  r.message = j.at("message").get<std::string>();
  const json& d = j.at("diagnostics");
  for (const auto& item : d.at("values").items()) r.values[item.key()] = number_or_nan(item.value());
  r.flags = d.at("flags").get<std::map<std::string, bool>>();
  r.labels = d.at("labels").get<std::map<std::string, std::string>>();
  r.notes = d.at("notes").get<std::vector<std::string>>();
  r.equality_violations = d.at("equality_violations").get<std::vector<std::string>>();
  return r;
}

json gate_json(const GateResult& g) {
  return json{{"point_index", g.point_index}, {"point", g.point},
              {"rank", g.rank},               {"gauss_residual", g.gauss_residual},
              {"sff_symmetry", g.sff_symmetry}, {"sff_range", g.sff_range},
              {"model_consistency", g.model_consistency}, {"passed", g.passed},
              {"error", g.error},             {"message", g.message}};
}

GateResult gate_from(const json& j) {
  GateResult g;
  g.point_index = j.at("point_index").get<int>();
  for (const json& v : j.at("point")) g.point.push_back(number_or_nan(v));
  g.rank = j.at("rank").get<int>();
  g.gauss_residual = number_or_nan(j.at("gauss_residual"));
  g.sff_symmetry = number_or_nan(j.at("sff_symmetry"));
  g.sff_range = number_or_nan(j.at("sff_range"));
  g.model_consistency = number_or_nan(j.at("model_consistency"));
  g.passed = j.at("passed").get<bool>();
  g.error = j.at("error").get<std::string>();
  g.message = j.at("message").get<std::string>();
  return g;
}

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string render_json(const RunReport& report) {
  const Summary s = report.summary();
  json records = json::array();
  for (const Record& r : report.records) records.push_back(record_json(r));
  json gates = json::array();
  for (const GateResult& g : report.gates) gates.push_back(gate_json(g));
  const Provenance& p = report.provenance;
  json prov{{"seed", p.seed},
            {"tolerances", to_json(p.tolerances)},
            {"tolerance_scale", p.tolerance_scale},
            {"tool", p.tool},
            {"version", p.version},
            {"schema_version", p.schema_version},
            {"scenario", p.scenario},
            {"simd", p.simd},
            {"checks", p.checks}};
  if (p.wall_time_s) prov["wall_time_s"] = *p.wall_time_s;
  json summary{{"records", s.records},   {"holds", s.holds},       {"violations", s.violations},
               {"errors", s.errors},     {"skipped", s.skipped},   {"equality", s.equality},
               {"min_slack", s.min_slack}, {"failures", s.failures}};
  json root{{"records", records}, {"gates", gates}, {"provenance", prov}, {"summary", summary}};
  return root.dump(2) + "\n";
}

RunReport parse_report_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    fail(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  try {
    RunReport r;
    for (const json& rec : j.at("records")) r.records.push_back(record_from(rec));
    for (const json& g : j.at("gates")) r.gates.push_back(gate_from(g));
    const json& p = j.at("provenance");
    r.provenance.seed = p.at("seed").get<std::uint64_t>();
    r.provenance.tolerances = tolerances_from(p.at("tolerances"));
    r.provenance.tolerance_scale = p.at("tolerance_scale").get<double>();
    r.provenance.tool = p.at("tool").get<std::string>();
    r.provenance.version = p.at("version").get<std::string>();
    r.provenance.schema_version = p.at("schema_version").get<std::string>();
    r.provenance.scenario = p.at("scenario").get<std::string>();
    r.provenance.simd = p.at("simd").get<std::string>();
    r.provenance.checks = p.at("checks").get<std::vector<std::string>>();
    if (p.contains("wall_time_s")) r.provenance.wall_time_s = p["wall_time_s"].get<double>();
    return r;
  } catch (const json::exception& e) {
    fail(ErrorCode::SchemaError, std::string("report: ") + e.what());
  }
}

std::string render_csv(const RunReport& report) {
  std::string out = "name,point_index,plane_id,lhs,rhs,slack,holds,equality,error\n";
  for (const Record& r : report.records) {
    std::string error = r.status == "skipped" ? "SKIPPED:" + r.error : r.error;
    out += r.name + "," + std::to_string(r.point_index) + "," + r.plane_id + "," + format_real(r.lhs) + "," +
           format_real(r.rhs) + "," + format_real(r.slack) + "," + (r.holds ? "true" : "false") + "," +
           (r.equality ? "true" : "false") + "," + error + "\n";
  }
  return out;
}

void emit_report(const RunReport& report, ReportFormat format, const std::string& path) {
  const std::string text = format == ReportFormat::Json ? render_json(report) : render_csv(report);
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) fail(ErrorCode::IoError, "cannot write report to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
}

}  // namespace chenmap

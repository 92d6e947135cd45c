#include "chenmap/catalog.hpp"

#include <cmath>
#include <utility>

#include "chenmap/errors.hpp"

namespace chenmap {

namespace {

SmoothMap linear_map(const Mat& w) {
  SmoothMap m;
  m.source_dim = static_cast<int>(w.cols());
  m.target_dim = static_cast<int>(w.rows());
  m.value = [w](const Vec& x) { return Vec(w * x); };
  m.jacobian = [w](const Vec&) { return w; };
  return m;
}

SmoothMap identity_map(int n) { return linear_map(Mat::Identity(n, n)); }

// x -> (x, 0) into a chart of dimension n.
SmoothMap inclusion_map(int m, int n) { return linear_map(Mat::Identity(n, m)); }

// x -> x.head(n)
SmoothMap projection_map(int m, int n) { return linear_map(Mat::Identity(n, m)); }

// Composes a base map with the projection dropping the trailing fiber coordinates.
SmoothMap drop_fibers(const SmoothMap& base, int fiber_dim) {
  SmoothMap m;
  const int b = base.source_dim;
  m.source_dim = b + fiber_dim;
  m.target_dim = base.target_dim;
  m.value = [base, b](const Vec& x) { return base.value(x.head(b)); };
  m.jacobian = [base, b, fiber_dim](const Vec& x) {
    Mat j = Mat::Zero(base.target_dim, b + fiber_dim);
    j.leftCols(b) = base.jacobian_at(x.head(b), 1e-5);
    return j;
  };
  return m;
}

ModelBlock family_block(ModelKind kind, const std::string& family, double c, double alpha,
                        const std::string& structure, std::optional<XiPosition> xi = std::nullopt) {
  ModelBlock m;
  m.kind = kind;
  m.family = family;
  m.c = c;
  m.alpha = alpha;
  m.structure = structure;
  m.xi_case = xi;
  return m;
}

ModelBlock explicit_block(ModelKind kind, double f1, double f2, std::optional<double> f3, const std::string& structure,
                          std::optional<XiPosition> xi = std::nullopt) {
  ModelBlock m;
  m.kind = kind;
  m.f1 = f1;
  m.f2 = f2;
  m.f3 = f3;
  m.structure = structure;
  m.xi_case = xi;
  return m;
}

AmbientStructure no_structure() {
  AmbientStructure s;
  s.name = "none";
  return s;
}

void add_flat_structures(ScenarioDefinition& d) {
  const int n = d.target.dim;
  if (n % 2 == 0) d.structures["standard_complex"] = structures::standard_complex(n);
  else d.structures["product"] = structures::product_contact(structures::standard_complex(n - 1), n - 1);
}

ScenarioDefinition flat_identity(int n) {
  ScenarioDefinition d;
  d.name = "flat_identity_r" + std::to_string(n);
  d.description = "identity of R^" + std::to_string(n) + ", totally geodesic flat case";
  d.source = charts::euclidean(n);
  d.target = charts::euclidean(n);
  d.map = identity_map(n);
  d.default_point = Vec::Zero(n);
  add_flat_structures(d);
  if (n % 2 == 0) {
    d.suggested_model = family_block(ModelKind::Gcsf, "complex", 0.0, 0.0, "standard_complex");
    d.realized_families = {family_block(ModelKind::Gcsf, "real", 0.0, 0.0, "standard_complex"),
                           family_block(ModelKind::Gcsf, "complex", 0.0, 0.0, "standard_complex")};
    if (n == 4) d.realized_families.push_back(family_block(ModelKind::Gcsf, "real_kahler", 0.0, 0.0, "standard_complex"));
  } else {
    d.suggested_model = explicit_block(ModelKind::Gssf, 0.0, 0.0, 0.0, "product", XiPosition::InRange);
    d.realized_families = {family_block(ModelKind::Gssf, "cosymplectic", 0.0, 0.0, "product", XiPosition::InRange)};
  }
  return d;
}

ScenarioDefinition projection_plumbing() {
  ScenarioDefinition d;
  d.name = "projection_plumbing";
  d.description = "orthogonal projection R^3 -> R^2, rank 2";
  d.source = charts::euclidean(3);
  d.target = charts::euclidean(2);
  d.map = projection_map(3, 2);
  d.default_point = Vec::Zero(3);
  d.declared_rank_min = 1;
  d.structures["standard_complex"] = structures::standard_complex(2);
  d.suggested_model = family_block(ModelKind::Gcsf, "real", 0.0, 0.0, "none");
  return d;
}

ScenarioDefinition sphere_inclusion() {
  ScenarioDefinition d;
  d.name = "sphere_inclusion";
  d.description = "unit S^2 in R^3 through the graph chart, rank 2";
  d.source = charts::graph_sphere2();
  d.target = charts::euclidean(3);
  d.map.source_dim = 2;
  d.map.target_dim = 3;
  d.map.value = charts::graph_sphere2_embedding;
  d.map.jacobian = charts::graph_sphere2_embedding_jacobian;
  d.default_point = Vec::Zero(2);
  d.declared_rank_min = 1;
  d.suggested_model = family_block(ModelKind::Gcsf, "real", 0.0, 0.0, "none");
  return d;
}

ScenarioDefinition sphere_in_sphere() {
  ScenarioDefinition d;
  d.name = "sphere_in_sphere";
  d.description = "equatorial S^3(1) in S^4(1), totally geodesic";
  d.source = charts::stereographic_sphere(3, 1.0);
  d.target = charts::stereographic_sphere(4, 1.0);
  d.map = inclusion_map(3, 4);
  d.default_point = Vec::Zero(3);
  d.suggested_model = family_block(ModelKind::Gcsf, "real", 1.0, 0.0, "none");
  d.realized_families = {*d.suggested_model};
  return d;
}

ScenarioDefinition fs_identity(int s) {
  ScenarioDefinition d;
  d.name = s == 1 ? "cp1_chart" : "cp2_chart";
  d.description = "identity of the affine chart of CP^" + std::to_string(s) + " with holomorphic curvature 4";
  d.source = charts::fubini_study(s, 1.0);
  d.target = charts::fubini_study(s, 1.0);
  d.map = identity_map(2 * s);
  d.default_point = Vec::Zero(2 * s);
  d.declared_rank_min = s == 1 ? 1 : 3;
  d.structures["standard_complex"] = structures::standard_complex(2 * s);
  d.suggested_model = family_block(ModelKind::Gcsf, "complex", 1.0, 0.0, "standard_complex");
  d.realized_families = {*d.suggested_model};
  if (s == 2) d.realized_families.push_back(family_block(ModelKind::Gcsf, "real_kahler", 1.0, 0.0, "standard_complex"));
  return d;
}

ScenarioDefinition odd_sphere_contact() {
  ScenarioDefinition d;
  d.name = "odd_sphere_contact";
  d.description = "identity of S^3(1) with its Hopf contact structure";
  d.source = charts::stereographic_sphere(3, 1.0);
  d.target = charts::stereographic_sphere(3, 1.0);
  d.map = identity_map(3);
  d.default_point = Vec::Zero(3);
  d.structures["hopf"] = structures::hopf_contact(3, 1.0);
  d.suggested_model = explicit_block(ModelKind::Gssf, 1.0, 0.0, 0.0, "hopf", XiPosition::InRange);
  d.realized_families = {family_block(ModelKind::Gssf, "almost_C_alpha", 0.25, 0.5, "hopf", XiPosition::InRange)};
  return d;
}

ScenarioDefinition product_s2xr() {
  ScenarioDefinition d;
  d.name = "product_s2xr";
  d.description = "identity of S^2(1) x R with the product contact structure";
  d.source = charts::warped_line_product(charts::fubini_study(1, 0.25), charts::warp_constant());
  d.target = d.source;
  d.map = identity_map(3);
  d.default_point = Vec::Zero(3);
  d.structures["product"] = structures::product_contact(structures::standard_complex(2), 2);
  d.suggested_model = family_block(ModelKind::Gssf, "cosymplectic", 0.25, 0.0, "product", XiPosition::InRange);
  d.realized_families = {*d.suggested_model};
  return d;
}

ScenarioDefinition sphere_in_flat() {
  ScenarioDefinition d;
  d.name = "sphere_in_flat";
  d.description = "round S^3(1) in R^4, umbilical with nonzero tension";
  d.source = charts::stereographic_sphere(3, 1.0);
  d.target = charts::euclidean(4);
  d.map = charts::inverse_stereographic(3, 1.0);
  d.default_point = Vec::Zero(3);
  d.structures["standard_complex"] = structures::standard_complex(4);
  d.suggested_model = family_block(ModelKind::Gcsf, "complex", 0.0, 0.0, "standard_complex");
  d.realized_families = {family_block(ModelKind::Gcsf, "real", 0.0, 0.0, "none"), *d.suggested_model,
                         family_block(ModelKind::Gcsf, "real_kahler", 0.0, 0.0, "standard_complex")};
  return d;
}

ScenarioDefinition fibered_sphere_in_sphere() {
  ScenarioDefinition d;
  d.name = "fibered_sphere_in_sphere";
  d.description = "S^3(1) x R with a warped fiber mapped onto the equator of S^4(1)";
  Vec a(3);
  a << 0.2, -0.1, 0.05;
  d.source = charts::with_fibers(charts::stereographic_sphere(3, 1.0), 1, a);
  d.target = charts::stereographic_sphere(4, 1.0);
  d.map = drop_fibers(inclusion_map(3, 4), 1);
  d.default_point = Vec::Zero(4);
  d.suggested_model = family_block(ModelKind::Gcsf, "real", 1.0, 0.0, "none");
  d.realized_families = {*d.suggested_model};
  return d;
}

ScenarioDefinition s3_in_s5(bool xi_in_range) {
  ScenarioDefinition d;
  d.name = xi_in_range ? "s3_in_s5_xi_range" : "s3_in_s5_xi_perp";
  d.description = std::string("great S^3 in S^5(1) with the Hopf structure, xi ") +
                  (xi_in_range ? "tangent" : "normal") + " at the origin";
  Mat w = Mat::Zero(5, 3);
  w(0, 0) = 1.0;
  w(1, 1) = 1.0;
  w(xi_in_range ? 4 : 2, 2) = 1.0;
  d.source = charts::stereographic_sphere(3, 1.0);
  d.target = charts::stereographic_sphere(5, 1.0);
  d.map = linear_map(w);
  d.default_point = Vec::Zero(3);
  d.point_radius = 0.0;
  d.structures["hopf"] = structures::hopf_contact(5, 1.0);
  const XiPosition xi = xi_in_range ? XiPosition::InRange : XiPosition::InRangePerp;
  d.suggested_model = explicit_block(ModelKind::Gssf, 1.0, 0.0, 0.0, "hopf", xi);
  d.realized_families = {family_block(ModelKind::Gssf, "almost_C_alpha", 0.25, 0.5, "hopf", xi)};
  return d;
}

ScenarioDefinition heisenberg_identity() {
  ScenarioDefinition d;
  d.name = "heisenberg_identity_r3";
  d.description = "identity of the Heisenberg group with its Sasakian structure";
  d.source = charts::heisenberg(1);
  d.target = charts::heisenberg(1);
  d.map = identity_map(3);
  d.default_point = Vec::Zero(3);
  d.point_radius = 1.0;
  d.structures["heisenberg"] = structures::heisenberg_contact(1);
  d.suggested_model = explicit_block(ModelKind::Gssf, 0.0, -1.0, -1.0, "heisenberg", XiPosition::InRange);
  return d;
}

ScenarioDefinition kenmotsu_warped() {
  ScenarioDefinition d;
  d.name = "kenmotsu_warped_r3";
  d.description = "identity of S^2(1) x_w R with w = exp(2t), Kenmotsu type at t = 0";
  d.source = charts::warped_line_product(charts::fubini_study(1, 0.25), charts::warp_exp(2.0));
  d.target = d.source;
  d.map = identity_map(3);
  d.default_point = Vec::Zero(3);
  d.point_radius = 0.0;
  d.structures["product"] = structures::product_contact(structures::standard_complex(2), 2);
  d.suggested_model = family_block(ModelKind::Gssf, "kenmotsu", -0.75, 0.0, "product", XiPosition::InRange);
  d.realized_families = {*d.suggested_model};
  return d;
}

using Builder = ScenarioDefinition (*)();

struct Entry {
  const char* name;
  Builder build;
  bool required;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> list = {
      {"flat_identity_r3", [] { return flat_identity(3); }, true},
      {"flat_identity_r4", [] { return flat_identity(4); }, true},
      {"flat_identity_r5", [] { return flat_identity(5); }, true},
      {"projection_plumbing", projection_plumbing, true},
      {"sphere_inclusion", sphere_inclusion, true},
      {"sphere_in_sphere", sphere_in_sphere, true},
      {"cp1_chart", [] { return fs_identity(1); }, true},
      {"cp2_chart", [] { return fs_identity(2); }, true},
      {"odd_sphere_contact", odd_sphere_contact, true},
      {"product_s2xr", product_s2xr, true},
      {"sphere_in_flat", sphere_in_flat, false},
      {"fibered_sphere_in_sphere", fibered_sphere_in_sphere, false},
      {"s3_in_s5_xi_range", [] { return s3_in_s5(true); }, false},
      {"s3_in_s5_xi_perp", [] { return s3_in_s5(false); }, false},
      {"heisenberg_identity_r3", heisenberg_identity, false},
      {"kenmotsu_warped_r3", kenmotsu_warped, false},
  };
  return list;
}

Vec normal_vector(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

Vec ball_point(std::mt19937_64& rng, int n, double radius) {
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Vec dir = normal_vector(rng, n);
  const double len = dir.norm();
  if (len == 0.0 || radius == 0.0) return Vec::Zero(n);
  return dir * (radius * std::pow(ud(rng), 1.0 / n) / len);
}

// Gram-Schmidt of the columns of `a` in the inner product g.
Mat orthonormalize(Mat a, const Mat& g) {
  for (int j = 0; j < a.cols(); ++j) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) a.col(j) -= (a.col(i).dot(g * a.col(j))) * a.col(i);
    a.col(j) /= std::sqrt(a.col(j).dot(g * a.col(j)));
  }
  return a;
}

struct Target {
  std::string label;
  MetricChart chart;
  std::map<std::string, AmbientStructure> structures;
  ModelBlock model;
  std::vector<ModelBlock> families;
  double radius = 0.3;
  bool contact = false;
};

// Warped F x_w R over a Fubini-Study fiber with holomorphic curvature 4F.
Target warped_target(int s, double fiber_c, const charts::Warp& warp, double t0) {
  Target t;
  t.label = "warped_fs" + std::to_string(s) + "_" + warp.name;
  t.chart = charts::warped_line_product(charts::fubini_study(s, fiber_c), warp);
  t.structures["product"] = structures::product_contact(structures::standard_complex(2 * s), 2 * s);
  const double w = warp.w(t0), dw = warp.dw(t0), ddw = warp.ddw(t0);
  const double f1 = (fiber_c - dw * dw) / (w * w);
  const double f2 = fiber_c / (w * w);
  const double f3 = f1 + ddw / w;
  t.model = explicit_block(ModelKind::Gssf, f1, f2, f3, "product");
  t.contact = true;
  return t;
}

Target make_target(int kind, std::mt19937_64& rng, Vec& y0) {
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  Target t;
  switch (kind) {
    case 0:
      t.label = "flat4";
      t.chart = charts::euclidean(4);
      t.structures["standard_complex"] = structures::standard_complex(4);
      t.model = family_block(ModelKind::Gcsf, "complex", 0.0, 0.0, "standard_complex");
      t.families = {t.model, family_block(ModelKind::Gcsf, "real_kahler", 0.0, 0.0, "standard_complex")};
      break;
    case 1:
      t.label = "flat5";
      t.chart = charts::euclidean(5);
      t.structures["product"] = structures::product_contact(structures::standard_complex(4), 4);
      t.model = family_block(ModelKind::Gssf, "cosymplectic", 0.0, 0.0, "product");
      t.families = {t.model};
      t.contact = true;
      break;
    case 2:
      t.label = "sphere4";
      t.chart = charts::stereographic_sphere(4, 1.0);
      t.model = family_block(ModelKind::Gcsf, "real", 1.0, 0.0, "none");
      t.families = {t.model};
      break;
    case 3:
      t.label = "sphere5_hopf";
      t.chart = charts::stereographic_sphere(5, 1.0);
      t.structures["hopf"] = structures::hopf_contact(5, 1.0);
      t.model = explicit_block(ModelKind::Gssf, 1.0, 0.0, 0.0, "hopf");
      t.families = {family_block(ModelKind::Gssf, "almost_C_alpha", 0.25, 0.5, "hopf")};
      t.contact = true;
      break;
    case 4:
      t.label = "sphere5_sasakian";
      t.chart = charts::stereographic_sphere(5, 4.0);
      t.radius = 0.15;
      t.structures["hopf"] = structures::hopf_contact(5, 4.0);
      t.model = family_block(ModelKind::Gssf, "sasakian", 1.0, 0.0, "hopf");
      t.families = {t.model, family_block(ModelKind::Gssf, "almost_C_alpha", 1.0, 1.0, "hopf")};
      t.contact = true;
      break;
    case 5:
      t.label = "hyperbolic5";
      t.chart = charts::stereographic_sphere(5, -1.0);
      t.model = family_block(ModelKind::Gcsf, "real", -1.0, 0.0, "none");
      t.families = {t.model};
      break;
    case 6:
      t.label = "cp2";
      t.chart = charts::fubini_study(2, 1.0);
      t.structures["standard_complex"] = structures::standard_complex(4);
      t.model = family_block(ModelKind::Gcsf, "complex", 1.0, 0.0, "standard_complex");
      t.families = {t.model, family_block(ModelKind::Gcsf, "real_kahler", 1.0, 0.0, "standard_complex")};
      break;
    case 7:
      t.label = "ch3";
      t.chart = charts::fubini_study(3, -0.5);
      t.structures["standard_complex"] = structures::standard_complex(6);
      t.model = family_block(ModelKind::Gcsf, "complex", -0.5, 0.0, "standard_complex");
      t.families = {t.model};
      break;
    case 8:
      t.label = "heisenberg5";
      t.chart = charts::heisenberg(2);
      t.radius = 1.0;
      t.structures["heisenberg"] = structures::heisenberg_contact(2);
      t.model = explicit_block(ModelKind::Gssf, 0.0, -1.0, -1.0, "heisenberg");
      t.contact = true;
      break;
    default: {
      const double t0 = 0.3 * ud(rng);
      const int s = 2;
      const double fiber_c = kind == 11 ? -0.5 : 0.5;
      const charts::Warp warp = kind == 9    ? charts::warp_constant()
                                : kind == 10 ? charts::warp_exp(2.0)
                                : (ud(rng) > 0.0 ? charts::warp_cosh() : charts::warp_cos());
      t = warped_target(s, fiber_c, warp, t0);
      const double f2 = *t.model.f2;
      if (kind == 9) t.families = {family_block(ModelKind::Gssf, "cosymplectic", f2, 0.0, "product")};
      if (kind == 10) t.families = {family_block(ModelKind::Gssf, "kenmotsu", f2 - 1.0, 0.0, "product")};
      y0 = ball_point(rng, t.chart.dim, t.radius);
      y0[t.chart.dim - 1] = t0;
      return t;
    }
  }
  y0 = ball_point(rng, t.chart.dim, t.radius);
  return t;
}

}  // namespace

Coefficients ModelBlock::coefficients() const {
  if (family.has_value()) {
    if (kind == ModelKind::Gcsf && !is_complex_family(*family))
      fail(ErrorCode::SchemaError, "model.family '" + *family + "' is not a complex space-form family");
    if (kind == ModelKind::Gssf && !is_contact_family(*family))
      fail(ErrorCode::SchemaError, "model.family '" + *family + "' is not a contact space-form family");
    return table_coefficients(*family, c, alpha);
  }
  if (!f1 || !f2) fail(ErrorCode::SchemaError, "model needs family or f1 and f2");
  if (kind == ModelKind::Gssf && !f3) fail(ErrorCode::SchemaError, "model.f3 is required for GSSF");
  return {*f1, *f2, kind == ModelKind::Gssf ? f3 : std::nullopt};
}

MapScenario ScenarioDefinition::at(const Vec& x) const {
  MapScenario s;
  s.name = name;
  s.source = source;
  s.target = target;
  s.map = map;
  s.base_point = x;
  s.declared_rank_min = declared_rank_min;
  return s;
}

bool ScenarioDefinition::admits(const Vec& x) const {
  if (!source.contains(x)) return false;
  const Vec y = map.value(x);
  return y.allFinite() && target.contains(y);
}

std::vector<Vec> ScenarioDefinition::sample_points(std::mt19937_64& rng, int count) const {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 1000 * (count + 1)) fail(ErrorCode::OutOfDomain, name + ": cannot sample points in the chart");
    const Vec x = default_point + ball_point(rng, source.dim, point_radius);
    if (admits(x)) out.push_back(x);
  }
  return out;
}

std::vector<CatalogListing> list_builtins() {
  std::vector<CatalogListing> out;
  for (const Entry& e : entries()) {
    const ScenarioDefinition d = e.build();
    out.push_back({d.name, d.description, e.required});
  }
  return out;
}

ScenarioDefinition builtin_scenario(const std::string& name) {
  for (const Entry& e : entries())
    if (name == e.name) return e.build();
  fail(ErrorCode::UnknownBuiltin, "unknown built-in scenario '" + name + "'");
}

AmbientStructure resolve_structure(const ScenarioDefinition& def, const std::string& name) {
  if (name == "none") return no_structure();
  const auto it = def.structures.find(name);
  if (it == def.structures.end())
    fail(ErrorCode::UnknownBuiltin, "structure '" + name + "' is not available for " + def.name);
  return it->second;
}

SpaceFormModel resolve_model(const ModelBlock& block, const ScenarioDefinition& def) {
  const Coefficients k = block.coefficients();
  return {block.kind, k.f1, k.f2, k.f3.value_or(0.0), resolve_structure(def, block.structure)};
}

RandomCase random_case(std::uint64_t seed, int index) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index));
  std::uniform_int_distribution<int> pick(0, 1 << 20);
  const int kind = index % kRandomTargetKinds;
  Vec y0;
  Target t = make_target(kind, rng, y0);
  const int n = t.chart.dim;
  const Mat g0 = t.chart.metric_at(y0);

  XiPosition xi = XiPosition::InRange;
  if (t.contact) xi = (index / kRandomTargetKinds) % 2 == 0 ? XiPosition::InRange : XiPosition::InRangePerp;
  const int r_max = std::min(t.contact && xi == XiPosition::InRangePerp ? n - 1 : n, 5);
  const int r = 3 + pick(rng) % (r_max - 2);
  const int fibers = pick(rng) % 3;

  Mat a = Mat::Zero(n, r);
  for (int j = 0; j < r; ++j) a.col(j) = normal_vector(rng, n);
  if (t.contact) {
    const SpaceFormModel probe{ModelKind::Gssf, 0.0, 0.0, 0.0, t.structures.at(t.model.structure)};
    const StructureAt s = probe.at(y0, g0);
    if (xi == XiPosition::InRange) {
      a.col(0) = s.xi;
    } else {
      for (int j = 0; j < r; ++j) a.col(j) -= s.eta.dot(a.col(j)) / s.eta.dot(s.xi) * s.xi;
    }
  }
  a = orthonormalize(a, g0);

  std::vector<Mat> q(static_cast<std::size_t>(n));
  const double q_scale = 0.6 / std::sqrt(static_cast<double>(r));
  for (int k = 0; k < n; ++k) {
    Mat m = Mat::Zero(r, r);
    for (int j = 0; j < r; ++j) m.col(j) = normal_vector(rng, r);
    q[static_cast<std::size_t>(k)] = q_scale * 0.5 * (m + m.transpose());
  }
  SmoothMap quad;
  quad.source_dim = r;
  quad.target_dim = n;
  quad.value = [y0, a, q](const Vec& u) {
    Vec y = y0 + a * u;
    for (std::size_t k = 0; k < q.size(); ++k) y[static_cast<Eigen::Index>(k)] += 0.5 * u.dot(q[k] * u);
    return y;
  };
  quad.jacobian = [a, q](const Vec& u) {
    Mat j = a;
    for (std::size_t k = 0; k < q.size(); ++k) j.row(static_cast<Eigen::Index>(k)) += (q[k] * u).transpose();
    return j;
  };

  RandomCase out;
  ScenarioDefinition& d = out.scenario;
  d.name = "random_" + t.label + "_" + std::to_string(index);
  d.description = "seeded quadratic Riemannian map into " + t.label;
  const MetricChart base = charts::pullback(t.chart, quad, d.name + "_base");
  if (fibers > 0) {
    Vec grad = 0.3 * normal_vector(rng, r);
    d.source = charts::with_fibers(base, fibers, grad);
    d.map = drop_fibers(quad, fibers);
  } else {
    d.source = base;
    d.map = quad;
  }
  d.target = t.chart;
  d.default_point = Vec::Zero(r + fibers);
  d.point_radius = 0.0;
  d.structures = t.structures;
  out.model = t.model;
  if (t.contact) out.model.xi_case = xi;
  d.suggested_model = out.model;
  for (ModelBlock f : t.families) {
    if (t.contact) f.xi_case = xi;
    d.realized_families.push_back(f);
  }
  out.target_label = t.label;
  return out;
}

CurvatureTensor random_algebraic_curvature(std::mt19937_64& rng, int dim, int terms) {
  CurvatureTensor out(dim);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (int t = 0; t < terms; ++t) {
    Mat m = Mat::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) m.col(j) = normal_vector(rng, dim);
    const Mat h = 0.5 * (m + m.transpose());
    const double sign = ud(rng) < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        for (int k = 0; k < dim; ++k)
          for (int l = 0; l < dim; ++l) out(i, j, k, l) += sign * (h(i, l) * h(j, k) - h(i, k) * h(j, l));
  }
  return out;
}

Mat random_orthogonal(std::mt19937_64& rng, int dim) {
  Mat m(dim, dim);
  for (int j = 0; j < dim; ++j) m.col(j) = normal_vector(rng, dim);
  Eigen::HouseholderQR<Mat> qr(m);
  Mat q = qr.householderQ();
  const Mat rr = qr.matrixQR();
  for (int j = 0; j < dim; ++j)
    if (rr(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

}  // namespace chenmap

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "chenmap/chart.hpp"
#include "chenmap/rmap.hpp"
#include "chenmap/space_forms.hpp"
#include "chenmap/tensor.hpp"

namespace chenmap {

// Space-form block of a scenario: either a tabulated family with (c, alpha)
// or explicit f1, f2[, f3].
struct ModelBlock {
  ModelKind kind = ModelKind::Gcsf;
  std::optional<std::string> family;
  double c = 0.0;
  double alpha = 0.0;
  std::optional<double> f1, f2, f3;
  std::string structure = "none";
  std::optional<XiPosition> xi_case;  // expected xi position for contact corollaries

  [[nodiscard]] Coefficients coefficients() const;
};

// A named map candidate with everything needed to evaluate it at any point.
struct ScenarioDefinition {
  std::string name;
  std::string description;
  MetricChart source;
  MetricChart target;
  SmoothMap map;
  Vec default_point;
  double point_radius = 0.3;  // random points are drawn from this ball around default_point
  int declared_rank_min = 3;
  std::optional<ModelBlock> suggested_model;
  std::vector<ModelBlock> realized_families;  // table families this target realizes
  std::map<std::string, AmbientStructure> structures;

  [[nodiscard]] MapScenario at(const Vec& x) const;
  [[nodiscard]] bool admits(const Vec& x) const;
  // Uniform draws from the ball, rejecting points outside either chart.
  [[nodiscard]] std::vector<Vec> sample_points(std::mt19937_64& rng, int count) const;
};

struct CatalogListing {
  std::string name;
  std::string description;
  bool required = false;  // part of the minimal built-in set
};

std::vector<CatalogListing> list_builtins();

// UnknownBuiltin for names not in the catalog.
ScenarioDefinition builtin_scenario(const std::string& name);

// Structure lookup; "none" yields an empty structure and unknown names fail with UnknownBuiltin.
AmbientStructure resolve_structure(const ScenarioDefinition& def, const std::string& name);

SpaceFormModel resolve_model(const ModelBlock& block, const ScenarioDefinition& def);

// Seeded random Riemannian maps y0 + A u + Q(u, u)/2 into model targets, fibred
// over extra source directions. Targets rotate with `index`.
struct RandomCase {
  ScenarioDefinition scenario;
  ModelBlock model;
  std::string target_label;
};

RandomCase random_case(std::uint64_t seed, int index);
inline constexpr int kRandomTargetKinds = 12;

// Algebraic curvature tensor sum_k s_k (h_il h_jk - h_ik h_jl) with random symmetric h.
CurvatureTensor random_algebraic_curvature(std::mt19937_64& rng, int dim, int terms = 3);

// Haar-distributed orthogonal matrix.
Mat random_orthogonal(std::mt19937_64& rng, int dim);

}  // namespace chenmap

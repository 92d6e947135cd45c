#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace chenmap {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr std::uint64_t kSelftestSeed = 20240601;

// Acceptance criteria 1..9.
CriterionResult criterion_gauss_gate(std::uint64_t seed = kSelftestSeed);
CriterionResult criterion_model_curvature(std::uint64_t seed = kSelftestSeed);
CriterionResult criterion_soundness(std::uint64_t seed = kSelftestSeed, int cases = 240);
CriterionResult criterion_equality(std::uint64_t seed = kSelftestSeed);
CriterionResult criterion_contractions(std::uint64_t seed = kSelftestSeed, int draws = 100);
CriterionResult criterion_delta_oracle(std::uint64_t seed = kSelftestSeed, int tensors = 20);
CriterionResult criterion_delta_bounds(std::uint64_t seed = kSelftestSeed, int cases = 240);
CriterionResult criterion_hygiene(std::uint64_t seed = kSelftestSeed);
CriterionResult criterion_determinism(std::uint64_t seed = kSelftestSeed);

// Further properties: catalog completeness, plane-swap invariance, isometry identity,
// scalar-curvature identity and numeric-versus-model consistency.
CriterionResult property_catalog(std::uint64_t seed = kSelftestSeed);
CriterionResult property_plane_swap(std::uint64_t seed = kSelftestSeed);
CriterionResult property_isometry(std::uint64_t seed = kSelftestSeed);
CriterionResult property_scalar_identity(std::uint64_t seed = kSelftestSeed);
CriterionResult property_model_consistency(std::uint64_t seed = kSelftestSeed);

std::vector<std::function<CriterionResult()>> acceptance_suite(std::uint64_t seed = kSelftestSeed);
std::vector<std::function<CriterionResult()>> property_suite(std::uint64_t seed = kSelftestSeed);

// "PASS [n] title: detail" or "FAIL ...".
std::string format_result(const CriterionResult& r);

}  // namespace chenmap

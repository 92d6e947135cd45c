#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "chenmap/catalog.hpp"
#include "chenmap/chart_geometry.hpp"
#include "chenmap/delta.hpp"
#include "chenmap/errors.hpp"
#include "chenmap/rmap.hpp"

namespace chenmap {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const GeometryError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no GeometryError thrown";
  return ErrorCode::IoError;
}

SearchOptions exhaustive_opts(int budget = 0) {
  SearchOptions o;
  o.mode = SearchMode::ExhaustiveGrid;
  o.mode_set = true;
  o.budget = budget;
  return o;
}

SearchOptions multistart_opts(int budget = 0, std::uint64_t seed = 1) {
  SearchOptions o;
  o.mode = SearchMode::MultistartLocal;
  o.mode_set = true;
  o.budget = budget;
  o.seed = seed;
  return o;
}

// Curvature operator diagonal on coordinate bivectors: K(e_i, e_j) = lambda_ij.
CurvatureTensor diagonal_operator(const Mat& lambda) {
  const int r = static_cast<int>(lambda.rows());
  CurvatureTensor t(r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      t(i, j, j, i) = lambda(i, j);
      t(i, j, i, j) = -lambda(i, j);
    }
  return t;
}

Mat random_pair_values(std::mt19937_64& rng, int r) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Mat l = Mat::Zero(r, r);
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j) l(i, j) = l(j, i) = u(rng);
  return l;
}

double off_diagonal_min(const Mat& l) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < l.rows(); ++i)
    for (int j = i + 1; j < l.cols(); ++j) m = std::min(m, l(i, j));
  return m;
}

TEST(DeltaInvariants, ProductOfSphereAndLine) {
  const ScenarioDefinition def = builtin_scenario("product_s2xr");
  const MapBundle b = evaluate_bundle(def.at(def.default_point));
  const CurvatureTensor framed = b.horizontal_curvature();
  for (const SearchOptions& opts : {exhaustive_opts(), multistart_opts()}) {
    const PlaneSearchResult res = min_sectional_curvature(framed, opts);
    EXPECT_NEAR(res.min_value, 0.0, 1e-6);
    EXPECT_NEAR(delta_h(framed, res), 1.0, 1e-6);
  }
}

TEST(DeltaInvariants, UnitSphereHasDeltaTwoInRankThree) {
  const ScenarioDefinition def = builtin_scenario("sphere_in_sphere");
  const MapBundle b = evaluate_bundle(def.at(def.default_point));
  const CurvatureTensor framed = b.horizontal_curvature();
  const PlaneSearchResult res = min_sectional_curvature(framed, exhaustive_opts());
  EXPECT_NEAR(res.min_value, 1.0, 1e-6);
  EXPECT_NEAR(delta_h(framed, res), 2.0, 1e-6);
}

TEST(DeltaInvariants, ExhaustiveSearchFindsDiagonalOperatorMinimum) {
  std::mt19937_64 rng(17);
  for (int r : {3, 4}) {
    for (int k = 0; k < 10; ++k) {
      const Mat l = random_pair_values(rng, r);
      const PlaneSearchResult res = min_sectional_curvature(diagonal_operator(l), exhaustive_opts(12));
      EXPECT_NEAR(res.min_value, off_diagonal_min(l), 1e-12) << "r=" << r;
      EXPECT_GT(res.evaluations, 0);
    }
  }
}

TEST(DeltaInvariants, MultistartSearchFindsDiagonalOperatorMinimum) {
  std::mt19937_64 rng(23);
  for (int r : {3, 4, 5, 6}) {
    for (int k = 0; k < 6; ++k) {
      const Mat l = random_pair_values(rng, r);
      const PlaneSearchResult res = min_sectional_curvature(diagonal_operator(l), multistart_opts(32, 5 + k));
      EXPECT_NEAR(res.min_value, off_diagonal_min(l), 1e-8) << "r=" << r;
      EXPECT_LT(std::abs(res.u.norm() - 1.0), 1e-10);
      EXPECT_LT(std::abs(res.u.dot(res.v)), 1e-10);
    }
  }
}

TEST(DeltaInvariants, SearchesAgreeOnRandomAlgebraicTensors) {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 8; ++k) {
    const int r = 3 + k % 2;
    const CurvatureTensor t = random_algebraic_curvature(rng, r);
    const double grid = min_sectional_curvature(t, exhaustive_opts(24)).min_value;
    const double local = min_sectional_curvature(t, multistart_opts(48, k)).min_value;
    EXPECT_LE(local, grid + 1e-9);
    EXPECT_NEAR(local, grid, 5e-2);
  }
}

TEST(DeltaInvariants, MultistartIsDeterministicForASeed) {
  std::mt19937_64 rng(31);
  const CurvatureTensor t = random_algebraic_curvature(rng, 5);
  const PlaneSearchResult a = min_sectional_curvature(t, multistart_opts(16, 99));
  const PlaneSearchResult b = min_sectional_curvature(t, multistart_opts(16, 99));
  EXPECT_EQ(a.min_value, b.min_value);
  EXPECT_EQ(a.evaluations, b.evaluations);
}

TEST(DeltaInvariants, DefaultModeDependsOnRank) {
  SearchOptions o;
  EXPECT_EQ(o.resolved_mode(4), SearchMode::ExhaustiveGrid);
  EXPECT_EQ(o.resolved_mode(5), SearchMode::MultistartLocal);
  EXPECT_EQ(o.resolved_budget(3), kDefaultGridSamples);
  EXPECT_EQ(o.resolved_budget(6), kDefaultStarts);
}

TEST(DeltaInvariants, ExhaustiveSearchIsLimitedToRankFour) {
  std::mt19937_64 rng(37);
  const CurvatureTensor t = random_algebraic_curvature(rng, 5);
  EXPECT_EQ(code_of([&] { static_cast<void>(min_sectional_curvature(t, exhaustive_opts())); }),
            ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([&] { static_cast<void>(min_sectional_curvature(CurvatureTensor(2), exhaustive_opts())); }),
            ErrorCode::RankDeficient);
}

TEST(DeltaInvariants, NonOrthonormalFrameIsRejected) {
  const Mat g = Mat::Identity(3, 3);
  const CurvatureTensor t = constant_curvature_tensor(g, 1.0);
  EXPECT_EQ(code_of([&] { static_cast<void>(min_sectional_curvature(t, g, 2.0 * g, exhaustive_opts())); }),
            ErrorCode::NonOrthonormalFrame);
}

TEST(DeltaInvariants, PlaneFromAnglesIsOrthonormal) {
  const HorizontalPlane p = plane_from_angles(4, {0.3, 1.1, -0.4, 0.8, 2.0});
  EXPECT_NEAR(p.u.norm(), 1.0, 1e-14);
  EXPECT_NEAR(p.v.norm(), 1.0, 1e-14);
  EXPECT_NEAR(p.u.dot(p.v), 0.0, 1e-14);
  EXPECT_EQ(code_of([] { static_cast<void>(plane_from_angles(4, {0.1, 0.2})); }), ErrorCode::SchemaError);
}

TEST(DeltaBounds, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(delta_bound_gcsf(3, 0.0, 1.0, 0.0, 2), 2.0);
  EXPECT_DOUBLE_EQ(delta_bound_gcsf(4, 3.0, 1.0, 1.0, 1), 1.0 * (1.0 + 5.0 + 6.0));
  EXPECT_DOUBLE_EQ(delta_bound_gssf_perp(3, 0.0, 1.0, 0.5, 2), 2.0 + 2.25);
  EXPECT_DOUBLE_EQ(delta_bound_gssf_range(3, 0.0, 1.0, 0.0, 1.0, 3), 0.5 * (4.0 - 2.0));
}

TEST(DeltaBounds, BranchesAgreeOnSignBoundaries) {
  for (int r : {3, 4, 7}) {
    EXPECT_DOUBLE_EQ(delta_bound_gcsf(r, 1.3, 0.4, 0.0, 1), delta_bound_gcsf(r, 1.3, 0.4, 0.0, 2));
    EXPECT_DOUBLE_EQ(delta_bound_gssf_perp(r, 1.3, 0.4, 0.0, 1), delta_bound_gssf_perp(r, 1.3, 0.4, 0.0, 2));
    const double b1 = delta_bound_gssf_range(r, 1.3, 0.4, 0.0, 0.0, 1);
    for (int br = 2; br <= 4; ++br) EXPECT_NEAR(delta_bound_gssf_range(r, 1.3, 0.4, 0.0, 0.0, br), b1, 1e-12);
  }
}

TEST(DeltaBounds, HarmonicConstantsMatchBoundsAtZeroTension) {
  for (int r : {3, 5}) {
    for (int br = 1; br <= 2; ++br) {
      EXPECT_NEAR(harmonic_constant_gcsf(r, 0.7, -0.2, br), delta_bound_gcsf(r, 0.0, 0.7, -0.2, br), 1e-12);
      EXPECT_NEAR(harmonic_constant_gssf_perp(r, 0.7, 0.3, br), delta_bound_gssf_perp(r, 0.0, 0.7, 0.3, br), 1e-12);
    }
    for (int br = 1; br <= 4; ++br)
      EXPECT_NEAR(harmonic_constant_gssf_range(r, 0.7, 0.3, -0.4, br),
                  delta_bound_gssf_range(r, 0.0, 0.7, 0.3, -0.4, br), 1e-12);
  }
}

TEST(DeltaBounds, TotallyGeodesicSphereIsExtremal) {
  const ScenarioDefinition def = builtin_scenario("sphere_in_sphere");
  const MapBundle b = evaluate_bundle(def.at(def.default_point));
  const SpaceFormModel model = resolve_model(*def.suggested_model, def);
  const DeltaReport rep = verify_delta_bound_gcsf(b, model, exhaustive_opts());
  EXPECT_NEAR(rep.delta, 2.0, 1e-6);
  EXPECT_NEAR(rep.bound_value, 2.0, 1e-12);
  EXPECT_TRUE(rep.holds);
  EXPECT_TRUE(rep.equality);
  EXPECT_EQ(rep.bound_name, "delta_gcsf_f2_nonneg");
  const DeltaReport harm = verify_harmonic_corollaries(b, model, exhaustive_opts());
  EXPECT_EQ(harm.name, "harmonic_gcsf");
  EXPECT_LT(harm.values.at("corollary_deviation"), 1e-12);
}

TEST(DeltaBounds, UmbilicalSphereIsNotHarmonic) {
  const ScenarioDefinition def = builtin_scenario("sphere_in_flat");
  const MapBundle b = evaluate_bundle(def.at(def.default_point));
  const SpaceFormModel model = resolve_model(*def.suggested_model, def);
  EXPECT_EQ(code_of([&] { static_cast<void>(verify_harmonic_corollaries(b, model, exhaustive_opts())); }),
            ErrorCode::NotHarmonic);
  const DeltaReport rep = verify_delta_bound_gcsf(b, model, exhaustive_opts());
  EXPECT_TRUE(rep.holds);
  EXPECT_NEAR(rep.values.at("tau_sq"), 9.0, 1e-5);
  EXPECT_NEAR(rep.bound_value, 0.5 * 4.5, 1e-5);
}

TEST(DeltaBounds, ContactTargetsHold) {
  for (const std::string name :
       {"odd_sphere_contact", "product_s2xr", "s3_in_s5_xi_range", "s3_in_s5_xi_perp", "heisenberg_identity_r3",
        "kenmotsu_warped_r3"}) {
    const ScenarioDefinition def = builtin_scenario(name);
    const MapBundle b = evaluate_bundle(def.at(def.default_point));
    const SpaceFormModel model = resolve_model(*def.suggested_model, def);
    const DeltaReport rep = verify_delta_bound_gssf(b, model, exhaustive_opts());
    EXPECT_TRUE(rep.holds) << name << " slack " << rep.slack;
    EXPECT_FALSE(rep.bound_name.empty()) << name;
    EXPECT_EQ(rep.statement_flags.count("D"), 1u) << name;
  }
}

TEST(DeltaBounds, RandomImmersionsRespectTheBounds) {
  for (int i = 0; i < 36; ++i) {
    const RandomCase rc = random_case(303, i);
    const MapBundle b = evaluate_bundle(rc.scenario.at(rc.scenario.default_point));
    const SpaceFormModel model = resolve_model(rc.model, rc.scenario);
    const SearchOptions opts = multistart_opts(16, static_cast<std::uint64_t>(i));
    const DeltaReport rep = model.kind == ModelKind::Gcsf ? verify_delta_bound_gcsf(b, model, opts)
                                                          : verify_delta_bound_gssf(b, model, opts);
    EXPECT_TRUE(rep.holds) << rc.target_label << " slack " << rep.slack;
  }
}

TEST(DeltaBounds, WrongModelKindIsRejected) {
  const ScenarioDefinition def = builtin_scenario("sphere_in_sphere");
  const MapBundle b = evaluate_bundle(def.at(def.default_point));
  const SpaceFormModel model = resolve_model(*def.suggested_model, def);
  EXPECT_EQ(code_of([&] { static_cast<void>(verify_delta_bound_gssf(b, model, exhaustive_opts())); }),
            ErrorCode::StructureViolation);
}

}  // namespace
}  // namespace chenmap

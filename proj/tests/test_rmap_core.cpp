#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "chenmap/catalog.hpp"
#include "chenmap/chart.hpp"
#include "chenmap/chart_geometry.hpp"
#include "chenmap/errors.hpp"
#include "chenmap/rmap.hpp"

namespace chenmap {
namespace {

constexpr double kStep = 1e-4;

MapBundle bundle_of(const std::string& name, const Vec& x) {
  return evaluate_bundle(builtin_scenario(name).at(x));
}

MapBundle bundle_of(const std::string& name) {
  const ScenarioDefinition def = builtin_scenario(name);
  return evaluate_bundle(def.at(def.default_point));
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const GeometryError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no GeometryError thrown";
  return ErrorCode::IoError;
}

TEST(RmapCore, UnitSphereInR3HasUmbilicalSecondFundamentalForm) {
  Vec x(2);
  x << 0.2, -0.3;
  const MapBundle b = bundle_of("sphere_inclusion", x);
  ASSERT_EQ(b.rank(), 2);
  ASSERT_EQ(b.sff.codim(), 1);
  const Mat& s = b.sff.slices[0];
  const double sign = s(0, 0) > 0.0 ? 1.0 : -1.0;
  EXPECT_LT((s - sign * Mat::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-6);
  const TensionField t = tension_field(b.sff);
  EXPECT_NEAR(t.norm_sq, 4.0, 1e-5);
  EXPECT_FALSE(t.harmonic);
  EXPECT_NEAR(b.sff.norm_sq(), 2.0, 1e-5);
}

TEST(RmapCore, RoundThreeSphereInR4HasTensionNormThree) {
  const MapBundle b = bundle_of("sphere_in_flat");
  ASSERT_EQ(b.rank(), 3);
  EXPECT_NEAR(tension_field(b.sff).norm_sq, 9.0, 1e-5);
  EXPECT_NEAR(b.sff.norm_sq(), 3.0, 1e-5);
}

TEST(RmapCore, EquatorialSphereIsTotallyGeodesic) {
  Vec x(3);
  x << 0.1, 0.2, -0.15;
  const MapBundle b = bundle_of("sphere_in_sphere", x);
  ASSERT_EQ(b.rank(), 3);
  EXPECT_LT(b.sff.norm_sq(), 1e-10);
  EXPECT_TRUE(tension_field(b.sff).harmonic);
}

TEST(RmapCore, FramesAreOrthonormalAndComplementary) {
  Vec x(4);
  x << 0.1, -0.2, 0.05, 0.3;
  const MapBundle b = bundle_of("fibered_sphere_in_sphere", x);
  const SplitFrames& f = b.frames;
  EXPECT_EQ(f.rank(), 3);
  EXPECT_EQ(f.vertical.cols(), 1);
  EXPECT_EQ(f.codim(), 1);
  EXPECT_LT(orthonormality_defect(f.source_metric, f.horizontal), 1e-12);
  EXPECT_LT(orthonormality_defect(f.source_metric, f.vertical), 1e-12);
  EXPECT_LT(orthonormality_defect(f.target_metric, f.range), 1e-6);
  EXPECT_LT(orthonormality_defect(f.target_metric, f.range_perp), 1e-12);
  EXPECT_LT((f.horizontal.transpose() * f.source_metric * f.vertical).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((f.range.transpose() * f.target_metric * f.range_perp).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((f.push * f.vertical).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(RmapCore, GaussEquationHoldsOnCatalogMaps) {
  for (const std::string name : {"sphere_inclusion", "sphere_in_flat", "fibered_sphere_in_sphere", "cp2_chart",
                                 "odd_sphere_contact", "kenmotsu_warped_r3"}) {
    const MapBundle b = bundle_of(name);
    EXPECT_LT(gauss_residual_framed(b.sff, b.horizontal_curvature(), b.range_curvature()), 1e-5) << name;
    EXPECT_LT(gauss_residual(b.frames, b.sff, b.source_curvature, b.target_curvature), 1e-5) << name;
    EXPECT_LT(b.sff.symmetry_residual, 1e-6) << name;
    EXPECT_LT(b.sff.range_residual, 1e-5) << name;
  }
}

TEST(RmapCore, RandomImmersionsSatisfyGauss) {
  for (int i = 0; i < 24; ++i) {
    const RandomCase rc = random_case(77, i);
    const MapBundle b = evaluate_bundle(rc.scenario.at(rc.scenario.default_point));
    EXPECT_LT(gauss_residual_framed(b.sff, b.horizontal_curvature(), b.range_curvature()), 1e-3) << rc.target_label;
  }
}

TEST(RmapCore, ProjectionHasRankTwo) {
  const MapBundle b = bundle_of("projection_plumbing");
  EXPECT_EQ(b.rank(), 2);
  EXPECT_EQ(b.frames.vertical.cols(), 1);
  EXPECT_EQ(b.frames.codim(), 0);
}

TEST(RmapCore, RankBelowDeclaredMinimumIsRankDeficient) {
  ScenarioDefinition def = builtin_scenario("projection_plumbing");
  MapScenario s = def.at(def.default_point);
  s.declared_rank_min = 3;
  EXPECT_EQ(code_of([&] { static_cast<void>(evaluate_bundle(s)); }), ErrorCode::RankDeficient);
}

TEST(RmapCore, NonIsometricMapIsRejected) {
  MapScenario s;
  s.name = "dilation";
  s.source = charts::euclidean(3);
  s.target = charts::euclidean(3);
  s.map.source_dim = 3;
  s.map.target_dim = 3;
  s.map.value = [](const Vec& x) { return Vec(2.0 * x); };
  s.base_point = Vec::Zero(3);
  EXPECT_EQ(code_of([&] { static_cast<void>(evaluate_bundle(s)); }), ErrorCode::IsometryViolation);
}

TEST(RmapCore, DimensionMismatchIsReported) {
  MapScenario s;
  s.name = "mismatch";
  s.source = charts::euclidean(3);
  s.target = charts::euclidean(4);
  s.map.source_dim = 3;
  s.map.target_dim = 3;
  s.map.value = [](const Vec& x) { return x; };
  s.base_point = Vec::Zero(3);
  EXPECT_EQ(code_of([&] { static_cast<void>(split_frames(s, kStep)); }), ErrorCode::DimensionMismatch);
}

TEST(RmapCore, AdaptToPlaneLeadsWithThePair) {
  const MapBundle b = bundle_of("sphere_in_flat");
  Vec u(3), v(3);
  u << 1.0, 1.0, 0.0;
  u.normalize();
  v << 0.0, 0.0, 1.0;
  const MapBundle a = adapt_to_plane(b, u, v);
  EXPECT_LT((a.frames.horizontal.col(0) - b.frames.horizontal * u).norm(), 1e-12);
  EXPECT_LT((a.frames.horizontal.col(1) - b.frames.horizontal * v).norm(), 1e-12);
  EXPECT_LT(orthonormality_defect(a.frames.source_metric, a.frames.horizontal), 1e-12);
  EXPECT_NEAR(a.sff.norm_sq(), b.sff.norm_sq(), 1e-10);
  EXPECT_NEAR(tension_field(a.sff).norm_sq, tension_field(b.sff).norm_sq, 1e-10);
}

TEST(RmapCore, CompleteOrthonormalIsOrthogonal) {
  std::mt19937_64 rng(3);
  const Mat q = random_orthogonal(rng, 5);
  const Mat c = complete_orthonormal(q.col(0), q.col(1));
  EXPECT_LT((c.transpose() * c - Mat::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((c.col(0) - q.col(0)).norm(), 1e-12);
  EXPECT_LT((c.col(1) - q.col(1)).norm(), 1e-12);
}

TEST(RmapCore, ShapeOperatorMatchesSlices) {
  const MapBundle b = bundle_of("sphere_in_flat");
  const Mat s = shape_operator(b.frames, b.sff, 0);
  EXPECT_LT((s - b.sff.slices[0]).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(code_of([&] { static_cast<void>(shape_operator(b.frames, b.sff, 1)); }), ErrorCode::DimensionMismatch);
}

}  // namespace
}  // namespace chenmap

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "chenmap/catalog.hpp"
#include "chenmap/chen.hpp"
#include "chenmap/errors.hpp"
#include "chenmap/rmap.hpp"

namespace chenmap {
namespace {

struct Loaded {
  ScenarioDefinition def;
  MapBundle bundle;
};

Loaded load(const std::string& name) {
  ScenarioDefinition def = builtin_scenario(name);
  MapBundle b = evaluate_bundle(def.at(def.default_point));
  return {std::move(def), std::move(b)};
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

HorizontalPlane unit_plane(const Vec& u, const Vec& v) { return {u.normalized(), v.normalized(), "p"}; }

TEST(ChenInequalities, TotallyGeodesicSphereAttainsEquality) {
  const Loaded l = load("sphere_in_sphere");
  for (auto [i, j] : {std::pair{0, 1}, std::pair{0, 2}, std::pair{1, 2}}) {
    const InequalityReport rep = verify_general_cfi(l.bundle, HorizontalPlane::from_indices(3, i, j));
    EXPECT_NEAR(rep.lhs, 1.0, 1e-6);
    EXPECT_NEAR(rep.slack, 0.0, 1e-6);
    EXPECT_TRUE(rep.holds);
    EXPECT_TRUE(rep.equality);
    ASSERT_TRUE(rep.equality_structure.has_value());
    EXPECT_TRUE(rep.equality_structure->is_equality_form);
  }
}

TEST(ChenInequalities, TotallyGeodesicSphereModelCheckIsEquality) {
  const Loaded l = load("sphere_in_sphere");
  const SpaceFormModel model = resolve_model(*l.def.suggested_model, l.def);
  const InequalityReport rep = verify_gcsf_cfi(l.bundle, model, HorizontalPlane::from_indices(3, 0, 1));
  EXPECT_TRUE(rep.equality);
  EXPECT_TRUE(rep.flags.at("derivation_consistent"));
}

TEST(ChenInequalities, UmbilicalSphereIsStrict) {
  const Loaded l = load("sphere_in_flat");
  const InequalityReport rep = verify_general_cfi(l.bundle, HorizontalPlane::from_indices(3, 0, 1));
  EXPECT_NEAR(rep.lhs, 1.0, 1e-6);
  EXPECT_NEAR(rep.values.at("tau_sq"), 9.0, 1e-5);
  EXPECT_NEAR(rep.values.at("epsilon"), 6.0 - 4.5, 1e-5);
  EXPECT_NEAR(rep.values.at("intermediate_bound"), 0.75, 1e-5);
  EXPECT_NEAR(rep.rhs, 0.75, 1e-5);
  EXPECT_LT(std::abs(rep.values.at("scalar_identity_residual")), 1e-5);
  EXPECT_TRUE(rep.holds);
  EXPECT_FALSE(rep.equality);
  EXPECT_FALSE(rep.equality_structure->is_equality_form);
}

TEST(ChenInequalities, PlaneSwapLeavesSlackUnchanged) {
  for (int i = 0; i < 12; ++i) {
    const RandomCase rc = random_case(31, i);
    const MapBundle b = evaluate_bundle(rc.scenario.at(rc.scenario.default_point));
    const int r = b.rank();
    std::mt19937_64 rng(i);
    std::normal_distribution<double> n;
    Vec u(r), v(r);
    for (int k = 0; k < r; ++k) {
      u[k] = n(rng);
      v[k] = n(rng);
    }
    u.normalize();
    v = (v - v.dot(u) * u).normalized();
    const double a = verify_general_cfi(b, {u, v, "uv"}).slack;
    const double c = verify_general_cfi(b, {v, u, "vu"}).slack;
    EXPECT_NEAR(a, c, 1e-12) << rc.target_label;
  }
}

TEST(ChenInequalities, GeneralInequalityHoldsOnRandomImmersions) {
  for (int i = 0; i < 48; ++i) {
    const RandomCase rc = random_case(101, i);
    const MapBundle b = evaluate_bundle(rc.scenario.at(rc.scenario.default_point));
    const InequalityReport rep = verify_general_cfi(b, HorizontalPlane::from_indices(b.rank(), 0, 1));
    EXPECT_TRUE(rep.holds) << rc.target_label << " slack " << rep.slack;
    EXPECT_LT(std::abs(rep.values.at("scalar_identity_residual")), 1e-4) << rc.target_label;
  }
}

TEST(ChenInequalities, ModelInequalitiesHoldOnRandomImmersions) {
  for (int i = 0; i < 48; ++i) {
    const RandomCase rc = random_case(202, i);
    const MapBundle b = evaluate_bundle(rc.scenario.at(rc.scenario.default_point));
    const SpaceFormModel model = resolve_model(rc.model, rc.scenario);
    const HorizontalPlane plane = HorizontalPlane::from_indices(b.rank(), 0, 1);
    const InequalityReport rep =
        model.kind == ModelKind::Gcsf ? verify_gcsf_cfi(b, model, plane) : verify_gssf_cfi(b, model, plane);
    EXPECT_TRUE(rep.holds) << rc.target_label << " slack " << rep.slack;
    EXPECT_TRUE(rep.flags.at("derivation_consistent")) << rc.target_label;
  }
}

TEST(ChenInequalities, ComplexProjectivePlaneIdentity) {
  const Loaded l = load("cp2_chart");
  const SpaceFormModel model = resolve_model(*l.def.suggested_model, l.def);
  const InequalityReport holo = verify_gcsf_cfi(l.bundle, model, HorizontalPlane::from_indices(4, 0, 1));
  const InequalityReport real = verify_gcsf_cfi(l.bundle, model, HorizontalPlane::from_indices(4, 0, 2));
  EXPECT_TRUE(holo.holds);
  EXPECT_TRUE(real.holds);
  EXPECT_NEAR(holo.values.at("theta"), 1.0, 1e-9);
  EXPECT_NEAR(real.values.at("theta"), 0.0, 1e-9);
  EXPECT_NEAR(holo.lhs, 4.0, 1e-5);
  EXPECT_NEAR(real.lhs, 1.0, 1e-5);
}

TEST(ChenInequalities, HeisenbergSasakianCheckHolds) {
  const Loaded l = load("heisenberg_identity_r3");
  const SpaceFormModel model = resolve_model(*l.def.suggested_model, l.def);
  const InequalityReport rep = verify_gssf_cfi(l.bundle, model, HorizontalPlane::from_indices(3, 0, 1));
  EXPECT_TRUE(rep.holds);
  EXPECT_TRUE(rep.flags.at("xi_in_range"));
}

TEST(ChenInequalities, ComplexCorollaryMatchesPrintedForm) {
  const Loaded l = load("sphere_in_sphere");
  const InequalityReport rep =
      verify_corollary_gcsf(l.bundle, "real", 1.0, 0.0, AmbientStructure{}, HorizontalPlane::from_indices(3, 0, 1));
  EXPECT_TRUE(rep.holds);
  EXPECT_TRUE(rep.flags.at("printed_formula_agrees"));
}

TEST(ChenInequalities, ContactCorollaryWithXiInRangeMatchesPrintedForm) {
  const Loaded l = load("s3_in_s5_xi_range");
  const InequalityReport rep =
      verify_corollary_gssf(l.bundle, "almost_C_alpha", 0.25, 0.5, XiPosition::InRange, l.def.structures.at("hopf"),
                            HorizontalPlane::from_indices(3, 0, 1));
  EXPECT_TRUE(rep.holds);
  EXPECT_EQ(rep.name, "corollary_gssf_almost_C_alpha_xi_range");
  EXPECT_TRUE(rep.flags.at("printed_formula_agrees"));
}

TEST(ChenInequalities, ContactCorollaryWithXiNormalDisagreesWithPrintedForm) {
  const Loaded l = load("s3_in_s5_xi_perp");
  const InequalityReport rep =
      verify_corollary_gssf(l.bundle, "almost_C_alpha", 0.25, 0.5, XiPosition::InRangePerp,
                            l.def.structures.at("hopf"), HorizontalPlane::from_indices(3, 0, 1));
  EXPECT_TRUE(rep.holds);
  EXPECT_EQ(rep.name, "corollary_gssf_almost_C_alpha_xi_perp");
  EXPECT_FALSE(rep.flags.at("printed_formula_agrees"));
  // The printed form doubles the f1 term: q (c + 3 a^2) against (r - 2)(r + 1) f1 / 2.
  EXPECT_NEAR(rep.rhs - rep.values.at("printed_rhs"), 2.0, 1e-6);
}

TEST(ChenInequalities, WrongXiCaseIsRejected) {
  const Loaded l = load("s3_in_s5_xi_perp");
  EXPECT_EQ(code_of([&] {
              static_cast<void>(verify_corollary_gssf(l.bundle, "almost_C_alpha", 0.25, 0.5, XiPosition::InRange,
                                                      l.def.structures.at("hopf"),
                                                      HorizontalPlane::from_indices(3, 0, 1)));
            }),
            ErrorCode::XiMixed);
}

TEST(ChenInequalities, FamilyTypeIsEnforced) {
  const Loaded l = load("sphere_in_sphere");
  const Loaded odd = load("flat_identity_r5");
  const HorizontalPlane plane = HorizontalPlane::from_indices(3, 0, 1);
  EXPECT_EQ(code_of([&] {
              static_cast<void>(verify_corollary_gcsf(l.bundle, "sasakian", 1.0, 0.0, AmbientStructure{}, plane));
            }),
            ErrorCode::UnknownFamily);
  EXPECT_EQ(code_of([&] {
              static_cast<void>(verify_corollary_gcsf(odd.bundle, "real_kahler", 1.0, 0.0, AmbientStructure{}, plane));
            }),
            ErrorCode::DimensionMismatch);
}

TEST(ChenInequalities, RankTwoIsRankDeficient) {
  const Loaded l = load("sphere_inclusion");
  EXPECT_EQ(code_of([&] { static_cast<void>(verify_general_cfi(l.bundle, HorizontalPlane::from_indices(2, 0, 1))); }),
            ErrorCode::RankDeficient);
}

TEST(ChenInequalities, DegeneratePlanesAreRejected) {
  const Loaded l = load("sphere_in_flat");
  EXPECT_EQ(code_of([] { static_cast<void>(HorizontalPlane::from_indices(3, 1, 1)); }), ErrorCode::DegeneratePlane);
  EXPECT_EQ(code_of([] { static_cast<void>(HorizontalPlane::from_indices(3, 0, 3)); }), ErrorCode::DegeneratePlane);
  const HorizontalPlane skew{Vec::Unit(3, 0), Vec::Ones(3).normalized(), "skew"};
  EXPECT_EQ(code_of([&] { static_cast<void>(verify_general_cfi(l.bundle, skew)); }), ErrorCode::DegeneratePlane);
}

TEST(ChenInequalities, ArbitraryPlaneOnUnitSphere) {
  const Loaded l = load("sphere_in_sphere");
  Vec u(3), v(3);
  u << 1.0, 2.0, 2.0;
  v << 2.0, -1.0, 0.0;
  const InequalityReport rep = verify_general_cfi(l.bundle, unit_plane(u, v));
  EXPECT_NEAR(rep.lhs, 1.0, 1e-6);
  EXPECT_TRUE(rep.equality);
}

SecondFundamentalForm single_slice(const Mat& s) {
  SecondFundamentalForm b;
  b.slices = {s};
  return b;
}

TEST(EqualityStructure, AcceptsTheExtremalPattern) {
  Mat s = Mat::Zero(3, 3);
  s(0, 0) = 0.3;
  s(1, 1) = 1.1;
  s(2, 2) = 1.4;
  const EqualityDiagnostic d = detect_equality_structure(single_slice(s));
  EXPECT_TRUE(d.is_equality_form);
  EXPECT_TRUE(d.violations.empty());
}

TEST(EqualityStructure, RotatesAwayTheLeadingOffDiagonal) {
  Mat s = Mat::Zero(3, 3);
  s(0, 0) = 0.3;
  s(1, 1) = 1.1;
  s(0, 1) = s(1, 0) = 0.4;
  s(2, 2) = 1.4;
  EXPECT_TRUE(detect_equality_structure(single_slice(s)).is_equality_form);
}

TEST(EqualityStructure, ReportsOffendingCells) {
  Mat s = Mat::Zero(3, 3);
  s(0, 0) = 0.3;
  s(1, 1) = 1.1;
  s(2, 2) = 1.4;
  s(0, 2) = s(2, 0) = 0.5;
  const EqualityDiagnostic d = detect_equality_structure(single_slice(s));
  EXPECT_FALSE(d.is_equality_form);
  ASSERT_EQ(d.violations.size(), 1u);
  EXPECT_EQ(d.violations[0], "S_4[1][3]");
  EXPECT_NEAR(d.max_violation, 0.5, 1e-12);
}

TEST(EqualityStructure, TracelessNormalsNeedOpposedLeadingEntries) {
  SecondFundamentalForm b;
  Mat tau_dir = Mat::Zero(3, 3);
  Mat other = Mat::Zero(3, 3);
  other(0, 0) = 0.7;
  other(1, 1) = -0.7;
  other(0, 1) = other(1, 0) = 0.2;
  b.slices = {tau_dir, other};
  EXPECT_TRUE(detect_equality_structure(b).is_equality_form);
  b.slices[1](2, 2) = 0.1;
  EXPECT_FALSE(detect_equality_structure(b).is_equality_form);
}

}  // namespace
}  // namespace chenmap

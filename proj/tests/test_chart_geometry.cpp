#include <gtest/gtest.h>

#include <cmath>

#include "chenmap/chart.hpp"
#include "chenmap/chart_geometry.hpp"
#include "chenmap/errors.hpp"
#include "chenmap/polynomial.hpp"

namespace chenmap {
namespace {

constexpr double kStep = 1e-4;

Vec point(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

TEST(ChartGeometry, FlatPolarChristoffelSymbols) {
  const MetricChart chart = charts::polar_plane();
  const double r = 1.7;
  const Christoffel gamma = christoffel(chart, point({r, 0.4}), kStep);
  EXPECT_NEAR(gamma(0, 1, 1), -r, 1e-8);
  EXPECT_NEAR(gamma(1, 0, 1), 1.0 / r, 1e-8);
  EXPECT_NEAR(gamma(1, 1, 0), 1.0 / r, 1e-8);
  EXPECT_NEAR(gamma(0, 0, 0), 0.0, 1e-12);
  EXPECT_NEAR(gamma(0, 0, 1), 0.0, 1e-12);
  EXPECT_NEAR(gamma(1, 1, 1), 0.0, 1e-12);
}

TEST(ChartGeometry, FlatPolarCurvatureVanishes) {
  const CurvatureTensor rm = riemann(charts::polar_plane(), point({0.9, -1.2}), kStep);
  EXPECT_LT(rm.frobenius_norm(), 1e-6);
}

TEST(ChartGeometry, EuclideanChristoffelAndCurvatureVanish) {
  const MetricChart chart = charts::euclidean(4);
  const Vec x = point({0.3, -0.1, 2.0, 0.5});
  EXPECT_EQ(christoffel(chart, x, kStep).max_abs(), 0.0);
  EXPECT_EQ(riemann(chart, x, kStep).frobenius_norm(), 0.0);
}

class SpaceFormCurvature : public ::testing::TestWithParam<double> {};

TEST_P(SpaceFormCurvature, StereographicSphereHasConstantSectionalCurvature) {
  const double c = GetParam();
  const MetricChart chart = charts::stereographic_sphere(3, c);
  const Vec x = point({0.2, -0.1, 0.15});
  const CurvatureTensor rm = riemann(chart, x, kStep);
  const Mat g = checked_metric(chart, x);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      EXPECT_NEAR(sectional_curvature(rm, g, Vec::Unit(3, i), Vec::Unit(3, j)), c, 1e-6) << i << "," << j;
  const Vec u = point({1.0, 2.0, -0.5});
  const Vec v = point({0.3, -1.0, 1.5});
  EXPECT_NEAR(sectional_curvature(rm, g, u, v), c, 1e-6);
  EXPECT_LT(rm.max_abs_difference(constant_curvature_tensor(g, c)), 1e-5);
}

INSTANTIATE_TEST_SUITE_P(Curvatures, SpaceFormCurvature, ::testing::Values(1.0, 0.25, 4.0, -1.0, -0.3));

TEST(ChartGeometry, FubiniStudyLineHasCurvatureFour) {
  const MetricChart chart = charts::fubini_study(1, 1.0);
  for (const Vec& x : {point({0.0, 0.0}), point({0.3, -0.4}), point({1.1, 0.7})}) {
    const CurvatureTensor rm = riemann(chart, x, kStep);
    const Mat g = checked_metric(chart, x);
    EXPECT_NEAR(sectional_curvature(rm, g, Vec::Unit(2, 0), Vec::Unit(2, 1)), 4.0, 1e-5);
  }
}

TEST(ChartGeometry, FubiniStudyHolomorphicAndTotallyRealPlanes) {
  const MetricChart chart = charts::fubini_study(2, 1.0);
  const Vec x = Vec::Zero(4);
  const CurvatureTensor rm = riemann(chart, x, kStep);
  const Mat g = checked_metric(chart, x);
  // (x1, y1) is a complex line, (x1, x2) a totally real plane.
  EXPECT_NEAR(sectional_curvature(rm, g, Vec::Unit(4, 0), Vec::Unit(4, 1)), 4.0, 1e-5);
  EXPECT_NEAR(sectional_curvature(rm, g, Vec::Unit(4, 0), Vec::Unit(4, 2)), 1.0, 1e-5);
}

TEST(ChartGeometry, CurvatureSymmetriesHoldNumerically) {
  const MetricChart chart = charts::fubini_study(2, -0.5);
  const CurvatureTensor rm = riemann(chart, point({0.2, 0.1, -0.3, 0.25}), kStep);
  EXPECT_LT(symmetry_residuals(rm).max(), 1e-6);
}

TEST(ChartGeometry, DoubledScalarCurvatureOfUnitSphere) {
  const MetricChart chart = charts::stereographic_sphere(4, 1.0);
  const Vec x = point({0.1, 0.2, -0.1, 0.05});
  const CurvatureTensor rm = riemann(chart, x, kStep);
  const Mat g = checked_metric(chart, x);
  const Mat frame = g.llt().matrixL().solve(Mat::Identity(4, 4)).transpose();
  EXPECT_LT(orthonormality_defect(g, frame), 1e-12);
  EXPECT_NEAR(scalar_curvature_on_subspace(rm, g, frame), 12.0, 1e-4);
}

TEST(ChartGeometry, ChristoffelErrorShrinksQuadratically) {
  const MetricChart chart = charts::geodesic_polar_sphere();
  const double t = 0.8;
  const Vec x = point({t, 0.3});
  auto error = [&](double h) {
    const Christoffel gamma = christoffel(chart, x, h);
    return std::abs(gamma(0, 1, 1) + std::sin(t) * std::cos(t)) + std::abs(gamma(1, 0, 1) - std::cos(t) / std::sin(t));
  };
  const double coarse = error(1e-2);
  const double fine = error(5e-3);
  EXPECT_GT(coarse, 0.0);
  EXPECT_NEAR(coarse / fine, 4.0, 0.2);
}

TEST(ChartGeometry, SingularMetricIsRejected) {
  MetricChart chart;
  chart.name = "degenerate";
  chart.dim = 2;
  chart.metric_at = [](const Vec&) {
    Mat g = Mat::Identity(2, 2);
    g(1, 1) = 0.0;
    return g;
  };
  try {
    static_cast<void>(checked_metric(chart, Vec::Zero(2)));
    FAIL() << "expected SingularMetric";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularMetric);
  }
}

TEST(ChartGeometry, OutOfDomainIsRejected) {
  try {
    static_cast<void>(checked_metric(charts::polar_plane(), point({-1.0, 0.0})));
    FAIL() << "expected OutOfDomain";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::OutOfDomain);
  }
}

TEST(ChartGeometry, DegeneratePlaneIsRejected) {
  const Mat g = Mat::Identity(3, 3);
  const CurvatureTensor rm = constant_curvature_tensor(g, 1.0);
  const Vec u = Vec::Unit(3, 0);
  try {
    static_cast<void>(sectional_curvature(rm, g, u, 2.0 * u));
    FAIL() << "expected DegeneratePlane";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegeneratePlane);
  }
}

TEST(ChartGeometry, InverseStereographicIsIsometric) {
  const double c = 0.5;
  const MetricChart chart = charts::stereographic_sphere(3, c);
  const SmoothMap embed = charts::inverse_stereographic(3, c);
  const Vec x = point({0.4, -0.2, 0.7});
  const Mat jac = embed.jacobian(x);
  EXPECT_LT((jac.transpose() * jac - chart.metric_at(x)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(embed.value(x).squaredNorm(), 1.0 / c, 1e-12);
  EXPECT_LT((finite_difference_jacobian(embed.value, x, kStep) - jac).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(ChartGeometry, WarpedProductCurvatures) {
  // Flat fiber with warp cosh: K(fiber, t) = -w''/w = -1.
  const MetricChart chart = charts::warped_line_product(charts::euclidean(2), charts::warp_cosh());
  const Vec x = point({0.1, 0.2, 0.3});
  const CurvatureTensor rm = riemann(chart, x, kStep);
  const Mat g = checked_metric(chart, x);
  EXPECT_NEAR(sectional_curvature(rm, g, Vec::Unit(3, 0), Vec::Unit(3, 2)), -1.0, 1e-6);
}

TEST(Polynomial, EvaluatesValueAndGradient) {
  const Polynomial p(2, {{2.0, {1, 0}}, {3.0, {0, 2}}, {-1.0, {2, 2}}});
  const Vec x = point({1.0, 2.0});
  EXPECT_DOUBLE_EQ(p(x), 2.0 + 12.0 - 4.0);
  const Vec grad = p.gradient(x);
  EXPECT_DOUBLE_EQ(grad[0], 2.0 - 8.0);
  EXPECT_DOUBLE_EQ(grad[1], 12.0 - 4.0);
  EXPECT_EQ(p.degree(), 4);
}

TEST(Polynomial, RejectsDegreeAboveFour) {
  try {
    Polynomial p(2, {{1.0, {3, 2}}});
    FAIL() << "expected SchemaError";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), ErrorCode::SchemaError);
  }
}

TEST(Polynomial, RejectsExponentCountMismatch) {
  EXPECT_THROW(Polynomial(3, {{1.0, {1, 0}}}), GeometryError);
}

TEST(Polynomial, ChartDomainIsPositiveDefiniteRegion) {
  // g = 1 - x^2
  const Polynomial a(1, {{1.0, {0}}, {-1.0, {2}}});
  const MetricChart chart = polynomial_chart("disc", 1, {{a}});
  EXPECT_TRUE(chart.contains(point({0.5})));
  EXPECT_FALSE(chart.contains(point({1.5})));
}

TEST(Polynomial, MapJacobianIsExact) {
  const Polynomial f(2, {{1.0, {2, 1}}, {0.5, {0, 3}}});
  const Polynomial g(2, {{1.0, {1, 0}}});
  const SmoothMap m = polynomial_map(2, {f, g});
  const Vec x = point({0.7, -1.3});
  const Mat jac = m.jacobian(x);
  EXPECT_DOUBLE_EQ(jac(0, 0), 2.0 * 0.7 * -1.3);
  EXPECT_DOUBLE_EQ(jac(0, 1), 0.49 + 1.5 * 1.69);
  EXPECT_DOUBLE_EQ(jac(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(jac(1, 1), 0.0);
}

}  // namespace
}  // namespace chenmap

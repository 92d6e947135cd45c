#pragma once

#include <functional>
#include <memory>
#include <string>

#include "chenmap/config.hpp"
#include "chenmap/tensor.hpp"

namespace chenmap {

using MetricField = std::function<Mat(const Vec&)>;
using DomainPredicate = std::function<bool(const Vec&)>;

// A coordinate chart carrying a smooth metric field.
struct MetricChart {
  std::string name;
  int dim = 0;
  MetricField metric_at;
  DomainPredicate domain_check = [](const Vec&) { return true; };

  [[nodiscard]] bool contains(const Vec& x) const {
    return x.size() == dim && domain_check(x);
  }
};

// Evaluates the metric and throws SingularMetric unless it is symmetric and
// positive definite with acceptable conditioning; throws OutOfDomain outside the chart.
Mat checked_metric(const MetricChart& chart, const Vec& x, const Tolerances& tol = {});

// Inverse of a metric already known to be positive definite.
Mat metric_inverse(const Mat& g, const Tolerances& tol = {});

// Smooth map between coordinate domains. `jacobian` is optional; when absent it is
// obtained by central differences of `value`.
struct SmoothMap {
  int source_dim = 0;
  int target_dim = 0;
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> jacobian;

  [[nodiscard]] Mat jacobian_at(const Vec& x, double step) const;
};

// Central-difference Jacobian of an arbitrary vector function.
Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double step);

namespace charts {

MetricChart euclidean(int n);

// g = 4 I / (1 + c|x|^2)^2: constant sectional curvature c (c < 0 gives the Poincare ball).
MetricChart stereographic_sphere(int n, double c);

// Isometric parameterization of the stereographic chart onto the sphere of
// radius 1/sqrt(c) in R^{n+1}, with analytic Jacobian.
SmoothMap inverse_stereographic(int n, double c);

// g = diag(1, x_1^2) on the half plane x_1 > 0.
MetricChart polar_plane();

// g = diag(1, sin^2 x_1): geodesic polar coordinates on the unit sphere.
MetricChart geodesic_polar_sphere();

// Graph chart of the unit S^2 over the disc, induced from R^3.
MetricChart graph_sphere2();
Vec graph_sphere2_embedding(const Vec& x);
Mat graph_sphere2_embedding_jacobian(const Vec& x);

// Affine chart of CP^s (c > 0) or the complex hyperbolic space (c < 0) with
// holomorphic sectional curvature 4c. Real coordinates ordered (x1, y1, x2, y2, ...).
MetricChart fubini_study(int s, double c);

// R^{2s+1} with its standard Sasakian metric, coordinates (x_1..x_s, y_1..y_s, z).
MetricChart heisenberg(int s);

// (fiber x R) with metric w(t)^2 g_F + dt^2; t is the last coordinate.
struct Warp {
  std::function<double(double)> w, dw, ddw;
  std::string name;
};
Warp warp_constant();
Warp warp_cosh();
Warp warp_cos();
Warp warp_exp(double rate = 1.0);  // w = exp(rate t)
MetricChart warped_line_product(const MetricChart& fiber, const Warp& warp);

// Induced metric J^T g_N(f(x)) J of a map into a target chart.
MetricChart pullback(const MetricChart& target, const SmoothMap& map, const std::string& name);

// Base chart times R^k with fiber metric exp(2 a.x) I_k; the base coordinates come first.
MetricChart with_fibers(const MetricChart& base, int fiber_dim, const Vec& log_warp_gradient);

}  // namespace charts
}  // namespace chenmap

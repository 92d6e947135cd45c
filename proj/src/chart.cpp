#include "chenmap/chart.hpp"

#include <cmath>
#include <sstream>

#include "chenmap/errors.hpp"

namespace chenmap {

namespace {

std::string describe(const Vec& x) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ')';
  return os.str();
}

}  // namespace

Mat checked_metric(const MetricChart& chart, const Vec& x, const Tolerances& tol) {
  if (!chart.contains(x)) fail(ErrorCode::OutOfDomain, chart.name + " at " + describe(x));
  Mat g = chart.metric_at(x);
  if (g.rows() != chart.dim || g.cols() != chart.dim)
    fail(ErrorCode::DimensionMismatch, chart.name + ": metric has wrong shape");
  if (!g.allFinite()) fail(ErrorCode::SingularMetric, chart.name + ": non-finite metric at " + describe(x));
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > tol.symmetry * scale)
    fail(ErrorCode::SingularMetric, chart.name + ": metric not symmetric at " + describe(x));
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::SingularMetric, chart.name + ": metric not positive definite at " + describe(x));
  const Mat& l = llt.matrixLLT();
  double min_pivot = l(0, 0) * l(0, 0);
  for (int i = 1; i < chart.dim; ++i) min_pivot = std::min(min_pivot, l(i, i) * l(i, i));
  if (min_pivot <= tol.pd_pivot * scale)
    fail(ErrorCode::SingularMetric, chart.name + ": Cholesky pivot below threshold at " + describe(x));
  return g;
}

Mat metric_inverse(const Mat& g, const Tolerances& tol) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(g, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo <= 0.0 || hi / lo > tol.metric_condition)
    fail(ErrorCode::SingularMetric, "metric condition number above threshold");
  return g.llt().solve(Mat::Identity(g.rows(), g.cols()));
}

Mat finite_difference_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double step) {
  const Vec f0 = f(x);
  Mat jac(f0.size(), x.size());
  Vec xp = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    xp[j] = x[j] + step;
    const Vec fp = f(xp);
    xp[j] = x[j] - step;
    const Vec fm = f(xp);
    xp[j] = x[j];
    jac.col(j) = (fp - fm) / (2.0 * step);
  }
  return jac;
}

Mat SmoothMap::jacobian_at(const Vec& x, double step) const {
  if (jacobian) return jacobian(x);
  return finite_difference_jacobian(value, x, step);
}

namespace charts {

MetricChart euclidean(int n) {
  MetricChart c;
  c.name = "euclidean" + std::to_string(n);
  c.dim = n;
  c.metric_at = [n](const Vec&) { return Mat(Mat::Identity(n, n)); };
  return c;
}

MetricChart stereographic_sphere(int n, double curvature) {
  MetricChart c;
  c.name = "stereographic_sphere" + std::to_string(n);
  c.dim = n;
  c.metric_at = [n, curvature](const Vec& x) {
    const double d = 1.0 + curvature * x.squaredNorm();
    return Mat(Mat::Identity(n, n) * (4.0 / (d * d)));
  };
  c.domain_check = [curvature](const Vec& x) {
    // Keep a margin from the ideal boundary of the Poincare ball.
    return 1.0 + curvature * x.squaredNorm() > 0.05;
  };
  return c;
}

MetricChart polar_plane() {
  MetricChart c;
  c.name = "polar_plane";
  c.dim = 2;
  c.metric_at = [](const Vec& x) {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    g(1, 1) = x[0] * x[0];
    return g;
  };
  c.domain_check = [](const Vec& x) { return x[0] > 0.0; };
  return c;
}

MetricChart geodesic_polar_sphere() {
  MetricChart c;
  c.name = "geodesic_polar_sphere";
  c.dim = 2;
  c.metric_at = [](const Vec& x) {
    Mat g = Mat::Zero(2, 2);
    g(0, 0) = 1.0;
    const double s = std::sin(x[0]);
    g(1, 1) = s * s;
    return g;
  };
  c.domain_check = [](const Vec& x) { return x[0] > 0.0 && x[0] < M_PI; };
  return c;
}

SmoothMap inverse_stereographic(int n, double c) {
  if (c <= 0.0) fail(ErrorCode::DimensionMismatch, "inverse stereographic map needs c > 0");
  const double rc = std::sqrt(c);
  SmoothMap m;
  m.source_dim = n;
  m.target_dim = n + 1;
  m.value = [n, c, rc](const Vec& x) {
    const double q = x.squaredNorm();
    const double s = 1.0 + c * q;
    Vec y(n + 1);
    y.head(n) = 2.0 * x / s;
    y[n] = (1.0 - c * q) / (rc * s);
    return y;
  };
  m.jacobian = [n, c, rc](const Vec& x) {
    const double s = 1.0 + c * x.squaredNorm();
    Mat j(n + 1, n);
    j.topRows(n) = 2.0 * Mat::Identity(n, n) / s - 4.0 * c * x * x.transpose() / (s * s);
    j.row(n) = -4.0 * rc * x.transpose() / (s * s);
    return j;
  };
  return m;
}

Vec graph_sphere2_embedding(const Vec& x) {
  Vec y(3);
  y << x[0], x[1], std::sqrt(1.0 - x[0] * x[0] - x[1] * x[1]);
  return y;
}

Mat graph_sphere2_embedding_jacobian(const Vec& x) {
  const double h = std::sqrt(1.0 - x[0] * x[0] - x[1] * x[1]);
  Mat j(3, 2);
  j << 1.0, 0.0, 0.0, 1.0, -x[0] / h, -x[1] / h;
  return j;
}

MetricChart graph_sphere2() {
  MetricChart c;
  c.name = "graph_sphere2";
  c.dim = 2;
  c.metric_at = [](const Vec& x) {
    const Mat j = graph_sphere2_embedding_jacobian(x);
    return Mat(j.transpose() * j);
  };
  c.domain_check = [](const Vec& x) { return x.squaredNorm() < 0.81; };
  return c;
}

MetricChart fubini_study(int s, double curvature) {
  MetricChart c;
  c.name = "fubini_study" + std::to_string(s);
  c.dim = 2 * s;
  c.metric_at = [s, curvature](const Vec& x) {
    double z2 = x.squaredNorm();
    const double d = 1.0 + curvature * z2;
    const double inv = 1.0 / (d * d);
    Mat g(2 * s, 2 * s);
    for (int a = 0; a < s; ++a) {
      const double xa = x[2 * a], ya = x[2 * a + 1];
      for (int b = 0; b < s; ++b) {
        const double xb = x[2 * b], yb = x[2 * b + 1];
        // H_ab = A_ab + i B_ab, the Hermitian form in complex coordinates.
        const double re = ((a == b ? d : 0.0) - curvature * (xa * xb + ya * yb)) * inv;
        const double im = -curvature * (xa * yb - ya * xb) * inv;
        g(2 * a, 2 * b) = re;
        g(2 * a + 1, 2 * b + 1) = re;
        g(2 * a, 2 * b + 1) = im;
        g(2 * a + 1, 2 * b) = -im;
      }
    }
    return g;
  };
  c.domain_check = [curvature](const Vec& x) { return 1.0 + curvature * x.squaredNorm() > 0.05; };
  return c;
}

MetricChart heisenberg(int s) {
  MetricChart c;
  c.name = "heisenberg" + std::to_string(2 * s + 1);
  c.dim = 2 * s + 1;
  c.metric_at = [s](const Vec& x) {
    const int n = 2 * s + 1;
    // eta = (dz - sum y_i dx_i) / 2, g = eta (x) eta + (dx^2 + dy^2) / 4
    Vec eta = Vec::Zero(n);
    for (int i = 0; i < s; ++i) eta[i] = -0.5 * x[s + i];
    eta[n - 1] = 0.5;
    Mat g = eta * eta.transpose();
    for (int i = 0; i < 2 * s; ++i) g(i, i) += 0.25;
    return g;
  };
  return c;
}

Warp warp_constant() {
  return {[](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }, "constant"};
}
Warp warp_cosh() {
  return {[](double t) { return std::cosh(t); }, [](double t) { return std::sinh(t); },
          [](double t) { return std::cosh(t); }, "cosh"};
}
Warp warp_cos() {
  return {[](double t) { return std::cos(t); }, [](double t) { return -std::sin(t); },
          [](double t) { return -std::cos(t); }, "cos"};
}
Warp warp_exp(double rate) {
  return {[rate](double t) { return std::exp(rate * t); }, [rate](double t) { return rate * std::exp(rate * t); },
          [rate](double t) { return rate * rate * std::exp(rate * t); }, "exp"};
}

MetricChart warped_line_product(const MetricChart& fiber, const Warp& warp) {
  MetricChart c;
  c.name = fiber.name + "_x_" + warp.name;
  c.dim = fiber.dim + 1;
  const int k = fiber.dim;
  c.metric_at = [fiber, warp, k](const Vec& x) {
    Mat g = Mat::Zero(k + 1, k + 1);
    const double w = warp.w(x[k]);
    g.topLeftCorner(k, k) = w * w * fiber.metric_at(x.head(k));
    g(k, k) = 1.0;
    return g;
  };
  c.domain_check = [fiber, warp, k](const Vec& x) {
    return fiber.domain_check(x.head(k)) && warp.w(x[k]) > 0.05;
  };
  return c;
}

MetricChart pullback(const MetricChart& target, const SmoothMap& map, const std::string& name) {
  MetricChart c;
  c.name = name;
  c.dim = map.source_dim;
  c.metric_at = [target, map](const Vec& x) {
    const Mat j = map.jacobian_at(x, 1e-5);
    return Mat(j.transpose() * target.metric_at(map.value(x)) * j);
  };
  c.domain_check = [target, map](const Vec& x) { return target.contains(map.value(x)); };
  return c;
}

MetricChart with_fibers(const MetricChart& base, int fiber_dim, const Vec& log_warp_gradient) {
  MetricChart c;
  c.name = base.name + "_fibered" + std::to_string(fiber_dim);
  c.dim = base.dim + fiber_dim;
  const int b = base.dim;
  c.metric_at = [base, b, fiber_dim, log_warp_gradient](const Vec& x) {
    Mat g = Mat::Zero(b + fiber_dim, b + fiber_dim);
    g.topLeftCorner(b, b) = base.metric_at(x.head(b));
    const double f = std::exp(2.0 * log_warp_gradient.dot(x.head(b)));
    for (int i = 0; i < fiber_dim; ++i) g(b + i, b + i) = f;
    return g;
  };
  c.domain_check = [base, b](const Vec& x) { return base.domain_check(x.head(b)); };
  return c;
}

}  // namespace charts
}  // namespace chenmap

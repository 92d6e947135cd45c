#include "chenmap/chart_geometry.hpp"

#include <cmath>
#include <vector>

#include "chenmap/errors.hpp"

namespace chenmap {

namespace {

Mat stencil_metric(const MetricChart& chart, const Vec& x) {
  if (!chart.contains(x)) fail(ErrorCode::OutOfDomain, chart.name + ": difference stencil leaves the chart");
  return chart.metric_at(x);
}

}  // namespace

Christoffel christoffel(const MetricChart& chart, const Vec& x, double step, const Tolerances& tol) {
  const int n = chart.dim;
  const Mat g = checked_metric(chart, x, tol);
  const Mat ginv = metric_inverse(g, tol);

  // dg[m](i, j) = d_m g_ij
  std::vector<Mat> dg(n);
  Vec xs = x;
  for (int m = 0; m < n; ++m) {
    xs[m] = x[m] + step;
    const Mat gp = stencil_metric(chart, xs);
    xs[m] = x[m] - step;
    const Mat gm = stencil_metric(chart, xs);
    xs[m] = x[m];
    dg[m] = (gp - gm) / (2.0 * step);
  }

  Christoffel gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Vec lowered(n);
      for (int l = 0; l < n; ++l) lowered[l] = 0.5 * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      const Vec raised = ginv * lowered;
      for (int k = 0; k < n; ++k) {
        gamma(k, i, j) = raised[k];
        gamma(k, j, i) = raised[k];
      }
    }
  return gamma;
}

CurvatureTensor riemann(const MetricChart& chart, const Vec& x, double step, const Tolerances& tol) {
  const int n = chart.dim;
  const Mat g = checked_metric(chart, x, tol);
  const Christoffel gamma = christoffel(chart, x, step, tol);

  // dgamma[m](l, i, j) = d_m Gamma^l_ij
  std::vector<Christoffel> dgamma;
  dgamma.reserve(n);
  Vec xs = x;
  for (int m = 0; m < n; ++m) {
    xs[m] = x[m] + step;
    const Christoffel gp = christoffel(chart, xs, step, tol);
    xs[m] = x[m] - step;
    const Christoffel gm = christoffel(chart, xs, step, tol);
    xs[m] = x[m];
    Christoffel d(n);
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(l, i, j) = (gp(l, i, j) - gm(l, i, j)) / (2.0 * step);
    dgamma.push_back(std::move(d));
  }

  // (R(d_i, d_j) d_k)^p = d_i G^p_jk - d_j G^p_ik + G^p_im G^m_jk - G^p_jm G^m_ik
  CurvatureTensor out(n);
  Vec up(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      for (int k = 0; k < n; ++k) {
        for (int p = 0; p < n; ++p) {
          double v = dgamma[i](p, j, k) - dgamma[j](p, i, k);
          for (int m = 0; m < n; ++m) v += gamma(p, i, m) * gamma(m, j, k) - gamma(p, j, m) * gamma(m, i, k);
          up[p] = v;
        }
        const Vec lowered = g * up;
        for (int l = 0; l < n; ++l) out(i, j, k, l) = lowered[l];
      }
    }
  return out;
}

double sectional_curvature(const CurvatureTensor& r, const Mat& g, const Vec& u, const Vec& v,
                           const Tolerances& tol) {
  const double uu = u.dot(g * u);
  const double vv = v.dot(g * v);
  const double uv = u.dot(g * v);
  const double gram = uu * vv - uv * uv;
  if (!(gram > tol.degenerate_plane * uu * vv) || uu <= 0.0 || vv <= 0.0)
    fail(ErrorCode::DegeneratePlane, "Gram determinant below threshold");
  return r.apply(u, v, v, u) / gram;
}

double orthonormality_defect(const Mat& g, const Mat& frame) {
  if (frame.cols() == 0) return 0.0;
  const Mat gram = frame.transpose() * g * frame;
  return (gram - Mat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

double doubled_scalar_curvature(const CurvatureTensor& framed) {
  double s = 0.0;
  const int r = framed.dim();
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) s += framed(i, j, j, i);
  return s;
}

double scalar_curvature_on_subspace(const CurvatureTensor& r, const Mat& g, const Mat& frame,
                                    const Tolerances& tol) {
  if (orthonormality_defect(g, frame) > tol.frame_orthonormal)
    fail(ErrorCode::NonOrthonormalFrame, "frame is not orthonormal for the metric");
  return doubled_scalar_curvature(r.restrict_to(frame));
}

}  // namespace chenmap

#include "chenmap/rmap.hpp"

#include <cmath>
#include <string>

#include "chenmap/chart_geometry.hpp"
#include "chenmap/errors.hpp"

namespace chenmap {

namespace {

// Modified Gram-Schmidt with column pivoting on metric-projected coordinate
// vectors: picks the candidate with the largest remaining g-norm (lowest index
// on ties), normalizes it and deflates the rest.
Mat pivoted_gram_schmidt(Mat candidates, const Mat& g, int count) {
  const int n = static_cast<int>(candidates.rows());
  Mat out(n, count);
  std::vector<bool> used(candidates.cols(), false);
  for (int c = 0; c < count; ++c) {
    int best = -1;
    double best_norm = -1.0;
    for (int j = 0; j < candidates.cols(); ++j) {
      if (used[j]) continue;
      const double nrm = std::sqrt(std::max(0.0, candidates.col(j).dot(g * candidates.col(j))));
      if (nrm > best_norm * (1.0 + 1e-9)) {
        best_norm = nrm;
        best = j;
      }
    }
    used[best] = true;
    Vec q = candidates.col(best) / best_norm;
    // one reorthogonalization pass against earlier vectors
    for (int k = 0; k < c; ++k) q -= out.col(k) * out.col(k).dot(g * q);
    q /= std::sqrt(q.dot(g * q));
    out.col(c) = q;
    const Vec gq = g * q;
    for (int j = 0; j < candidates.cols(); ++j) {
      if (!used[j]) candidates.col(j) -= q * gq.dot(candidates.col(j));
    }
  }
  return out;
}

}  // namespace

double SecondFundamentalForm::norm_sq() const {
  double s = 0.0;
  for (const Mat& m : slices) s += m.squaredNorm();
  return s;
}

SecondFundamentalForm SecondFundamentalForm::rotated_horizontal(const Mat& q) const {
  SecondFundamentalForm out = *this;
  for (Mat& m : out.slices) m = q.transpose() * m * q;
  return out;
}

SecondFundamentalForm SecondFundamentalForm::rotated_normal(const Mat& o) const {
  SecondFundamentalForm out = *this;
  for (int k = 0; k < codim(); ++k) {
    out.slices[k].setZero();
    for (int q = 0; q < codim(); ++q) out.slices[k] += o(k, q) * slices[q];
  }
  return out;
}

SplitFrames split_frames(const MapScenario& s, double step, const Tolerances& tol) {
  const int m = s.source.dim;
  const int n = s.target.dim;
  if (s.map.source_dim != m || s.map.target_dim != n)
    fail(ErrorCode::DimensionMismatch, s.name + ": map dimensions do not match the charts");

  SplitFrames f;
  f.base_point = s.base_point;
  f.source_metric = checked_metric(s.source, s.base_point, tol);
  f.image_point = s.map.value(s.base_point);
  f.target_metric = checked_metric(s.target, f.image_point, tol);
  f.push = finite_difference_jacobian(s.map.value, s.base_point, step);

  const Eigen::LLT<Mat> l1(f.source_metric);
  const Eigen::LLT<Mat> l2(f.target_metric);
  const Mat l1_inv_t = Mat(l1.matrixU()).inverse();  // L1^{-T}
  const Mat l2_inv_t = Mat(l2.matrixU()).inverse();
  // Pushforward between orthonormal coordinates.
  const Mat a = Mat(l2.matrixU()) * f.push * l1_inv_t;
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  f.singular_values = svd.singularValues();
  const double top = f.singular_values.size() ? f.singular_values[0] : 0.0;
  int r = 0;
  for (Eigen::Index i = 0; i < f.singular_values.size(); ++i)
    if (top > 0.0 && f.singular_values[i] > tol.rank_relative * top) ++r;
  if (r < s.declared_rank_min)
    fail(ErrorCode::RankDeficient, s.name + ": rank " + std::to_string(r) + " below " +
                                       std::to_string(s.declared_rank_min));

  const Mat h_basis = l1_inv_t * svd.matrixV().leftCols(r);
  const Mat proj_h = h_basis * h_basis.transpose() * f.source_metric;
  const Mat id_m = Mat::Identity(m, m);
  f.horizontal = pivoted_gram_schmidt(proj_h, f.source_metric, r);
  f.vertical = pivoted_gram_schmidt(id_m - proj_h, f.source_metric, m - r);

  f.range = f.push * f.horizontal;
  f.isometry_defect = orthonormality_defect(f.target_metric, f.range);
  if (f.isometry_defect > tol.isometry)
    fail(ErrorCode::IsometryViolation,
         s.name + ": g1(X,Y) != g2(pi*X, pi*Y) on H, defect " + std::to_string(f.isometry_defect));

  const Mat r_basis = l2_inv_t * svd.matrixU().leftCols(r);
  const Mat proj_r = r_basis * r_basis.transpose() * f.target_metric;
  f.range_perp = pivoted_gram_schmidt(Mat::Identity(n, n) - proj_r, f.target_metric, n - r);
  return f;
}

SecondFundamentalForm second_fundamental_form(const MapScenario& s, const SplitFrames& f, double step,
                                              const Tolerances& tol) {
  const int r = f.rank();
  const Christoffel gm = christoffel(s.source, f.base_point, step, tol);
  const Christoffel gn = christoffel(s.target, f.image_point, step, tol);
  const Mat& g2 = f.target_metric;

  auto eval = [&](const Vec& x) {
    if (!s.source.contains(x)) fail(ErrorCode::OutOfDomain, s.name + ": stencil leaves the source chart");
    return s.map.value(x);
  };

  SecondFundamentalForm b;
  b.slices.assign(f.codim(), Mat::Zero(r, r));
  const Mat rperp_dual = f.range_perp.transpose() * g2;
  const Mat range_dual = f.range.transpose() * g2;
  std::vector<std::vector<Vec>> values(r, std::vector<Vec>(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      const Vec hi = f.horizontal.col(i) * step;
      const Vec hj = f.horizontal.col(j) * step;
      const Vec& x = f.base_point;
      // d/ds of pi_* h_j along h_i with h_j extended by constant coefficients
      const Vec second = (eval(x + hi + hj) - eval(x + hi - hj) - eval(x - hi + hj) + eval(x - hi - hj)) /
                         (4.0 * step * step);
      const Vec value = second + gn.contract(f.range.col(i), f.range.col(j)) -
                        f.push * gm.contract(f.horizontal.col(i), f.horizontal.col(j));
      values[i][j] = value;
      const Vec normal = rperp_dual * value;
      for (int k = 0; k < f.codim(); ++k) b.slices[k](i, j) = normal[k];
      b.range_residual = std::max(b.range_residual, (range_dual * value).norm());
    }
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      b.symmetry_residual = std::max(b.symmetry_residual, (values[i][j] - values[j][i]).norm());
  return b;
}

TensionField tension_field(const SecondFundamentalForm& b, const Tolerances& tol) {
  TensionField t;
  t.components = Vec::Zero(b.codim());
  for (int k = 0; k < b.codim(); ++k) t.components[k] = b.slices[k].trace();
  t.norm_sq = t.components.squaredNorm();
  t.harmonic = std::sqrt(t.norm_sq) < tol.harmonic;
  return t;
}

Mat shape_operator(const SplitFrames& f, const SecondFundamentalForm& b, int k) {
  if (k < 0 || k >= f.codim()) fail(ErrorCode::DimensionMismatch, "shape operator index out of range");
  return b.slices[k];
}

double gauss_residual_framed(const SecondFundamentalForm& b, const CurvatureTensor& rm_h,
                             const CurvatureTensor& rn_r) {
  const int r = rm_h.dim();
  double worst = 0.0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k)
        for (int l = 0; l < r; ++l) {
          double extrinsic = 0.0;
          for (const Mat& s : b.slices) extrinsic += s(j, k) * s(i, l) - s(i, k) * s(j, l);
          worst = std::max(worst, std::abs(rm_h(i, j, k, l) - rn_r(i, j, k, l) - extrinsic));
        }
  return worst;
}

double gauss_residual(const SplitFrames& f, const SecondFundamentalForm& b, const CurvatureTensor& rm,
                      const CurvatureTensor& rn) {
  return gauss_residual_framed(b, rm.restrict_to(f.horizontal), rn.restrict_to(f.range));
}

CurvatureTensor MapBundle::horizontal_curvature() const { return source_curvature.restrict_to(frames.horizontal); }

CurvatureTensor MapBundle::range_curvature() const { return target_curvature.restrict_to(frames.range); }

MapBundle evaluate_bundle(const MapScenario& s, const Tolerances& tol) {
  MapBundle b;
  b.frames = split_frames(s, tol.fd_step, tol);
  b.sff = second_fundamental_form(s, b.frames, tol.fd_step, tol);
  b.source_curvature = riemann(s.source, b.frames.base_point, tol.fd_step, tol);
  b.target_curvature = riemann(s.target, b.frames.image_point, tol.fd_step, tol);
  return b;
}

Mat complete_orthonormal(const Vec& u, const Vec& v) {
  const int r = static_cast<int>(u.size());
  Mat q(r, r);
  q.col(0) = u.normalized();
  Vec w = v - q.col(0) * q.col(0).dot(v);
  q.col(1) = w.normalized();
  Mat rest = Mat::Identity(r, r) - q.leftCols(2) * q.leftCols(2).transpose();
  if (r > 2) q.rightCols(r - 2) = pivoted_gram_schmidt(rest, Mat::Identity(r, r), r - 2);
  return q;
}

MapBundle adapt_to_plane(const MapBundle& b, const Vec& u, const Vec& v) {
  const Mat q = complete_orthonormal(u, v);
  MapBundle out = b;
  out.frames.horizontal = b.frames.horizontal * q;
  out.frames.range = b.frames.range * q;
  out.sff = b.sff.rotated_horizontal(q);
  return out;
}

MapBundle adapt_to_indices(const MapBundle& b, int i, int j) {
  const int r = b.rank();
  if (i < 0 || j < 0 || i >= r || j >= r || i == j)
    fail(ErrorCode::DegeneratePlane, "plane indices must be distinct horizontal indices");
  Mat perm = Mat::Zero(r, r);
  perm(i, 0) = 1.0;
  perm(j, 1) = 1.0;
  int c = 2;
  for (int k = 0; k < r; ++k)
    if (k != i && k != j) perm(k, c++) = 1.0;
  MapBundle out = b;
  out.frames.horizontal = b.frames.horizontal * perm;
  out.frames.range = b.frames.range * perm;
  out.sff = b.sff.rotated_horizontal(perm);
  return out;
}

}  // namespace chenmap

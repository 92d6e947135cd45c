#pragma once

#include <string>
#include <vector>

#include "chenmap/chart.hpp"
#include "chenmap/config.hpp"
#include "chenmap/tensor.hpp"

namespace chenmap {

// A Riemannian map candidate evaluated at one base point.
struct MapScenario {
  std::string name;
  MetricChart source;  // dimension m
  MetricChart target;  // dimension n
  SmoothMap map;
  Vec base_point;
  int declared_rank_min = 3;
};

// Orthonormal bases of V, H (source) and R, R-perp (target) at the base point.
// All frames are stored as coordinate column vectors.
struct SplitFrames {
  Mat push;        // n x m differential of the map
  Mat horizontal;  // m x r, h_i
  Mat vertical;    // m x (m - r)
  Mat range;       // n x r, pi_* h_i
  Mat range_perp;  // n x (n - r), V_k
  Mat source_metric;
  Mat target_metric;
  Vec base_point;
  Vec image_point;
  Vec singular_values;
  double isometry_defect = 0.0;

  [[nodiscard]] int rank() const { return static_cast<int>(horizontal.cols()); }
  [[nodiscard]] int codim() const { return static_cast<int>(range_perp.cols()); }
};

// B^k_ij = g_2((nabla pi_*)(h_i, h_j), V_k); one r x r slice per normal direction.
struct SecondFundamentalForm {
  std::vector<Mat> slices;
  double symmetry_residual = 0.0;
  double range_residual = 0.0;  // largest R-component of (nabla pi_*)(h_i, h_j)

  [[nodiscard]] int codim() const { return static_cast<int>(slices.size()); }
  [[nodiscard]] double operator()(int k, int i, int j) const { return slices[k](i, j); }
  [[nodiscard]] double norm_sq() const;  // ||nabla pi_*||^2 over H x H
  // B' = Q^T B Q on the horizontal indices.
  [[nodiscard]] SecondFundamentalForm rotated_horizontal(const Mat& q) const;
  // Normal index change: B'^k = sum_q O(k, q) B^q.
  [[nodiscard]] SecondFundamentalForm rotated_normal(const Mat& o) const;
};

struct TensionField {
  Vec components;  // in R-perp frame coordinates
  double norm_sq = 0.0;
  bool harmonic = false;
};

SplitFrames split_frames(const MapScenario& s, double step, const Tolerances& tol = {});

SecondFundamentalForm second_fundamental_form(const MapScenario& s, const SplitFrames& f, double step,
                                              const Tolerances& tol = {});

TensionField tension_field(const SecondFundamentalForm& b, const Tolerances& tol = {});

// (S_{V_k})_ij = B^k_ij.
Mat shape_operator(const SplitFrames& f, const SecondFundamentalForm& b, int k);

// max over H^4 of |R^M - R^N(pi_*.) - (B-terms)| using full chart tensors.
double gauss_residual(const SplitFrames& f, const SecondFundamentalForm& b, const CurvatureTensor& rm,
                      const CurvatureTensor& rn);

// Same check with tensors already expressed in the H and R frames.
double gauss_residual_framed(const SecondFundamentalForm& b, const CurvatureTensor& rm_h,
                             const CurvatureTensor& rn_r);

// Everything the inequality checks need at one point.
struct MapBundle {
  SplitFrames frames;
  SecondFundamentalForm sff;
  CurvatureTensor source_curvature;  // chart components at the base point
  CurvatureTensor target_curvature;  // chart components at the image point

  [[nodiscard]] int rank() const { return frames.rank(); }
  // R^M on H and R^N on R, in frame components.
  [[nodiscard]] CurvatureTensor horizontal_curvature() const;
  [[nodiscard]] CurvatureTensor range_curvature() const;
};

MapBundle evaluate_bundle(const MapScenario& s, const Tolerances& tol = {});

// Rotates the horizontal frame so that its first two vectors are the orthonormal
// pair (u, v), given as coefficients in the current H frame.  The remaining
// vectors complete an orthonormal basis; B and the range frame follow.
MapBundle adapt_to_plane(const MapBundle& b, const Vec& u, const Vec& v);

// Reorders the horizontal frame so that h_i, h_j (0-based) come first.
MapBundle adapt_to_indices(const MapBundle& b, int i, int j);

// Completes the orthonormal pair (u, v) in R^r to an orthogonal matrix with u, v leading.
Mat complete_orthonormal(const Vec& u, const Vec& v);

}  // namespace chenmap

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "chenmap/chen.hpp"
#include "chenmap/config.hpp"
#include "chenmap/rmap.hpp"
#include "chenmap/space_forms.hpp"
#include "chenmap/tensor.hpp"

namespace chenmap {

enum class SearchMode { ExhaustiveGrid, MultistartLocal };

std::string_view to_string(SearchMode mode);

struct SearchOptions {
  SearchMode mode = SearchMode::ExhaustiveGrid;
  bool mode_set = false;  // when false, exhaustive for r <= 4 and multistart above
  int budget = 0;         // grid samples per angle, or number of starts; 0 = default
  std::uint64_t seed = 0;

  [[nodiscard]] SearchMode resolved_mode(int r) const;
  [[nodiscard]] int resolved_budget(int r) const;
};

inline constexpr int kDefaultGridSamples = 24;
inline constexpr int kDefaultStarts = 32;

struct PlaneSearchResult {
  double min_value = 0.0;
  Vec u;  // argmin plane, coefficients in the frame of the searched tensor
  Vec v;
  std::vector<double> angles;  // grid angles of the argmin (exhaustive mode)
  SearchMode method = SearchMode::ExhaustiveGrid;
  long long evaluations = 0;
  double certified_gap = 0.0;  // NaN for multistart
  int resolution = 0;
  int unconverged = 0;  // multistart runs stopped by the sweep limit
};

// Minimum of K(u, v) = R(u, v, v, u) over orthonormal pairs of an r-dimensional
// frame tensor (r >= 3).
PlaneSearchResult min_sectional_curvature(const CurvatureTensor& framed, const SearchOptions& opts);

// Same search with a chart tensor, its metric and a horizontal frame.
PlaneSearchResult min_sectional_curvature(const CurvatureTensor& rm, const Mat& g, const Mat& h_frame,
                                          const SearchOptions& opts, const Tolerances& tol = {});

// rho^H - min K^H, with rho^H half of the doubled scalar curvature.
double delta_h(const CurvatureTensor& framed, const PlaneSearchResult& search);

// Orthonormal pair from grid angles: r-1 angles for u on S^{r-1} and r-2 for v
// on the sphere of u-perp (Householder basis).
HorizontalPlane plane_from_angles(int r, const std::vector<double>& angles);

// Bound formulas. Branch numbering follows the sign cases:
// GCSF 1: f2 >= 0, 2: f2 <= 0.
// GSSF with xi in R 1: f2<=0,f3<=0; 2: f2>0,f3<=0; 3: f2<=0,f3>0; 4: f2>0,f3>0.
// GSSF with xi in R-perp 1: f2 <= 0, 2: f2 > 0.
double delta_bound_gcsf(int r, double tau_sq, double f1, double f2, int branch);
double delta_bound_gssf_range(int r, double tau_sq, double f1, double f2, double f3, int branch);
double delta_bound_gssf_perp(int r, double tau_sq, double f1, double f2, int branch);

// Harmonic constants exactly as tabulated for tau = 0.
double harmonic_constant_gcsf(int r, double f1, double f2, int branch);
double harmonic_constant_gssf_range(int r, double f1, double f2, double f3, int branch);
double harmonic_constant_gssf_perp(int r, double f1, double f2, int branch);

struct DeltaReport {
  std::string name;
  double delta = 0.0;
  std::string bound_name;
  double bound_value = 0.0;
  double slack = 0.0;  // bound - delta
  bool holds = false;
  bool equality = false;
  std::map<std::string, bool> statement_flags;  // "A".."I"
  std::string equality_statements;              // statements the selected branch needs for equality
  std::map<std::string, double> values;
  std::vector<std::string> notes;
  PlaneSearchResult search;
};

DeltaReport verify_delta_bound_gcsf(const MapBundle& b, const SpaceFormModel& model, const SearchOptions& opts,
                                    const Tolerances& tol = {});

DeltaReport verify_delta_bound_gssf(const MapBundle& b, const SpaceFormModel& model, const SearchOptions& opts,
                                    const Tolerances& tol = {});

// Throws NotHarmonic unless the tension field vanishes.
DeltaReport verify_harmonic_corollaries(const MapBundle& b, const SpaceFormModel& model, const SearchOptions& opts,
                                        const Tolerances& tol = {});

}  // namespace chenmap

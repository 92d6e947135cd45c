#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "chenmap/config.hpp"
#include "chenmap/rmap.hpp"
#include "chenmap/tensor.hpp"

namespace chenmap {

enum class ModelKind { Gcsf, Gssf };

std::string_view to_string(ModelKind kind);

enum class XiPosition { InRange, InRangePerp, Mixed };

std::string_view to_string(XiPosition pos);

// J or phi, xi and eta evaluated at one point, in coordinate components.
// `endomorphism` acts on column vectors; `eta` is the covector (row) as a vector.
struct StructureAt {
  Mat endomorphism;
  Vec xi;
  Vec eta;
};

// Structure fields on a target chart. For GCSF only `endomorphism` is used.
// When `eta` is empty it is taken as the metric dual of xi.
struct AmbientStructure {
  std::string name;
  std::function<Mat(const Vec&)> endomorphism;
  std::function<Vec(const Vec&)> xi;
  std::function<Vec(const Vec&)> eta;
};

struct SpaceFormModel {
  ModelKind kind = ModelKind::Gcsf;
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;  // ignored for GCSF
  AmbientStructure structure;

  [[nodiscard]] StructureAt at(const Vec& x, const Mat& g) const;
};

// Throws StructureViolation unless the almost Hermitian (GCSF) or almost
// contact metric (GSSF) identities hold at the point.
void validate_structure(ModelKind kind, const StructureAt& s, const Mat& g, const Tolerances& tol = {});

// Closed-form curvature from (f1, f2, f3), the metric and a structure at a point.
CurvatureTensor assemble_model_curvature(ModelKind kind, double f1, double f2, double f3, const Mat& g,
                                         const StructureAt& s);

CurvatureTensor model_curvature_gcsf(const SpaceFormModel& model, const Mat& g, const Vec& x,
                                     const Tolerances& tol = {});
CurvatureTensor model_curvature_gssf(const SpaceFormModel& model, const Mat& g, const Vec& x,
                                     const Tolerances& tol = {});
CurvatureTensor model_curvature(const SpaceFormModel& model, const Mat& g, const Vec& x,
                                const Tolerances& tol = {});

struct Coefficients {
  double f1 = 0.0;
  double f2 = 0.0;
  std::optional<double> f3;
};

Coefficients table_coefficients(std::string_view family, double c, double alpha = 0.0);
bool is_complex_family(std::string_view family);
bool is_contact_family(std::string_view family);

// P_ij = g2(pi_* h_i, P pi_* h_j) in the range frame.
Mat range_endomorphism_P(const StructureAt& s, const SplitFrames& f, const Tolerances& tol = {});
Mat range_endomorphism_P(const SpaceFormModel& model, const SplitFrames& f, const Tolerances& tol = {});

// eta(pi_* h_i) for each range frame vector; zero vector when no xi is present.
Vec range_eta(const StructureAt& s, const SplitFrames& f);

struct PlaneInvariants {
  double P_norm_sq = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double psi = 0.0;
};

// Invariants of the plane spanned by the orthonormal coefficient vectors u, v
// (coordinates in the horizontal frame).
PlaneInvariants plane_invariants(const Mat& p, const Vec& eta_r, const Vec& u, const Vec& v);

// Same for the plane of frame indices (i, j).
PlaneInvariants plane_invariants(const Mat& p, const Vec& eta_r, int i = 0, int j = 1);

XiPosition xi_position(const StructureAt& s, const SplitFrames& f, const Tolerances& tol = {});

namespace structures {

// Constant J pairing coordinates (x1, y1, x2, y2, ...); valid on Euclidean and
// Fubini-Study charts.
AmbientStructure standard_complex(int n);

// Hopf structure on the stereographic chart of the sphere of curvature c > 0,
// odd n: phi is the tangential part of the ambient J and xi = -J N.
AmbientStructure hopf_contact(int n, double c);

// Standard structure on the Heisenberg chart of dimension 2s+1.
AmbientStructure heisenberg_contact(int s);

// phi = J + 0, xi = d/dt on (fiber x R) or a warped (fiber x_w R) with t last.
AmbientStructure product_contact(const AmbientStructure& fiber_complex, int fiber_dim);

}  // namespace structures
}  // namespace chenmap

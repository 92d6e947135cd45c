#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chenmap/config.hpp"
#include "chenmap/rmap.hpp"
#include "chenmap/space_forms.hpp"

namespace chenmap {

// A horizontal 2-plane given by orthonormal coefficient vectors in the H frame.
struct HorizontalPlane {
  Vec u;
  Vec v;
  std::string id;

  static HorizontalPlane from_indices(int r, int i, int j);  // 0-based indices
};

struct EqualityDiagnostic {
  bool is_equality_form = true;
  double max_violation = 0.0;
  std::vector<std::string> violations;  // "S_k[i][j]" cells, 1-based, in the adapted frame
};

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
  bool equality = false;
  std::optional<EqualityDiagnostic> equality_structure;
  std::map<std::string, double> values;
  std::map<std::string, bool> flags;
  std::vector<std::string> notes;
};

// Fills slack/holds/equality from lhs and rhs.
void finalize(InequalityReport& rep, const Tolerances& tol);

// Checks the block pattern of the shape operators after rotating R-perp so the
// first normal is parallel to the tension field and rotating (h1, h2) so that
// B^{r+1}_12 vanishes. Expects the plane already moved to frame slots 0, 1.
EqualityDiagnostic detect_equality_structure(const SecondFundamentalForm& b, const Tolerances& tol = {});

InequalityReport verify_general_cfi(const MapBundle& b, const HorizontalPlane& plane, const Tolerances& tol = {});

InequalityReport verify_gcsf_cfi(const MapBundle& b, const SpaceFormModel& model, const HorizontalPlane& plane,
                                 const Tolerances& tol = {});

InequalityReport verify_gssf_cfi(const MapBundle& b, const SpaceFormModel& model, const HorizontalPlane& plane,
                                 const Tolerances& tol = {});

InequalityReport verify_corollary_gcsf(const MapBundle& b, const std::string& family, double c, double alpha,
                                       const AmbientStructure& structure, const HorizontalPlane& plane,
                                       const Tolerances& tol = {});

// `expected` asserts the xi case; a mismatch with the computed position is an XiMixed error.
InequalityReport verify_corollary_gssf(const MapBundle& b, const std::string& family, double c, double alpha,
                                       XiPosition expected, const AmbientStructure& structure,
                                       const HorizontalPlane& plane, const Tolerances& tol = {});

// Largest componentwise gap between the closed-form model and the numeric
// target curvature, both on the range frame.
double model_consistency(const MapBundle& b, const SpaceFormModel& model, const Tolerances& tol = {});

// Right-hand side of the corollary as printed for a family, from the plane
// invariants; used to cross-check the delegated bound.
double printed_corollary_rhs(const std::string& family, double c, double alpha, XiPosition xi, int r,
                             double rho_h, double tau_sq, const PlaneInvariants& inv);

}  // namespace chenmap

#include "chenmap/chen.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "chenmap/chart_geometry.hpp"
#include "chenmap/errors.hpp"

namespace chenmap {

namespace {

// Quantities shared by every Chen-type bound for one plane.
struct PlaneData {
  MapBundle adapted;
  CurvatureTensor rm_h;
  int r = 0;
  double lhs = 0.0;
  double two_rho_h = 0.0;
  double tau_sq = 0.0;
  double sff_norm_sq = 0.0;
};

// Sectional curvature of the plane in slots (0, 1), averaged over the pair symmetry.
double plane_curvature(const CurvatureTensor& t) { return 0.5 * (t(0, 1, 1, 0) + t(1, 0, 0, 1)); }

PlaneData prepare(const MapBundle& b, const HorizontalPlane& plane) {
  PlaneData d;
  d.r = b.rank();
  if (d.r < 3) fail(ErrorCode::RankDeficient, "Chen-type inequalities need rank >= 3, got " + std::to_string(d.r));
  if (plane.u.size() != d.r || plane.v.size() != d.r)
    fail(ErrorCode::DimensionMismatch, "plane vectors do not match the horizontal rank");
  const double nu = plane.u.norm();
  const double nv = plane.v.norm();
  if (nu == 0.0 || nv == 0.0 || std::abs(plane.u.dot(plane.v)) > 1e-9 * nu * nv ||
      std::abs(nu - 1.0) > 1e-9 || std::abs(nv - 1.0) > 1e-9)
    fail(ErrorCode::DegeneratePlane, "plane vectors are not orthonormal");
  d.adapted = adapt_to_plane(b, plane.u, plane.v);
  d.rm_h = d.adapted.horizontal_curvature();
  d.lhs = plane_curvature(d.rm_h);
  d.two_rho_h = doubled_scalar_curvature(d.rm_h);
  d.sff_norm_sq = d.adapted.sff.norm_sq();
  d.tau_sq = tension_field(d.adapted.sff).norm_sq;
  return d;
}

double tau_coefficient(int r) { return static_cast<double>(r - 2) / static_cast<double>(r - 1); }

std::string cell(int k, int i, int j) {
  return "S_" + std::to_string(k) + "[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]";
}

Mat normal_basis_along(const Vec& t) {
  const int q = static_cast<int>(t.size());
  Mat o(q, q);
  o.row(0) = t.normalized().transpose();
  Mat rest = Mat::Identity(q, q) - o.row(0).transpose() * o.row(0);
  for (int row = 1; row < q; ++row) {
    int best = 0;
    double best_norm = -1.0;
    for (int c = 0; c < q; ++c) {
      const double nrm = rest.col(c).norm();
      if (nrm > best_norm * (1.0 + 1e-9)) {
        best_norm = nrm;
        best = c;
      }
    }
    Vec e = rest.col(best);
    for (int k = 0; k < row; ++k) e -= o.row(k).transpose() * o.row(k).dot(e);
    e.normalize();
    o.row(row) = e.transpose();
    rest -= e * (e.transpose() * rest);
  }
  return o;
}

// Model data on the adapted range frame.
struct ModelOnRange {
  CurvatureTensor rn_r;
  Mat p;
  Vec eta;
  PlaneInvariants inv;
  XiPosition xi = XiPosition::InRange;
};

ModelOnRange model_on_range(const PlaneData& d, const SpaceFormModel& model, const Tolerances& tol) {
  ModelOnRange out;
  const SplitFrames& f = d.adapted.frames;
  const bool structured = static_cast<bool>(model.structure.endomorphism);
  if (!structured && (model.f2 != 0.0 || model.kind == ModelKind::Gssf))
    fail(ErrorCode::StructureViolation, "model needs a structure field");
  if (structured) {
    const StructureAt s = model.at(f.image_point, f.target_metric);
    validate_structure(model.kind, s, f.target_metric, tol);
    out.rn_r = assemble_model_curvature(model.kind, model.f1, model.f2, model.f3, f.target_metric, s)
                   .restrict_to(f.range);
    out.p = range_endomorphism_P(s, f, tol);
    out.eta = model.kind == ModelKind::Gssf ? range_eta(s, f) : Vec::Zero(d.r);
    if (model.kind == ModelKind::Gssf) out.xi = xi_position(s, f, tol);
  } else {
    out.rn_r = constant_curvature_tensor(f.target_metric, model.f1).restrict_to(f.range);
    out.p = Mat::Zero(d.r, d.r);
    out.eta = Vec::Zero(d.r);
  }
  out.inv = plane_invariants(out.p, out.eta, 0, 1);
  return out;
}

void record_common(InequalityReport& rep, const PlaneData& d) {
  rep.values["two_rho_h"] = d.two_rho_h;
  rep.values["tau_sq"] = d.tau_sq;
  rep.values["sff_norm_sq"] = d.sff_norm_sq;
  rep.values["rank"] = d.r;
}

void record_invariants(InequalityReport& rep, const PlaneInvariants& inv) {
  rep.values["P_norm_sq"] = inv.P_norm_sq;
  rep.values["theta"] = inv.theta;
  rep.values["phi"] = inv.phi;
  rep.values["psi"] = inv.psi;
}

// Theorem-3.1 form of the bound with the model in place of the numeric target.
double general_rhs(const PlaneData& d, double two_rho_r, double k_r) {
  return 0.5 * (d.two_rho_h - tau_coefficient(d.r) * d.tau_sq - two_rho_r + 2.0 * k_r);
}

InequalityReport model_report(const std::string& name, const PlaneData& d, const ModelOnRange& m, double rhs,
                              const Tolerances& tol) {
  InequalityReport rep;
  rep.name = name;
  rep.lhs = d.lhs;
  rep.rhs = rhs;
  record_common(rep, d);
  record_invariants(rep, m.inv);
  const double two_rho_r = doubled_scalar_curvature(m.rn_r);
  const double k_r = plane_curvature(m.rn_r);
  rep.values["two_rho_r_model"] = two_rho_r;
  rep.values["k_r_model"] = k_r;
  const double dev = std::abs(general_rhs(d, two_rho_r, k_r) - rhs);
  rep.values["derivation_deviation"] = dev;
  rep.flags["derivation_consistent"] = dev <= 1e-9 * std::max(1.0, std::abs(rhs));
  rep.equality_structure = detect_equality_structure(d.adapted.sff, tol);
  finalize(rep, tol);
  return rep;
}

}  // namespace

HorizontalPlane HorizontalPlane::from_indices(int r, int i, int j) {
  if (i < 0 || j < 0 || i >= r || j >= r || i == j)
    fail(ErrorCode::DegeneratePlane, "plane indices must be distinct and within the horizontal rank");
  return {Vec::Unit(r, i), Vec::Unit(r, j), std::to_string(i + 1) + "-" + std::to_string(j + 1)};
}

void finalize(InequalityReport& rep, const Tolerances& tol) {
  rep.slack = rep.lhs - rep.rhs;
  rep.holds = rep.slack >= -tol.slack;
  rep.equality = std::abs(rep.slack) < tol.equality;
}

EqualityDiagnostic detect_equality_structure(const SecondFundamentalForm& b, const Tolerances& tol) {
  EqualityDiagnostic out;
  const int q = b.codim();
  if (q == 0) return out;
  const int r = static_cast<int>(b.slices[0].rows());
  double scale = 1.0;
  for (const Mat& s : b.slices) scale = std::max(scale, s.cwiseAbs().maxCoeff());
  const double limit = tol.equality * scale;

  const TensionField t = tension_field(b, tol);
  const bool has_tau = std::sqrt(t.norm_sq) > tol.harmonic;
  SecondFundamentalForm w = has_tau ? b.rotated_normal(normal_basis_along(t.components)) : b;
  if (has_tau) {
    const Mat& s = w.slices[0];
    const double diff = s(0, 0) - s(1, 1);
    // smallest rotation that diagonalizes the leading 2x2 block
    const double theta = diff != 0.0 ? 0.5 * std::atan(2.0 * s(0, 1) / diff) : (s(0, 1) != 0.0 ? std::numbers::pi / 4 : 0.0);
    Mat g = Mat::Identity(r, r);
    g(0, 0) = std::cos(theta);
    g(1, 0) = std::sin(theta);
    g(0, 1) = -std::sin(theta);
    g(1, 1) = std::cos(theta);
    w = w.rotated_horizontal(g);
  }

  auto flag = [&](double value, int k, int i, int j) {
    const double a = std::abs(value);
    out.max_violation = std::max(out.max_violation, a);
    if (a > limit) {
      out.is_equality_form = false;
      out.violations.push_back(cell(r + 1 + k, i, j));
    }
  };

  int first_block = 0;
  if (has_tau) {
    const Mat& s = w.slices[0];
    const double lead = s(0, 0) + s(1, 1);
    for (int i = 0; i < r; ++i)
      for (int j = i + 1; j < r; ++j) flag(s(i, j), 0, i, j);
    for (int i = 2; i < r; ++i) flag(s(i, i) - lead, 0, i, i);
    first_block = 1;
  }
  for (int k = first_block; k < q; ++k) {
    const Mat& s = w.slices[k];
    for (int i = 0; i < r; ++i)
      for (int j = i; j < r; ++j)
        if (i >= 2 || j >= 2) flag(s(i, j), k, i, j);
    flag(s(0, 0) + s(1, 1), k, 0, 0);
  }
  return out;
}

InequalityReport verify_general_cfi(const MapBundle& b, const HorizontalPlane& plane, const Tolerances& tol) {
  const PlaneData d = prepare(b, plane);
  const CurvatureTensor rn_r = d.adapted.range_curvature();
  const double two_rho_r = doubled_scalar_curvature(rn_r);
  const double k_r = plane_curvature(rn_r);

  InequalityReport rep;
  rep.name = "general_cfi";
  rep.lhs = d.lhs;
  rep.rhs = general_rhs(d, two_rho_r, k_r);
  record_common(rep, d);
  rep.values["two_rho_r"] = two_rho_r;
  rep.values["k_r"] = k_r;
  const double epsilon = d.two_rho_h - two_rho_r - tau_coefficient(d.r) * d.tau_sq;
  rep.values["epsilon"] = epsilon;
  rep.values["scalar_identity_residual"] = d.two_rho_h - (two_rho_r - d.sff_norm_sq + d.tau_sq);
  rep.values["intermediate_bound"] = 0.5 * epsilon + k_r;
  rep.equality_structure = detect_equality_structure(d.adapted.sff, tol);
  finalize(rep, tol);
  return rep;
}

InequalityReport verify_gcsf_cfi(const MapBundle& b, const SpaceFormModel& model, const HorizontalPlane& plane,
                                 const Tolerances& tol) {
  if (model.kind != ModelKind::Gcsf) fail(ErrorCode::StructureViolation, "gcsf_cfi needs a GCSF model");
  const PlaneData d = prepare(b, plane);
  const ModelOnRange m = model_on_range(d, model, tol);
  const int r = d.r;
  const double rhs = 0.5 * (d.two_rho_h - tau_coefficient(r) * d.tau_sq - (r - 2.0) * (r + 1.0) * model.f1 -
                            3.0 * model.f2 * (m.inv.P_norm_sq - 2.0 * m.inv.theta));
  return model_report("gcsf_cfi", d, m, rhs, tol);
}

InequalityReport verify_gssf_cfi(const MapBundle& b, const SpaceFormModel& model, const HorizontalPlane& plane,
                                 const Tolerances& tol) {
  if (model.kind != ModelKind::Gssf) fail(ErrorCode::StructureViolation, "gssf_cfi needs a GSSF model");
  const PlaneData d = prepare(b, plane);
  const ModelOnRange m = model_on_range(d, model, tol);
  if (m.xi == XiPosition::Mixed) fail(ErrorCode::XiMixed, "xi lies neither in the range nor in its complement");
  const int r = d.r;
  double rhs = 0.5 * (d.two_rho_h - tau_coefficient(r) * d.tau_sq - (r - 2.0) * (r + 1.0) * model.f1 -
                      3.0 * model.f2 * (m.inv.P_norm_sq - 2.0 * m.inv.theta));
  if (m.xi == XiPosition::InRange) rhs += model.f3 * (r - 1.0 - m.inv.phi);
  InequalityReport rep = model_report("gssf_cfi", d, m, rhs, tol);
  rep.notes.push_back(std::string("xi ") + std::string(to_string(m.xi)));
  rep.flags["xi_in_range"] = m.xi == XiPosition::InRange;
  return rep;
}

double printed_corollary_rhs(const std::string& family, double c, double alpha, XiPosition xi, int r,
                             double rho_h, double tau_sq, const PlaneInvariants& inv) {
  const double rr = r;
  const double q = rr * rr - rr - 2.0;
  const double pt = inv.P_norm_sq - 2.0 * inv.theta;
  const double half_tau = (rr - 2.0) / (2.0 * (rr - 1.0)) * tau_sq;
  const double a2 = alpha * alpha;
  if (family == "real") return rho_h - (rr - 2.0) / 2.0 * ((rr + 1.0) * c + tau_sq / (rr - 1.0));
  if (family == "complex") return rho_h - half_tau - 0.5 * c * q - 1.5 * c * pt;
  if (family == "real_kahler") return rho_h - half_tau - 0.5 * (c + 3.0 * alpha) * q - 1.5 * (c - alpha) * pt;
  if (xi == XiPosition::InRange) {
    if (family == "sasakian") return rho_h - half_tau - rr * ((rr - 3.0) * c + 3.0 * rr - 1.0) / 2.0 + 4.0 - (c - 1.0) * inv.psi;
    if (family == "kenmotsu") return rho_h - half_tau - rr * ((rr - 3.0) * c - 3.0 * rr + 1.0) / 2.0 - 4.0 - (c + 1.0) * inv.psi;
    if (family == "cosymplectic") return rho_h - half_tau - c / 2.0 * rr * (rr - 3.0) - c * inv.psi;
    if (family == "almost_C_alpha")
      return rho_h - half_tau - rr * ((rr - 3.0) * c + a2 * (3.0 * rr - 1.0)) / 2.0 + 4.0 * a2 - (c - a2) * inv.psi;
  } else {
    if (family == "sasakian") return rho_h - half_tau - q * (c + 3.0) - 3.0 * (c - 1.0) * pt;
    if (family == "kenmotsu") return rho_h - half_tau - q * (c - 3.0) - 3.0 * (c + 1.0) * pt;
    if (family == "cosymplectic") return rho_h - half_tau - q * c - 3.0 * c * pt;
    if (family == "almost_C_alpha") return rho_h - half_tau - q * (c + 3.0 * a2) - 3.0 * (c - a2) * pt;
  }
  fail(ErrorCode::UnknownFamily, "unknown space-form family '" + family + "'");
}

namespace {

void attach_printed(InequalityReport& rep, const std::string& family, double c, double alpha, XiPosition xi) {
  const PlaneInvariants inv{rep.values.at("P_norm_sq"), rep.values.at("theta"), rep.values.at("phi"),
                            rep.values.at("psi")};
  const int r = static_cast<int>(rep.values.at("rank"));
  const double printed =
      printed_corollary_rhs(family, c, alpha, xi, r, 0.5 * rep.values.at("two_rho_h"), rep.values.at("tau_sq"), inv);
  const double dev = std::abs(printed - rep.rhs);
  rep.values["printed_rhs"] = printed;
  rep.values["printed_deviation"] = dev;
  const bool agrees = dev <= 1e-9 * std::max(1.0, std::abs(rep.rhs));
  rep.flags["printed_formula_agrees"] = agrees;
  if (!agrees) rep.notes.push_back("printed corollary formula disagrees with the delegated bound");
}

}  // namespace

InequalityReport verify_corollary_gcsf(const MapBundle& b, const std::string& family, double c, double alpha,
                                       const AmbientStructure& structure, const HorizontalPlane& plane,
                                       const Tolerances& tol) {
  if (!is_complex_family(family)) fail(ErrorCode::UnknownFamily, "'" + family + "' is not a complex space-form family");
  if (family == "real_kahler" && b.frames.target_metric.rows() != 4)
    fail(ErrorCode::DimensionMismatch, "real Kaehler space forms are only treated in dimension 4");
  const Coefficients k = table_coefficients(family, c, alpha);
  SpaceFormModel model{ModelKind::Gcsf, k.f1, k.f2, 0.0, structure};
  InequalityReport rep = verify_gcsf_cfi(b, model, plane, tol);
  rep.name = "corollary_gcsf_" + family;
  attach_printed(rep, family, c, alpha, XiPosition::InRange);
  return rep;
}

InequalityReport verify_corollary_gssf(const MapBundle& b, const std::string& family, double c, double alpha,
                                       XiPosition expected, const AmbientStructure& structure,
                                       const HorizontalPlane& plane, const Tolerances& tol) {
  if (!is_contact_family(family)) fail(ErrorCode::UnknownFamily, "'" + family + "' is not a contact space-form family");
  if (expected == XiPosition::Mixed) fail(ErrorCode::XiMixed, "corollaries cover only the two pure xi cases");
  const Coefficients k = table_coefficients(family, c, alpha);
  SpaceFormModel model{ModelKind::Gssf, k.f1, k.f2, *k.f3, structure};
  InequalityReport rep = verify_gssf_cfi(b, model, plane, tol);
  const bool in_range = rep.flags.at("xi_in_range");
  if (in_range != (expected == XiPosition::InRange))
    fail(ErrorCode::XiMixed, "xi position differs from the requested corollary case");
  rep.name = "corollary_gssf_" + family + (in_range ? "_xi_range" : "_xi_perp");
  attach_printed(rep, family, c, alpha, expected);
  return rep;
}

double model_consistency(const MapBundle& b, const SpaceFormModel& model, const Tolerances& tol) {
  const SplitFrames& f = b.frames;
  CurvatureTensor closed;
  if (model.structure.endomorphism) {
    const StructureAt s = model.at(f.image_point, f.target_metric);
    validate_structure(model.kind, s, f.target_metric, tol);
    closed = assemble_model_curvature(model.kind, model.f1, model.f2, model.f3, f.target_metric, s);
  } else {
    if (model.f2 != 0.0 || model.kind == ModelKind::Gssf)
      fail(ErrorCode::StructureViolation, "model needs a structure field");
    closed = constant_curvature_tensor(f.target_metric, model.f1);
  }
  return closed.restrict_to(f.range).max_abs_difference(b.range_curvature());
}

}  // namespace chenmap

#include "chenmap/space_forms.hpp"

#include <array>
#include <cmath>
#include <string>

#include "chenmap/chart.hpp"
#include "chenmap/errors.hpp"

namespace chenmap {

std::string_view to_string(ModelKind kind) { return kind == ModelKind::Gcsf ? "GCSF" : "GSSF"; }

std::string_view to_string(XiPosition pos) {
  switch (pos) {
    case XiPosition::InRange: return "IN_RANGE";
    case XiPosition::InRangePerp: return "IN_RANGE_PERP";
    case XiPosition::Mixed: return "MIXED";
  }
  return "MIXED";
}

StructureAt SpaceFormModel::at(const Vec& x, const Mat& g) const {
  StructureAt s;
  if (!structure.endomorphism) fail(ErrorCode::StructureViolation, "model has no structure field");
  s.endomorphism = structure.endomorphism(x);
  if (kind == ModelKind::Gssf) {
    if (!structure.xi) fail(ErrorCode::StructureViolation, "contact model has no xi field");
    s.xi = structure.xi(x);
    s.eta = structure.eta ? structure.eta(x) : Vec(g * s.xi);
  } else {
    s.xi = Vec::Zero(g.rows());
    s.eta = Vec::Zero(g.rows());
  }
  return s;
}

void validate_structure(ModelKind kind, const StructureAt& s, const Mat& g, const Tolerances& tol) {
  const int n = static_cast<int>(g.rows());
  const Mat& f = s.endomorphism;
  if (f.rows() != n || f.cols() != n) fail(ErrorCode::StructureViolation, "structure has wrong dimension");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  const double limit = tol.structure * scale * scale;
  const Mat id = Mat::Identity(n, n);
  auto check = [&](double residual, const char* what) {
    if (!(residual <= limit))
      fail(ErrorCode::StructureViolation, std::string(what) + " residual " + std::to_string(residual));
  };
  if (kind == ModelKind::Gcsf) {
    if (n % 2 != 0) fail(ErrorCode::StructureViolation, "almost Hermitian target needs even dimension");
    check((f * f + id).cwiseAbs().maxCoeff(), "J^2 = -I");
    check((f.transpose() * g * f - g).cwiseAbs().maxCoeff(), "g(JX,JY) = g(X,Y)");
    return;
  }
  if (n % 2 != 1) fail(ErrorCode::StructureViolation, "almost contact target needs odd dimension");
  if (s.xi.size() != n || s.eta.size() != n) fail(ErrorCode::StructureViolation, "xi/eta have wrong dimension");
  check(std::abs(s.eta.dot(s.xi) - 1.0), "eta(xi) = 1");
  check((f * f + id - s.xi * s.eta.transpose()).cwiseAbs().maxCoeff(), "phi^2 = -I + eta xi");
  check((f.transpose() * g * f - g + s.eta * s.eta.transpose()).cwiseAbs().maxCoeff(),
        "g(phi X, phi Y) = g(X,Y) - eta(X) eta(Y)");
  check((f * s.xi).cwiseAbs().maxCoeff(), "phi xi = 0");
  check((s.eta.transpose() * f).cwiseAbs().maxCoeff(), "eta o phi = 0");
}

CurvatureTensor assemble_model_curvature(ModelKind kind, double f1, double f2, double f3, const Mat& g,
                                         const StructureAt& s) {
  const int n = static_cast<int>(g.rows());
  CurvatureTensor out = constant_curvature_tensor(g, f1);
  // w(a, b) = g(e_a, F e_b)
  const Mat w = g * s.endomorphism;
  const bool contact = kind == ModelKind::Gssf;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = f2 * (w(i, k) * w(l, j) - w(j, k) * w(l, i) + 2.0 * w(i, j) * w(l, k));
          if (contact) {
            const Vec& e = s.eta;
            v += f3 * (e[i] * e[k] * g(j, l) - e[j] * e[k] * g(i, l) + g(i, k) * e[j] * e[l] -
                       g(j, k) * e[i] * e[l]);
          }
          out(i, j, k, l) += v;
        }
  return out;
}

CurvatureTensor model_curvature_gcsf(const SpaceFormModel& model, const Mat& g, const Vec& x,
                                     const Tolerances& tol) {
  if (model.kind != ModelKind::Gcsf) fail(ErrorCode::StructureViolation, "model is not a GCSF");
  const StructureAt s = model.at(x, g);
  validate_structure(ModelKind::Gcsf, s, g, tol);
  return assemble_model_curvature(ModelKind::Gcsf, model.f1, model.f2, 0.0, g, s);
}

CurvatureTensor model_curvature_gssf(const SpaceFormModel& model, const Mat& g, const Vec& x,
                                     const Tolerances& tol) {
  if (model.kind != ModelKind::Gssf) fail(ErrorCode::StructureViolation, "model is not a GSSF");
  const StructureAt s = model.at(x, g);
  validate_structure(ModelKind::Gssf, s, g, tol);
  return assemble_model_curvature(ModelKind::Gssf, model.f1, model.f2, model.f3, g, s);
}

CurvatureTensor model_curvature(const SpaceFormModel& model, const Mat& g, const Vec& x, const Tolerances& tol) {
  return model.kind == ModelKind::Gcsf ? model_curvature_gcsf(model, g, x, tol)
                                       : model_curvature_gssf(model, g, x, tol);
}

Coefficients table_coefficients(std::string_view family, double c, double alpha) {
  if (family == "real") return {c, 0.0, std::nullopt};
  if (family == "complex") return {c, c, std::nullopt};
  if (family == "real_kahler") return {c + 3.0 * alpha, c - alpha, std::nullopt};
  if (family == "sasakian") return {c + 3.0, c - 1.0, c - 1.0};
  if (family == "kenmotsu") return {c - 3.0, c + 1.0, c + 1.0};
  if (family == "cosymplectic") return {c, c, c};
  if (family == "almost_C_alpha") {
    const double a2 = alpha * alpha;
    return {c + 3.0 * a2, c - a2, c - a2};
  }
  fail(ErrorCode::UnknownFamily, "unknown space-form family '" + std::string(family) + "'");
}

bool is_complex_family(std::string_view family) {
  return family == "real" || family == "complex" || family == "real_kahler";
}

bool is_contact_family(std::string_view family) {
  return family == "sasakian" || family == "kenmotsu" || family == "cosymplectic" || family == "almost_C_alpha";
}

Mat range_endomorphism_P(const StructureAt& s, const SplitFrames& f, const Tolerances& tol) {
  const Mat p = f.range.transpose() * f.target_metric * s.endomorphism * f.range;
  const double skew = (p + p.transpose()).cwiseAbs().maxCoeff();
  if (skew > std::max(tol.structure, 1e-9) * std::max(1.0, p.cwiseAbs().maxCoeff()) * 1e3)
    fail(ErrorCode::StructureViolation, "range part of the structure is not skew, residual " + std::to_string(skew));
  return 0.5 * (p - p.transpose());
}

Mat range_endomorphism_P(const SpaceFormModel& model, const SplitFrames& f, const Tolerances& tol) {
  return range_endomorphism_P(model.at(f.image_point, f.target_metric), f, tol);
}

Vec range_eta(const StructureAt& s, const SplitFrames& f) {
  if (s.eta.size() != f.range.rows()) return Vec::Zero(f.rank());
  return f.range.transpose() * s.eta;
}

PlaneInvariants plane_invariants(const Mat& p, const Vec& eta_r, const Vec& u, const Vec& v) {
  PlaneInvariants out;
  out.P_norm_sq = p.squaredNorm();
  const double t = u.dot(p * v);
  out.theta = t * t;
  if (eta_r.size() == u.size()) {
    const double a = eta_r.dot(u);
    const double b = eta_r.dot(v);
    out.phi = a * a + b * b;
  }
  out.psi = 1.5 * out.P_norm_sq - 3.0 * out.theta + out.phi;
  return out;
}

PlaneInvariants plane_invariants(const Mat& p, const Vec& eta_r, int i, int j) {
  const int r = static_cast<int>(p.rows());
  return plane_invariants(p, eta_r, Vec::Unit(r, i), Vec::Unit(r, j));
}

XiPosition xi_position(const StructureAt& s, const SplitFrames& f, const Tolerances& tol) {
  const Vec gxi = f.target_metric * s.xi;
  const double in_range = (f.range.transpose() * gxi).norm();
  const double in_perp = (f.range_perp.transpose() * gxi).norm();
  if (in_perp < tol.xi) return XiPosition::InRange;
  if (in_range < tol.xi) return XiPosition::InRangePerp;
  return XiPosition::Mixed;
}

namespace structures {

namespace {

Mat complex_matrix(int n) {
  Mat j = Mat::Zero(n, n);
  for (int a = 0; a + 1 < n; a += 2) {
    j(a + 1, a) = 1.0;   // J d/dx = d/dy
    j(a, a + 1) = -1.0;  // J d/dy = -d/dx
  }
  return j;
}

}  // namespace

AmbientStructure standard_complex(int n) {
  if (n % 2 != 0) fail(ErrorCode::StructureViolation, "standard complex structure needs even dimension");
  AmbientStructure s;
  s.name = "standard_complex";
  const Mat j = complex_matrix(n);
  s.endomorphism = [j](const Vec&) { return j; };
  return s;
}

AmbientStructure hopf_contact(int n, double c) {
  if (n % 2 != 1 || c <= 0.0) fail(ErrorCode::StructureViolation, "Hopf structure needs an odd sphere with c > 0");
  const double rc = std::sqrt(c);
  const Mat j = complex_matrix(n + 1);
  const SmoothMap embed = charts::inverse_stereographic(n, c);
  auto pseudo_inverse = [](const Mat& jac) -> Mat { return (jac.transpose() * jac).ldlt().solve(jac.transpose()); };
  AmbientStructure out;
  out.name = "hopf";
  out.endomorphism = [=](const Vec& x) {
    const Mat jac = embed.jacobian(x);
    return Mat(pseudo_inverse(jac) * j * jac);
  };
  out.xi = [=](const Vec& x) {
    const Vec normal = embed.value(x) * rc;
    return Vec(pseudo_inverse(embed.jacobian(x)) * (-(j * normal)));
  };
  return out;
}

AmbientStructure heisenberg_contact(int s) {
  const int n = 2 * s + 1;
  AmbientStructure out;
  out.name = "heisenberg";
  out.endomorphism = [s, n](const Vec& x) {
    Mat f = Mat::Zero(n, n);
    for (int i = 0; i < s; ++i) {
      f(s + i, i) = -1.0;  // phi d/dx_i = -d/dy_i
      f(i, s + i) = 1.0;   // phi d/dy_i = d/dx_i + y_i d/dz
      f(n - 1, s + i) = x[s + i];
    }
    return f;
  };
  out.xi = [n](const Vec&) {
    Vec xi = Vec::Zero(n);
    xi[n - 1] = 2.0;
    return xi;
  };
  out.eta = [s, n](const Vec& x) {
    Vec eta = Vec::Zero(n);
    for (int i = 0; i < s; ++i) eta[i] = -0.5 * x[s + i];
    eta[n - 1] = 0.5;
    return eta;
  };
  return out;
}

AmbientStructure product_contact(const AmbientStructure& fiber_complex, int fiber_dim) {
  const int n = fiber_dim + 1;
  AmbientStructure out;
  out.name = "product";
  auto fiber_j = fiber_complex.endomorphism;
  out.endomorphism = [fiber_j, fiber_dim, n](const Vec& x) {
    Mat f = Mat::Zero(n, n);
    f.topLeftCorner(fiber_dim, fiber_dim) = fiber_j(x.head(fiber_dim));
    return f;
  };
  out.xi = [n](const Vec&) { return Vec(Vec::Unit(n, n - 1)); };
  out.eta = [n](const Vec&) { return Vec(Vec::Unit(n, n - 1)); };
  return out;
}

}  // namespace structures
}  // namespace chenmap

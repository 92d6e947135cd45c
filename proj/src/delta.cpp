#include "chenmap/delta.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "chenmap/chart_geometry.hpp"
#include "chenmap/errors.hpp"
#include "chenmap/kernels.hpp"

namespace chenmap {

namespace {

constexpr int kMaxSweeps = 2000;
constexpr double kGradientStop = 1e-8;

struct SphereGrid {
  int dim = 0;
  int count = 0;
  std::vector<std::vector<double>> angles;
  std::vector<Vec> points;
};

Vec angles_to_vector(const double* angles, int dim) {
  Vec x(dim);
  double s = 1.0;
  for (int i = 0; i + 2 < dim; ++i) {
    x[i] = s * std::cos(angles[i]);
    s *= std::sin(angles[i]);
  }
  x[dim - 2] = s * std::cos(angles[dim - 2]);
  x[dim - 1] = s * std::sin(angles[dim - 2]);
  return x;
}

double grid_angle(int k, int n) { return static_cast<double>(k) * std::numbers::pi / n; }

// Polar angles at k*pi/n for k = 0..n, azimuth at k*pi/n for k = 0..n-1
// (antipodal points identified), enumerated lexicographically.
SphereGrid sphere_grid(int dim, int n) {
  SphereGrid g;
  g.dim = dim;
  const int slots = dim - 1;
  std::vector<int> idx(slots, 0);
  std::vector<int> limit(slots, n + 1);
  limit[slots - 1] = n;
  while (true) {
    std::vector<double> a(slots);
    for (int i = 0; i < slots; ++i) a[i] = grid_angle(idx[i], n);
    g.points.push_back(angles_to_vector(a.data(), dim));
    g.angles.push_back(std::move(a));
    int pos = slots - 1;
    while (pos >= 0 && ++idx[pos] == limit[pos]) idx[pos--] = 0;
    if (pos < 0) break;
  }
  g.count = static_cast<int>(g.points.size());
  return g;
}

// Columns 2..r of the Householder reflection sending u to a multiple of e1.
Mat complement_basis(const Vec& u) {
  const int r = static_cast<int>(u.size());
  Vec w = u;
  w[0] += u[0] >= 0.0 ? 1.0 : -1.0;
  const Mat h = Mat::Identity(r, r) - 2.0 * w * w.transpose() / w.squaredNorm();
  return h.rightCols(r - 1);
}

// M(u)_bc = R(u, e_b, e_c, u)
Mat curvature_operator(const CurvatureTensor& t, const Vec& u) {
  const int r = t.dim();
  Mat m = Mat::Zero(r, r);
  for (int a = 0; a < r; ++a) {
    if (u[a] == 0.0) continue;
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c) {
        double s = 0.0;
        for (int d = 0; d < r; ++d) s += t(a, b, c, d) * u[d];
        m(b, c) += u[a] * s;
      }
  }
  return 0.5 * (m + m.transpose());
}

PlaneSearchResult exhaustive(const CurvatureTensor& t, int n) {
  const int r = t.dim();
  if (r > 4) fail(ErrorCode::DimensionMismatch, "exhaustive grid search supports rank <= 4");
  const SphereGrid ug = sphere_grid(r, n);
  const SphereGrid wg = sphere_grid(r - 1, n);
  const int dim = r - 1;
  std::vector<double> soa(static_cast<std::size_t>(dim) * wg.count);
  for (int p = 0; p < wg.count; ++p)
    for (int a = 0; a < dim; ++a) soa[static_cast<std::size_t>(a) * wg.count + p] = wg.points[p][a];
  std::vector<double> out(wg.count);
  std::vector<double> m_flat(static_cast<std::size_t>(dim) * dim);

  PlaneSearchResult res;
  res.method = SearchMode::ExhaustiveGrid;
  res.min_value = std::numeric_limits<double>::infinity();
  res.resolution = n;
  int best_u = -1;
  int best_w = -1;
  for (int iu = 0; iu < ug.count; ++iu) {
    const Vec& u = ug.points[iu];
    const Mat basis = complement_basis(u);
    const Mat mp = basis.transpose() * curvature_operator(t, u) * basis;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b) m_flat[static_cast<std::size_t>(a) * dim + b] = mp(a, b);
    kernels::quadratic_forms(m_flat, dim, soa, out);
    for (int p = 0; p < wg.count; ++p) {
      if (out[p] < res.min_value) {
        res.min_value = out[p];
        best_u = iu;
        best_w = p;
      }
    }
  }
  res.evaluations = static_cast<long long>(ug.count) * wg.count;
  res.u = ug.points[best_u];
  res.v = complement_basis(res.u) * wg.points[best_w];
  res.angles = ug.angles[best_u];
  res.angles.insert(res.angles.end(), wg.angles[best_w].begin(), wg.angles[best_w].end());
  const double pi = std::numbers::pi;
  const double du = (r - 1) * pi / (2.0 * n);
  const double dv = (r - 2) * pi / (2.0 * n);
  double fro = 0.0;
  for (double x : t.data()) fro += x * x;
  res.certified_gap = 2.0 * std::sqrt(fro) * (3.0 * du + dv);
  return res;
}

double k_of(const CurvatureTensor& t, const Vec& u, const Vec& v) { return t.apply(u, v, v, u); }

struct LocalResult {
  double value;
  Vec u;
  Vec v;
  long long evaluations;
  bool converged;
};

LocalResult descend(const CurvatureTensor& t, Mat q) {
  const int r = t.dim();
  LocalResult res{0.0, Vec(), Vec(), 0, false};
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    for (int slot = 0; slot < 2; ++slot) {
      for (int j = 2; j < r; ++j) {
        const Vec u = q.col(0);
        const Vec v = q.col(1);
        const Vec c = q.col(j);
        // K along the rotation of `slot` toward c: a0 + a1 cos 2s + b1 sin 2s
        const double k0 = k_of(t, u, v);
        const double kc = slot == 0 ? k_of(t, c, v) : k_of(t, u, c);
        const double cross = slot == 0 ? t.apply(u, v, v, c) : t.apply(u, v, c, u);
        res.evaluations += 3;
        const double a1 = 0.5 * (k0 - kc);
        const double b1 = cross;
        if (std::hypot(a1, b1) <= 1e-300) continue;
        const double s = 0.5 * std::atan2(-b1, -a1);
        const double cs = std::cos(s);
        const double sn = std::sin(s);
        const Vec moved = cs * q.col(slot) + sn * c;
        q.col(j) = -sn * q.col(slot) + cs * c;
        q.col(slot) = moved;
      }
    }
    double grad = 0.0;
    const Vec u = q.col(0);
    const Vec v = q.col(1);
    for (int j = 2; j < r; ++j) {
      const double gu = 2.0 * t.apply(u, v, v, q.col(j));
      const double gv = 2.0 * t.apply(u, v, q.col(j), u);
      grad += gu * gu + gv * gv;
    }
    res.evaluations += 2 * (r - 2);
    if (std::sqrt(grad) < kGradientStop) {
      res.converged = true;
      break;
    }
  }
  res.u = q.col(0);
  res.v = q.col(1);
  res.value = k_of(t, res.u, res.v);
  ++res.evaluations;
  return res;
}

PlaneSearchResult multistart(const CurvatureTensor& t, int starts, std::uint64_t seed) {
  const int r = t.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  PlaneSearchResult res;
  res.method = SearchMode::MultistartLocal;
  res.min_value = std::numeric_limits<double>::infinity();
  res.certified_gap = std::numeric_limits<double>::quiet_NaN();
  res.resolution = starts;
  for (int s = 0; s < starts; ++s) {
    Mat g(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) g(i, j) = normal(rng);
    const Mat q = Eigen::HouseholderQR<Mat>(g).householderQ();
    const LocalResult lr = descend(t, q);
    res.evaluations += lr.evaluations;
    if (!lr.converged) ++res.unconverged;
    if (lr.value < res.min_value) {
      res.min_value = lr.value;
      res.u = lr.u;
      res.v = lr.v;
    }
  }
  return res;
}

}  // namespace

std::string_view to_string(SearchMode mode) {
  return mode == SearchMode::ExhaustiveGrid ? "exhaustive_grid" : "multistart_local";
}

SearchMode SearchOptions::resolved_mode(int r) const {
  if (mode_set) return mode;
  return r <= 4 ? SearchMode::ExhaustiveGrid : SearchMode::MultistartLocal;
}

int SearchOptions::resolved_budget(int r) const {
  if (budget > 0) return budget;
  return resolved_mode(r) == SearchMode::ExhaustiveGrid ? kDefaultGridSamples : kDefaultStarts;
}

PlaneSearchResult min_sectional_curvature(const CurvatureTensor& framed, const SearchOptions& opts) {
  const int r = framed.dim();
  if (r < 3) fail(ErrorCode::RankDeficient, "plane search needs rank >= 3, got " + std::to_string(r));
  const int budget = opts.resolved_budget(r);
  if (budget < 1) fail(ErrorCode::SchemaError, "search budget must be positive");
  return opts.resolved_mode(r) == SearchMode::ExhaustiveGrid ? exhaustive(framed, budget)
                                                             : multistart(framed, budget, opts.seed);
}

PlaneSearchResult min_sectional_curvature(const CurvatureTensor& rm, const Mat& g, const Mat& h_frame,
                                          const SearchOptions& opts, const Tolerances& tol) {
  if (orthonormality_defect(g, h_frame) > tol.frame_orthonormal)
    fail(ErrorCode::NonOrthonormalFrame, "horizontal frame is not orthonormal");
  return min_sectional_curvature(rm.restrict_to(h_frame), opts);
}

double delta_h(const CurvatureTensor& framed, const PlaneSearchResult& search) {
  return 0.5 * doubled_scalar_curvature(framed) - search.min_value;
}

HorizontalPlane plane_from_angles(int r, const std::vector<double>& angles) {
  if (r < 3) fail(ErrorCode::RankDeficient, "angle planes need rank >= 3");
  if (static_cast<int>(angles.size()) != 2 * r - 3)
    fail(ErrorCode::SchemaError, "expected " + std::to_string(2 * r - 3) + " angles for rank " + std::to_string(r));
  const Vec u = angles_to_vector(angles.data(), r);
  const Vec w = angles_to_vector(angles.data() + (r - 1), r - 1);
  HorizontalPlane p;
  p.u = u;
  p.v = complement_basis(u) * w;
  p.id = "angles";
  return p;
}

double delta_bound_gcsf(int r, double tau_sq, double f1, double f2, int branch) {
  const double rr = r;
  const double base = tau_sq / (rr - 1.0) + (rr + 1.0) * f1;
  if (branch == 1) return (rr - 2.0) / 2.0 * (base + 3.0 * rr / (rr - 2.0) * f2);
  return (rr - 2.0) / 2.0 * base;
}

double delta_bound_gssf_range(int r, double tau_sq, double f1, double f2, double f3, int branch) {
  const double rr = r;
  const double base = tau_sq / (rr - 1.0) + (rr + 1.0) * f1;
  switch (branch) {
    case 1: return (rr - 2.0) / 2.0 * base - f3 * (rr - 1.0);
    case 2: return (rr - 2.0) / 2.0 * base + 1.5 * rr * f2 - f3 * (rr - 1.0);
    case 3: return (rr - 2.0) / 2.0 * (base - 2.0 * f3);
    default: return (rr - 2.0) / 2.0 * (base + 3.0 * rr / (rr - 2.0) * f2 - 2.0 * f3);
  }
}

double delta_bound_gssf_perp(int r, double tau_sq, double f1, double f2, int branch) {
  const double rr = r;
  const double base = (rr - 2.0) / 2.0 * (tau_sq / (rr - 1.0) + (rr + 1.0) * f1);
  return branch == 1 ? base : base + 1.5 * rr * f2;
}

double harmonic_constant_gcsf(int r, double f1, double f2, int branch) {
  const double rr = r;
  if (branch == 1) return ((rr + 1.0) * (rr - 2.0) * f1 + 3.0 * rr * f2) / 2.0;
  return (rr + 1.0) * (rr - 2.0) * f1 / 2.0;
}

double harmonic_constant_gssf_range(int r, double f1, double f2, double f3, int branch) {
  const double rr = r;
  switch (branch) {
    case 1: return (rr + 1.0) * (rr - 2.0) / 2.0 * f1 - (rr - 1.0) * f3;
    case 2: return (rr + 1.0) * (rr - 2.0) / 2.0 * f1 + 3.0 * rr / 2.0 * f2 - (rr - 1.0) * f3;
    case 3: return (rr - 2.0) * ((rr + 1.0) / 2.0 * f1 - f3);
    default: return (rr - 2.0) * ((rr + 1.0) / 2.0 * f1 - f3) + 3.0 * rr / 2.0 * f2;
  }
}

double harmonic_constant_gssf_perp(int r, double f1, double f2, int branch) {
  const double rr = r;
  if (branch == 1) return (rr + 1.0) * (rr - 2.0) * f1 / 2.0;
  return ((rr + 1.0) * (rr - 2.0) * f1 + 3.0 * rr * f2) / 2.0;
}

namespace {

struct BranchChoice {
  int branch = 0;
  std::vector<int> adjacent;  // branches that must agree on a sign boundary
};

BranchChoice gcsf_branch(double f2) {
  if (f2 > 0.0) return {1, {}};
  if (f2 < 0.0) return {2, {}};
  return {1, {2}};
}

BranchChoice gssf_range_branch(double f2, double f3) {
  const bool f2pos = f2 > 0.0;
  const bool f3pos = f3 > 0.0;
  BranchChoice c;
  c.branch = f2pos ? (f3pos ? 4 : 2) : (f3pos ? 3 : 1);
  // The boundary values f2 = 0 and f3 = 0 belong to the "<= 0" branches; the
  // neighbouring "> 0" formulas are evaluated there for continuity.
  if (f2 == 0.0) c.adjacent.push_back(f3pos ? 4 : 2);
  if (f3 == 0.0) c.adjacent.push_back(f2pos ? 4 : 3);
  if (f2 == 0.0 && f3 == 0.0) c.adjacent.push_back(4);
  return c;
}

BranchChoice gssf_perp_branch(double f2) {
  if (f2 > 0.0) return {2, {}};
  if (f2 < 0.0) return {1, {}};
  return {1, {2}};
}

struct RangeStructure {
  Mat p;
  Vec eta;
  bool contact = false;
  XiPosition xi = XiPosition::InRange;
  double phi_image_sq = 0.0;  // sum_j |phi pi_* h_j|^2
};

RangeStructure range_structure(const MapBundle& b, const SpaceFormModel& model, const Tolerances& tol) {
  RangeStructure rs;
  const SplitFrames& f = b.frames;
  const int r = b.rank();
  rs.contact = model.kind == ModelKind::Gssf;
  if (!model.structure.endomorphism) {
    if (model.f2 != 0.0 || rs.contact) fail(ErrorCode::StructureViolation, "model needs a structure field");
    rs.p = Mat::Zero(r, r);
    rs.eta = Vec::Zero(r);
    return rs;
  }
  const StructureAt s = model.at(f.image_point, f.target_metric);
  validate_structure(model.kind, s, f.target_metric, tol);
  rs.p = range_endomorphism_P(s, f, tol);
  rs.eta = rs.contact ? range_eta(s, f) : Vec::Zero(r);
  if (rs.contact) rs.xi = xi_position(s, f, tol);
  const Mat image = s.endomorphism * f.range;
  rs.phi_image_sq = (image.transpose() * f.target_metric * image).trace();
  return rs;
}

void statement_flags(DeltaReport& rep, const MapBundle& adapted, const RangeStructure& rs, const Tolerances& tol) {
  const int r = adapted.rank();
  const double small = 1e-6;
  const double theta = std::pow(rs.p(0, 1), 2);
  const double p_sq = rs.p.squaredNorm();
  double tail = 0.0;
  for (int i = 2; i < r; ++i)
    for (int j = 2; j < r; ++j) tail = std::max(tail, std::abs(rs.p(i, j)));
  const EqualityDiagnostic eq = detect_equality_structure(adapted.sff, tol);
  rep.statement_flags["A"] = r % 2 == 0 && std::abs(p_sq - r) < small * r;
  rep.statement_flags["B"] = theta < small;
  rep.statement_flags["C"] = eq.is_equality_form;
  rep.statement_flags["D"] = true;
  rep.statement_flags["E"] = tail < small;
  if (rs.contact) {
    const double phi = rs.eta[0] * rs.eta[0] + rs.eta[1] * rs.eta[1];
    rep.statement_flags["F"] = phi < small;
    rep.statement_flags["G"] = std::abs(rs.phi_image_sq - p_sq) < small * std::max(1.0, p_sq);
    rep.statement_flags["H"] = theta < small;
    rep.statement_flags["I"] = std::abs(std::max(std::abs(rs.eta[0]), std::abs(rs.eta[1])) - 1.0) < small;
  }
  rep.values["theta_at_min"] = theta;
  rep.values["P_norm_sq"] = p_sq;
}

DeltaReport start_report(const MapBundle& b, const SearchOptions& opts, double tau_sq_override, bool force_tau) {
  const int r = b.rank();
  if (r < 3) fail(ErrorCode::RankDeficient, "delta estimates need rank >= 3, got " + std::to_string(r));
  DeltaReport rep;
  const CurvatureTensor framed = b.horizontal_curvature();
  rep.search = min_sectional_curvature(framed, opts);
  rep.delta = delta_h(framed, rep.search);
  rep.values["two_rho_h"] = doubled_scalar_curvature(framed);
  rep.values["min_sectional"] = rep.search.min_value;
  rep.values["tau_sq"] = force_tau ? tau_sq_override : tension_field(b.sff).norm_sq;
  rep.values["rank"] = r;
  return rep;
}

void close_report(DeltaReport& rep, const Tolerances& tol) {
  rep.slack = rep.bound_value - rep.delta;
  rep.holds = rep.delta <= rep.bound_value + tol.slack;
  rep.equality = std::abs(rep.slack) < tol.equality;
}

void check_adjacent(DeltaReport& rep, const BranchChoice& bc, const std::function<double(int)>& bound) {
  double dev = 0.0;
  for (int a : bc.adjacent) dev = std::max(dev, std::abs(bound(a) - bound(bc.branch)));
  rep.values["branch_continuity_deviation"] = dev;
  if (!bc.adjacent.empty()) {
    const bool ok = dev <= 1e-12 * std::max(1.0, std::abs(rep.bound_value));
    if (!ok) rep.notes.push_back("adjacent bounds disagree on a sign boundary");
  }
}

DeltaReport gcsf_report(const MapBundle& b, const SpaceFormModel& model, const SearchOptions& opts,
                        const Tolerances& tol, bool harmonic) {
  if (model.kind != ModelKind::Gcsf) fail(ErrorCode::StructureViolation, "GCSF delta bound needs a GCSF model");
  DeltaReport rep = start_report(b, opts, 0.0, harmonic);
  const int r = b.rank();
  const double tau_sq = rep.values["tau_sq"];
  const BranchChoice bc = gcsf_branch(model.f2);
  auto bound = [&](int br) { return delta_bound_gcsf(r, tau_sq, model.f1, model.f2, br); };
  rep.bound_value = bound(bc.branch);
  rep.bound_name = bc.branch == 1 ? "delta_gcsf_f2_nonneg" : "delta_gcsf_f2_nonpos";
  rep.equality_statements = bc.branch == 1 ? "ABCD" : "CDE";
  check_adjacent(rep, bc, bound);
  if (harmonic) {
    const double printed = harmonic_constant_gcsf(r, model.f1, model.f2, bc.branch);
    rep.values["corollary_constant"] = printed;
    rep.values["corollary_deviation"] = std::abs(printed - rep.bound_value);
  }
  const MapBundle adapted = adapt_to_plane(b, rep.search.u, rep.search.v);
  statement_flags(rep, adapted, range_structure(adapted, model, tol), tol);
  close_report(rep, tol);
  return rep;
}

DeltaReport gssf_report(const MapBundle& b, const SpaceFormModel& model, const SearchOptions& opts,
                        const Tolerances& tol, bool harmonic) {
  if (model.kind != ModelKind::Gssf) fail(ErrorCode::StructureViolation, "GSSF delta bound needs a GSSF model");
  const RangeStructure rs0 = range_structure(b, model, tol);
  if (rs0.xi == XiPosition::Mixed) fail(ErrorCode::XiMixed, "xi lies neither in the range nor in its complement");
  DeltaReport rep = start_report(b, opts, 0.0, harmonic);
  const int r = b.rank();
  const double tau_sq = rep.values["tau_sq"];
  const bool in_range = rs0.xi == XiPosition::InRange;
  BranchChoice bc;
  std::function<double(int)> bound;
  if (in_range) {
    bc = gssf_range_branch(model.f2, model.f3);
    bound = [&](int br) { return delta_bound_gssf_range(r, tau_sq, model.f1, model.f2, model.f3, br); };
    static const char* names[] = {"", "delta_gssf_xi_range_f2_nonpos_f3_nonpos", "delta_gssf_xi_range_f2_pos_f3_nonpos",
                                  "delta_gssf_xi_range_f2_nonpos_f3_pos", "delta_gssf_xi_range_f2_pos_f3_pos"};
    static const char* needs[] = {"", "CDEF", "CDGH", "CDEI", "BCDGI"};
    rep.bound_name = names[bc.branch];
    rep.equality_statements = needs[bc.branch];
  } else {
    bc = gssf_perp_branch(model.f2);
    bound = [&](int br) { return delta_bound_gssf_perp(r, tau_sq, model.f1, model.f2, br); };
    rep.bound_name = bc.branch == 1 ? "delta_gssf_xi_perp_f2_nonpos" : "delta_gssf_xi_perp_f2_pos";
    rep.equality_statements = bc.branch == 1 ? "CDE" : "CDGH";
  }
  rep.bound_value = bound(bc.branch);
  check_adjacent(rep, bc, bound);
  if (harmonic) {
    const double printed = in_range ? harmonic_constant_gssf_range(r, model.f1, model.f2, model.f3, bc.branch)
                                    : harmonic_constant_gssf_perp(r, model.f1, model.f2, bc.branch);
    rep.values["corollary_constant"] = printed;
    rep.values["corollary_deviation"] = std::abs(printed - rep.bound_value);
  }
  rep.notes.push_back(std::string("xi ") + std::string(to_string(rs0.xi)));
  const MapBundle adapted = adapt_to_plane(b, rep.search.u, rep.search.v);
  statement_flags(rep, adapted, range_structure(adapted, model, tol), tol);
  close_report(rep, tol);
  return rep;
}

}  // namespace

DeltaReport verify_delta_bound_gcsf(const MapBundle& b, const SpaceFormModel& model, const SearchOptions& opts,
                                    const Tolerances& tol) {
  DeltaReport rep = gcsf_report(b, model, opts, tol, false);
  rep.name = "delta_gcsf";
  return rep;
}

DeltaReport verify_delta_bound_gssf(const MapBundle& b, const SpaceFormModel& model, const SearchOptions& opts,
                                    const Tolerances& tol) {
  DeltaReport rep = gssf_report(b, model, opts, tol, false);
  rep.name = "delta_gssf";
  return rep;
}

DeltaReport verify_harmonic_corollaries(const MapBundle& b, const SpaceFormModel& model, const SearchOptions& opts,
                                        const Tolerances& tol) {
  const TensionField t = tension_field(b.sff, tol);
  if (!t.harmonic)
    fail(ErrorCode::NotHarmonic, "tension field norm " + std::to_string(std::sqrt(t.norm_sq)) + " is not zero");
  DeltaReport rep = model.kind == ModelKind::Gcsf ? gcsf_report(b, model, opts, tol, true)
                                                  : gssf_report(b, model, opts, tol, true);
  rep.name = model.kind == ModelKind::Gcsf ? "harmonic_gcsf" : "harmonic_gssf";
  const double dev = rep.values["corollary_deviation"];
  if (dev > 1e-12 * std::max(1.0, std::abs(rep.bound_value)))
    rep.notes.push_back("tabulated harmonic constant differs from the delegated bound");
  return rep;
}

}  // namespace chenmap

#pragma once

namespace chenmap {

// Every numerical threshold used by the engine lives here so that a
// convergence study can turn a single knob.
struct Tolerances {
  double fd_step = 1e-4;            // central-difference width on coordinates
  double pd_pivot = 1e-10;          // Cholesky pivot floor for positive definiteness
  double metric_condition = 1e12;   // above this the metric counts as singular
  double symmetry = 1e-12;          // metric symmetry
  double rank_relative = 1e-7;      // singular value cutoff relative to the largest
  double frame_orthonormal = 1e-9;
  double isometry = 1e-6;
  double sff = 1e-4;
  double gauss = 1e-3;
  double harmonic = 1e-6;
  double xi = 1e-6;
  double structure = 1e-9;
  double slack = 1e-4;
  double equality = 1e-5;
  double degenerate_plane = 1e-12;  // Gram determinant floor
  double model_consistency = 1e-3;  // closed-form vs numeric target curvature

  // Multiplies every tolerance except the difference step.
  [[nodiscard]] Tolerances scaled(double factor) const {
    Tolerances t = *this;
    for (double* v : {&t.symmetry, &t.rank_relative, &t.frame_orthonormal, &t.isometry,
                      &t.sff, &t.gauss, &t.harmonic, &t.xi, &t.structure, &t.slack,
                      &t.equality, &t.model_consistency}) {
      *v *= factor;
    }
    return t;
  }
};

}  // namespace chenmap

#pragma once

#include "chenmap/chart.hpp"
#include "chenmap/config.hpp"
#include "chenmap/tensor.hpp"

namespace chenmap {

// Levi-Civita connection coefficients with metric partials from central
// differences of width `step`.
Christoffel christoffel(const MetricChart& chart, const Vec& x, double step,
                        const Tolerances& tol = {});

// Lowered Riemann tensor assembled from Christoffel symbols and their central
// differences. Sign convention: unit sphere has K = +1.
CurvatureTensor riemann(const MetricChart& chart, const Vec& x, double step,
                        const Tolerances& tol = {});

// g(R(u,v)v,u) divided by the Gram determinant of (u, v).
double sectional_curvature(const CurvatureTensor& r, const Mat& g, const Vec& u, const Vec& v,
                           const Tolerances& tol = {});

// Doubled scalar curvature sum_{i,j} R(e_i,e_j,e_j,e_i) over a g-orthonormal frame
// given as the columns of `frame`.
double scalar_curvature_on_subspace(const CurvatureTensor& r, const Mat& g, const Mat& frame,
                                    const Tolerances& tol = {});

// Same sum when the tensor is already expressed in an orthonormal frame.
double doubled_scalar_curvature(const CurvatureTensor& framed);

// Largest |F^T g F - I| entry.
double orthonormality_defect(const Mat& g, const Mat& frame);

}  // namespace chenmap

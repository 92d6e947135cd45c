#include "chenmap/tensor.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace chenmap {

Vec Christoffel::contract(const Vec& x, const Vec& y) const {
  Vec out = Vec::Zero(dim_);
  for (int k = 0; k < dim_; ++k) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) s += (*this)(k, i, j) * x[i] * y[j];
    }
    out[k] = s;
  }
  return out;
}

double Christoffel::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

double CurvatureTensor::apply(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const {
  assert(x.size() == dim_ && y.size() == dim_ && z.size() == dim_ && w.size() == dim_);
  double total = 0.0;
  std::size_t p = 0;
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      const double xy = x[i] * y[j];
      if (xy == 0.0) {
        p += static_cast<std::size_t>(dim_) * dim_;
        continue;
      }
      for (int k = 0; k < dim_; ++k) {
        double inner = 0.0;
        for (int l = 0; l < dim_; ++l) inner += data_[p++] * w[l];
        total += xy * z[k] * inner;
      }
    }
  }
  return total;
}

CurvatureTensor CurvatureTensor::restrict_to(const Mat& frame) const {
  assert(frame.rows() == dim_);
  const int r = static_cast<int>(frame.cols());
  const int n = dim_;
  // Contract one slot at a time: O(r n^4) instead of O(r^4 n^4).
  std::vector<double> a(static_cast<std::size_t>(r) * n * n * n, 0.0);
  for (int p = 0; p < r; ++p)
    for (int i = 0; i < n; ++i) {
      const double f = frame(i, p);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            a[((static_cast<std::size_t>(p) * n + j) * n + k) * n + l] += f * (*this)(i, j, k, l);
    }
  std::vector<double> b(static_cast<std::size_t>(r) * r * n * n, 0.0);
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q)
      for (int j = 0; j < n; ++j) {
        const double f = frame(j, q);
        if (f == 0.0) continue;
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            b[((static_cast<std::size_t>(p) * r + q) * n + k) * n + l] +=
                f * a[((static_cast<std::size_t>(p) * n + j) * n + k) * n + l];
      }
  std::vector<double> c(static_cast<std::size_t>(r) * r * r * n, 0.0);
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q)
      for (int s = 0; s < r; ++s)
        for (int k = 0; k < n; ++k) {
          const double f = frame(k, s);
          if (f == 0.0) continue;
          for (int l = 0; l < n; ++l)
            c[((static_cast<std::size_t>(p) * r + q) * r + s) * n + l] +=
                f * b[((static_cast<std::size_t>(p) * r + q) * n + k) * n + l];
        }
  CurvatureTensor out(r);
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q)
      for (int s = 0; s < r; ++s)
        for (int t = 0; t < r; ++t) {
          double v = 0.0;
          for (int l = 0; l < n; ++l)
            v += frame(l, t) * c[((static_cast<std::size_t>(p) * r + q) * r + s) * n + l];
          out(p, q, s, t) = v;
        }
  return out;
}

double CurvatureTensor::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double CurvatureTensor::max_abs_difference(const CurvatureTensor& other) const {
  assert(other.dim_ == dim_);
  double m = 0.0;
  for (std::size_t i = 0; i < data_.size(); ++i) m = std::max(m, std::abs(data_[i] - other.data_[i]));
  return m;
}

CurvatureTensor& CurvatureTensor::operator+=(const CurvatureTensor& other) {
  assert(other.dim_ == dim_);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

CurvatureTensor& CurvatureTensor::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

double SymmetryResiduals::max() const {
  return std::max({antisym_first, antisym_second, pair, bianchi});
}

SymmetryResiduals symmetry_residuals(const CurvatureTensor& r) {
  SymmetryResiduals out;
  const int n = r.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double v = r(i, j, k, l);
          out.antisym_first = std::max(out.antisym_first, std::abs(v + r(j, i, k, l)));
          out.antisym_second = std::max(out.antisym_second, std::abs(v + r(i, j, l, k)));
          out.pair = std::max(out.pair, std::abs(v - r(k, l, i, j)));
          out.bianchi = std::max(out.bianchi, std::abs(v + r(j, k, i, l) + r(k, i, j, l)));
        }
  return out;
}

CurvatureTensor constant_curvature_tensor(const Mat& g, double c) {
  const int n = static_cast<int>(g.rows());
  CurvatureTensor out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) out(i, j, k, l) = c * (g(j, k) * g(i, l) - g(i, k) * g(j, l));
  return out;
}

}  // namespace chenmap

#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace chenmap {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Gamma^k_{ij}, stored densely; symmetric in (i, j) for the Levi-Civita connection.
class Christoffel {
 public:
  Christoffel() = default;
  explicit Christoffel(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim) * dim * dim, 0.0) {}

  [[nodiscard]] int dim() const noexcept { return dim_; }
  double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
  double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }

  // Gamma(X, Y)^k = Gamma^k_{ij} X^i Y^j
  [[nodiscard]] Vec contract(const Vec& x, const Vec& y) const;
  [[nodiscard]] double max_abs() const;

 private:
  [[nodiscard]] std::size_t index(int k, int i, int j) const {
    return (static_cast<std::size_t>(k) * dim_ + i) * dim_ + j;
  }
  int dim_ = 0;
  std::vector<double> data_;
};

// Fully lowered curvature tensor, R(X,Y,Z,W) = R_{ijkl} X^i Y^j Z^k W^l with
// R(X,Y,Z,W) = g(R(X,Y)Z, W) and R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y].
// Under this convention the unit sphere has g(R(X,Y)Y,X) = +1 on orthonormal pairs.
class CurvatureTensor {
 public:
  CurvatureTensor() = default;
  explicit CurvatureTensor(int dim)
      : dim_(dim), data_(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0) {}

  [[nodiscard]] int dim() const noexcept { return dim_; }
  double& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }

  [[nodiscard]] double apply(const Vec& x, const Vec& y, const Vec& z, const Vec& w) const;

  // Components of the tensor in the basis given by the columns of `frame`
  // (dim x r); the result has dimension r.
  [[nodiscard]] CurvatureTensor restrict_to(const Mat& frame) const;

  [[nodiscard]] double frobenius_norm() const;
  [[nodiscard]] double max_abs_difference(const CurvatureTensor& other) const;
  [[nodiscard]] const std::vector<double>& data() const noexcept { return data_; }

  CurvatureTensor& operator+=(const CurvatureTensor& other);
  CurvatureTensor& operator*=(double s);

 private:
  [[nodiscard]] std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * dim_ + j) * dim_ + k) * dim_ + l;
  }
  int dim_ = 0;
  std::vector<double> data_;
};

struct SymmetryResiduals {
  double antisym_first = 0.0;   // R_ijkl + R_jikl
  double antisym_second = 0.0;  // R_ijkl + R_ijlk
  double pair = 0.0;            // R_ijkl - R_klij
  double bianchi = 0.0;         // R_ijkl + R_jkil + R_kijl

  [[nodiscard]] double max() const;
};

SymmetryResiduals symmetry_residuals(const CurvatureTensor& r);

// Constant-curvature tensor c (g(Y,Z)g(X,W) - g(X,Z)g(Y,W)).
CurvatureTensor constant_curvature_tensor(const Mat& g, double c);

}  // namespace chenmap

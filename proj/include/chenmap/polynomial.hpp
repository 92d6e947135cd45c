#pragma once

#include <string>
#include <vector>

#include "chenmap/chart.hpp"
#include "chenmap/tensor.hpp"

namespace chenmap {

inline constexpr int kMaxPolynomialDegree = 4;

struct Monomial {
  double coefficient = 0.0;
  std::vector<int> exponents;  // one per variable

  [[nodiscard]] int degree() const;
};

// Sparse polynomial in `vars` real variables.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(int vars, std::vector<Monomial> terms);  // SchemaError on bad exponents or degree > 4

  [[nodiscard]] int vars() const noexcept { return vars_; }
  [[nodiscard]] int degree() const;
  [[nodiscard]] const std::vector<Monomial>& terms() const noexcept { return terms_; }
  [[nodiscard]] double operator()(const Vec& x) const;
  [[nodiscard]] Vec gradient(const Vec& x) const;

 private:
  int vars_ = 0;
  std::vector<Monomial> terms_;
};

// Metric whose entries are polynomials; entries must form a symmetric table.
// The domain is where the metric is positive definite.
MetricChart polynomial_chart(const std::string& name, int dim, const std::vector<std::vector<Polynomial>>& entries);

// Map with polynomial components and exact Jacobian.
SmoothMap polynomial_map(int source_dim, const std::vector<Polynomial>& components);

}  // namespace chenmap

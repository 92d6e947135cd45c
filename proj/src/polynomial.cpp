#include "chenmap/polynomial.hpp"

#include <cmath>
#include <numeric>
#include <utility>

#include "chenmap/errors.hpp"

namespace chenmap {

int Monomial::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

Polynomial::Polynomial(int vars, std::vector<Monomial> terms) : vars_(vars), terms_(std::move(terms)) {
  for (const Monomial& t : terms_) {
    if (static_cast<int>(t.exponents.size()) != vars_)
      fail(ErrorCode::SchemaError, "polynomial term needs " + std::to_string(vars_) + " exponents");
    for (int e : t.exponents)
      if (e < 0) fail(ErrorCode::SchemaError, "polynomial exponent must be non-negative");
    if (t.degree() > kMaxPolynomialDegree)
      fail(ErrorCode::SchemaError, "polynomial degree exceeds " + std::to_string(kMaxPolynomialDegree));
  }
}

int Polynomial::degree() const {
  int d = 0;
  for (const Monomial& t : terms_) d = std::max(d, t.degree());
  return d;
}

double Polynomial::operator()(const Vec& x) const {
  double sum = 0.0;
  for (const Monomial& t : terms_) {
    double v = t.coefficient;
    for (int i = 0; i < vars_; ++i) v *= std::pow(x[i], t.exponents[i]);
    sum += v;
  }
  return sum;
}

Vec Polynomial::gradient(const Vec& x) const {
  Vec g = Vec::Zero(vars_);
  for (const Monomial& t : terms_) {
    for (int k = 0; k < vars_; ++k) {
      if (t.exponents[k] == 0) continue;
      double v = t.coefficient * t.exponents[k];
      for (int i = 0; i < vars_; ++i) v *= std::pow(x[i], i == k ? t.exponents[i] - 1 : t.exponents[i]);
      g[k] += v;
    }
  }
  return g;
}

MetricChart polynomial_chart(const std::string& name, int dim, const std::vector<std::vector<Polynomial>>& entries) {
  if (static_cast<int>(entries.size()) != dim)
    fail(ErrorCode::SchemaError, "metric table must have " + std::to_string(dim) + " rows");
  for (const auto& row : entries) {
    if (static_cast<int>(row.size()) != dim)
      fail(ErrorCode::SchemaError, "metric table must have " + std::to_string(dim) + " columns");
    for (const Polynomial& p : row)
      if (p.vars() != dim) fail(ErrorCode::SchemaError, "metric entry has wrong variable count");
  }
  MetricChart c;
  c.name = name;
  c.dim = dim;
  c.metric_at = [entries, dim](const Vec& x) {
    Mat g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) g(i, j) = entries[i][j](x);
    return g;
  };
  auto metric = c.metric_at;
  c.domain_check = [metric](const Vec& x) {
    const Mat g = metric(x);
    return g.allFinite() && Eigen::LLT<Mat>(g).info() == Eigen::Success;
  };
  return c;
}

SmoothMap polynomial_map(int source_dim, const std::vector<Polynomial>& components) {
  for (const Polynomial& p : components)
    if (p.vars() != source_dim) fail(ErrorCode::SchemaError, "map component has wrong variable count");
  SmoothMap m;
  m.source_dim = source_dim;
  m.target_dim = static_cast<int>(components.size());
  m.value = [components](const Vec& x) {
    Vec y(static_cast<Eigen::Index>(components.size()));
    for (std::size_t i = 0; i < components.size(); ++i) y[static_cast<Eigen::Index>(i)] = components[i](x);
    return y;
  };
  m.jacobian = [components, source_dim](const Vec& x) {
    Mat j(static_cast<Eigen::Index>(components.size()), source_dim);
    for (std::size_t i = 0; i < components.size(); ++i)
      j.row(static_cast<Eigen::Index>(i)) = components[i].gradient(x).transpose();
    return j;
  };
  return m;
}

}  // namespace chenmap

#include <cassert>

#include "chenmap/kernels.hpp"

namespace chenmap::kernels {

void quadratic_forms_scalar(std::span<const double> m, int dim, std::span<const double> v_soa,
                            std::span<double> out) {
  const std::size_t count = out.size();
  assert(m.size() == static_cast<std::size_t>(dim) * dim);
  assert(v_soa.size() == static_cast<std::size_t>(dim) * count);
  for (std::size_t p = 0; p < count; ++p) {
    double acc = 0.0;
    for (int a = 0; a < dim; ++a) {
      double row = 0.0;
      for (int b = 0; b < dim; ++b) row += m[a * dim + b] * v_soa[b * count + p];
      acc += v_soa[a * count + p] * row;
    }
    out[p] = acc;
  }
}

}  // namespace chenmap::kernels

#include <cassert>
#include <cmath>

#include "chenmap/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define CHENMAP_HAVE_X86 1
#endif

namespace chenmap::kernels {

#ifdef CHENMAP_HAVE_X86

__attribute__((target("avx2,fma"))) void quadratic_forms_avx2(std::span<const double> m, int dim,
                                                              std::span<const double> v_soa,
                                                              std::span<double> out) {
  const std::size_t count = out.size();
  assert(m.size() == static_cast<std::size_t>(dim) * dim);
  assert(v_soa.size() == static_cast<std::size_t>(dim) * count);
  const double* v = v_soa.data();
  std::size_t p = 0;
  for (; p + 4 <= count; p += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int a = 0; a < dim; ++a) {
      __m256d row = _mm256_setzero_pd();
      for (int b = 0; b < dim; ++b) {
        row = _mm256_fmadd_pd(_mm256_broadcast_sd(&m[a * dim + b]), _mm256_loadu_pd(v + b * count + p), row);
      }
      acc = _mm256_fmadd_pd(_mm256_loadu_pd(v + a * count + p), row, acc);
    }
    _mm256_storeu_pd(out.data() + p, acc);
  }
  // Tail uses the same fused operations so results do not depend on lane position.
  for (; p < count; ++p) {
    double acc = 0.0;
    for (int a = 0; a < dim; ++a) {
      double row = 0.0;
      for (int b = 0; b < dim; ++b) row = std::fma(m[a * dim + b], v[b * count + p], row);
      acc = std::fma(v[a * count + p], row, acc);
    }
    out[p] = acc;
  }
}

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

#else

void quadratic_forms_avx2(std::span<const double> m, int dim, std::span<const double> v_soa,
                          std::span<double> out) {
  quadratic_forms_scalar(m, dim, v_soa, out);
}

bool cpu_has_avx2() { return false; }

#endif

}  // namespace chenmap::kernels

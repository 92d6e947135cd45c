#include <atomic>
#include <cstdlib>
#include <string>

#include "chenmap/kernels.hpp"

namespace chenmap::kernels {

namespace {

Isa detect() {
  if (const char* env = std::getenv("CHENMAP_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && cpu_has_avx2()) return Isa::Avx2;
  }
  return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar;
}

// -1: not forced
std::atomic<int> forced{-1};

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

Isa active_isa() {
  const int f = forced.load(std::memory_order_relaxed);
  if (f >= 0) return static_cast<Isa>(f);
  static const Isa detected = detect();
  return detected;
}

void force_isa(std::optional<Isa> isa) {
  if (isa && *isa == Isa::Avx2 && !cpu_has_avx2()) isa = Isa::Scalar;
  forced.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

void quadratic_forms(std::span<const double> m, int dim, std::span<const double> v_soa,
                     std::span<double> out) {
  if (active_isa() == Isa::Avx2) {
    quadratic_forms_avx2(m, dim, v_soa, out);
  } else {
    quadratic_forms_scalar(m, dim, v_soa, out);
  }
}

}  // namespace chenmap::kernels

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace chenmap::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

// Batched quadratic forms over a structure-of-arrays batch of vectors:
//   out[p] = sum_{a,b} m[a*dim + b] * v[a*count + p] * v[b*count + p],  count = out.size().
// The scalar routine is the reference; the AVX2 routine must agree with it to
// rounding (it uses fused multiply-add).
void quadratic_forms_scalar(std::span<const double> m, int dim, std::span<const double> v_soa,
                            std::span<double> out);
void quadratic_forms_avx2(std::span<const double> m, int dim, std::span<const double> v_soa,
                          std::span<double> out);

bool cpu_has_avx2();

// ISA used by `quadratic_forms`. Chosen once from CPU features, overridable with
// CHENMAP_SIMD=scalar|avx2 or programmatically (tests).
Isa active_isa();
void force_isa(std::optional<Isa> isa);

void quadratic_forms(std::span<const double> m, int dim, std::span<const double> v_soa,
                     std::span<double> out);

}  // namespace chenmap::kernels

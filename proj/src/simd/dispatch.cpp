#include <cstdlib>
#include <cstring>

#include "bvquad/simd/kernels.hpp"

namespace bvquad::simd {

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(__x86_64__) || defined(__i386__)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept {
  static const Isa isa = [] {
    const char* forced = std::getenv("BVQUAD_SIMD");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return Isa::scalar;
    return available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

DoubleDouble truncated_power_sum(Isa isa, const NodeData& nodes, double t, int s) {
  if (isa == Isa::avx2 && available(Isa::avx2)) {
    return detail::truncated_power_sum_avx2(nodes, t, s);
  }
  return detail::truncated_power_sum_scalar(nodes, t, s);
}

DoubleDouble truncated_power_sum(const NodeData& nodes, double t, int s) {
  return truncated_power_sum(active_isa(), nodes, t, s);
}

void chebyshev_sums(Isa isa, std::span<const double> x, std::span<const double> a,
                    std::span<double> out) {
  if (isa == Isa::avx2 && available(Isa::avx2)) {
    detail::chebyshev_sums_avx2(x, a, out);
  } else {
    detail::chebyshev_sums_scalar(x, a, out);
  }
}

void chebyshev_sums(std::span<const double> x, std::span<const double> a, std::span<double> out) {
  chebyshev_sums(active_isa(), x, a, out);
}

}  // namespace bvquad::simd

#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference version and
// an AVX2+FMA version; the dispatching overloads pick the best one the CPU
// supports at run time (BVQUAD_SIMD=scalar forces the reference path).

#include <span>
#include <string_view>

#include "bvquad/double_double.hpp"

namespace bvquad::simd {

enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa) noexcept;
bool available(Isa isa) noexcept;
/// Selected once per process.
Isa active_isa() noexcept;

/// Nodes and weights split into high and low double-double parts. All four
/// spans have the same length.
struct NodeData {
  std::span<const double> x_hi;
  std::span<const double> x_lo;
  std::span<const double> a_hi;
  std::span<const double> a_lo;

  std::size_t size() const { return x_hi.size(); }
  NodeData tail(std::size_t first) const {
    return {x_hi.subspan(first), x_lo.subspan(first), a_hi.subspan(first), a_lo.subspan(first)};
  }
};

/// sum_j a_j (x_j - t)^s in double-double, for nodes the caller has already
/// restricted to x_j >= t.
DoubleDouble truncated_power_sum(const NodeData& nodes, double t, int s);
DoubleDouble truncated_power_sum(Isa isa, const NodeData& nodes, double t, int s);

/// out[k] = sum_j a_j T_k(x_j) for k < out.size(), compensated summation.
void chebyshev_sums(std::span<const double> x, std::span<const double> a, std::span<double> out);
void chebyshev_sums(Isa isa, std::span<const double> x, std::span<const double> a,
                    std::span<double> out);

namespace detail {
DoubleDouble truncated_power_sum_scalar(const NodeData& nodes, double t, int s);
DoubleDouble truncated_power_sum_avx2(const NodeData& nodes, double t, int s);
void chebyshev_sums_scalar(std::span<const double> x, std::span<const double> a,
                           std::span<double> out);
void chebyshev_sums_avx2(std::span<const double> x, std::span<const double> a,
                         std::span<double> out);
}  // namespace detail

}  // namespace bvquad::simd

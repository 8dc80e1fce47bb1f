#include <cmath>
#include <vector>

#include "bvquad/simd/kernels.hpp"

namespace bvquad::simd::detail {

DoubleDouble truncated_power_sum_scalar(const NodeData& nodes, double t, int s) {
  DoubleDouble acc;
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const DoubleDouble a{nodes.a_hi[j], nodes.a_lo[j]};
    DoubleDouble term = a;
    if (s > 0) {
      DoubleDouble d = dd::two_sum(nodes.x_hi[j], -t);
      d = dd::add(d, nodes.x_lo[j]);
      term = dd::mul(dd::pow(d, s), a);
    }
    acc = dd::add(acc, term);
  }
  return acc;
}

void chebyshev_sums_scalar(std::span<const double> x, std::span<const double> a,
                           std::span<double> out) {
  const std::size_t degrees = out.size();
  if (degrees == 0) return;
  std::vector<double> sum(degrees, 0.0);
  std::vector<double> comp(degrees, 0.0);
  auto accumulate = [&](std::size_t k, double v) {
    const double t = sum[k] + v;
    if (std::abs(sum[k]) >= std::abs(v)) {
      comp[k] += (sum[k] - t) + v;
    } else {
      comp[k] += (v - t) + sum[k];
    }
    sum[k] = t;
  };
  for (std::size_t j = 0; j < x.size(); ++j) {
    double prev = 1.0;
    double cur = x[j];
    accumulate(0, a[j]);
    if (degrees > 1) accumulate(1, a[j] * cur);
    for (std::size_t k = 2; k < degrees; ++k) {
      const double next = 2.0 * x[j] * cur - prev;
      prev = cur;
      cur = next;
      accumulate(k, a[j] * cur);
    }
  }
  for (std::size_t k = 0; k < degrees; ++k) out[k] = sum[k] + comp[k];
}

}  // namespace bvquad::simd::detail

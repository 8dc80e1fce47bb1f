// AVX2+FMA variants. Functions carry the target attribute instead of the
// whole file being built with -mavx2, so nothing here leaks AVX2 code into
// inline functions shared with the scalar build.

#include <cmath>
#include <vector>

#include "bvquad/simd/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#define BVQUAD_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace bvquad::simd::detail {

#if BVQUAD_HAVE_AVX2_KERNELS

namespace {

#define BVQUAD_AVX2 __attribute__((target("avx2,fma"), always_inline)) inline

struct Vdd {
  __m256d hi;
  __m256d lo;
};

BVQUAD_AVX2 Vdd v_two_sum(__m256d a, __m256d b) {
  const __m256d s = _mm256_add_pd(a, b);
  const __m256d bb = _mm256_sub_pd(s, a);
  const __m256d err =
      _mm256_add_pd(_mm256_sub_pd(a, _mm256_sub_pd(s, bb)), _mm256_sub_pd(b, bb));
  return {s, err};
}

BVQUAD_AVX2 Vdd v_quick_two_sum(__m256d a, __m256d b) {
  const __m256d s = _mm256_add_pd(a, b);
  return {s, _mm256_sub_pd(b, _mm256_sub_pd(s, a))};
}

BVQUAD_AVX2 Vdd v_add(Vdd a, Vdd b) {
  Vdd s = v_two_sum(a.hi, b.hi);
  const Vdd t = v_two_sum(a.lo, b.lo);
  s.lo = _mm256_add_pd(s.lo, t.hi);
  s = v_quick_two_sum(s.hi, s.lo);
  s.lo = _mm256_add_pd(s.lo, t.lo);
  return v_quick_two_sum(s.hi, s.lo);
}

BVQUAD_AVX2 Vdd v_add(Vdd a, __m256d b) {
  Vdd s = v_two_sum(a.hi, b);
  s.lo = _mm256_add_pd(s.lo, a.lo);
  return v_quick_two_sum(s.hi, s.lo);
}

BVQUAD_AVX2 Vdd v_mul(Vdd a, Vdd b) {
  const __m256d p = _mm256_mul_pd(a.hi, b.hi);
  __m256d err = _mm256_fmsub_pd(a.hi, b.hi, p);
  err = _mm256_add_pd(err, _mm256_add_pd(_mm256_mul_pd(a.hi, b.lo), _mm256_mul_pd(a.lo, b.hi)));
  return v_quick_two_sum(p, err);
}

}  // namespace

__attribute__((target("avx2,fma")))
DoubleDouble truncated_power_sum_avx2(const NodeData& nodes, double t, int s) {
  const std::size_t n = nodes.size();
  const double* xh = nodes.x_hi.data();
  const double* xl = nodes.x_lo.data();
  const double* ah = nodes.a_hi.data();
  const double* al = nodes.a_lo.data();

  const __m256d neg_t = _mm256_set1_pd(-t);
  Vdd acc{_mm256_setzero_pd(), _mm256_setzero_pd()};
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const Vdd a{_mm256_loadu_pd(ah + j), _mm256_loadu_pd(al + j)};
    Vdd term = a;
    if (s > 0) {
      Vdd d = v_two_sum(_mm256_loadu_pd(xh + j), neg_t);
      d = v_add(d, _mm256_loadu_pd(xl + j));
      Vdd p = d;
      for (int k = 1; k < s; ++k) p = v_mul(p, d);
      term = v_mul(p, a);
    }
    acc = v_add(acc, term);
  }

  alignas(32) double hi[4];
  alignas(32) double lo[4];
  _mm256_store_pd(hi, acc.hi);
  _mm256_store_pd(lo, acc.lo);
  DoubleDouble total;
  for (int lane = 0; lane < 4; ++lane) total = dd::add(total, DoubleDouble{hi[lane], lo[lane]});
  if (j < n) total = dd::add(total, truncated_power_sum_scalar(nodes.tail(j), t, s));
  return total;
}

__attribute__((target("avx2,fma")))
void chebyshev_sums_avx2(std::span<const double> x, std::span<const double> a,
                         std::span<double> out) {
  const std::size_t degrees = out.size();
  if (degrees == 0) return;
  const std::size_t n = x.size();
  const std::size_t blocked = n - n % 4;

  // Four lane accumulators per degree, compensated (Neumaier).
  std::vector<double> sum(4 * degrees, 0.0);
  std::vector<double> comp(4 * degrees, 0.0);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);

  for (std::size_t j = 0; j < blocked; j += 4) {
    const __m256d xv = _mm256_loadu_pd(x.data() + j);
    const __m256d av = _mm256_loadu_pd(a.data() + j);
    const __m256d two_x = _mm256_add_pd(xv, xv);
    __m256d prev = _mm256_set1_pd(1.0);
    __m256d cur = xv;
    for (std::size_t k = 0; k < degrees; ++k) {
      __m256d tk;
      if (k == 0) {
        tk = prev;
      } else if (k == 1) {
        tk = cur;
      } else {
        const __m256d next = _mm256_fmsub_pd(two_x, cur, prev);
        prev = cur;
        cur = next;
        tk = cur;
      }
      const __m256d v = _mm256_mul_pd(av, tk);
      const __m256d s = _mm256_loadu_pd(sum.data() + 4 * k);
      const __m256d c = _mm256_loadu_pd(comp.data() + 4 * k);
      const __m256d t = _mm256_add_pd(s, v);
      const __m256d abs_s = _mm256_andnot_pd(sign_mask, s);
      const __m256d abs_v = _mm256_andnot_pd(sign_mask, v);
      const __m256d s_big = _mm256_cmp_pd(abs_s, abs_v, _CMP_GE_OQ);
      const __m256d when_s = _mm256_add_pd(_mm256_sub_pd(s, t), v);
      const __m256d when_v = _mm256_add_pd(_mm256_sub_pd(v, t), s);
      _mm256_storeu_pd(comp.data() + 4 * k,
                       _mm256_add_pd(c, _mm256_blendv_pd(when_v, when_s, s_big)));
      _mm256_storeu_pd(sum.data() + 4 * k, t);
    }
  }

  std::vector<double> tail(degrees, 0.0);
  if (blocked < n) chebyshev_sums_scalar(x.subspan(blocked), a.subspan(blocked), tail);

  for (std::size_t k = 0; k < degrees; ++k) {
    double total = 0.0;
    double c = 0.0;
    auto add = [&](double v) {
      const double t = total + v;
      if (std::abs(total) >= std::abs(v)) {
        c += (total - t) + v;
      } else {
        c += (v - t) + total;
      }
      total = t;
    };
    for (int lane = 0; lane < 4; ++lane) {
      add(sum[4 * k + lane]);
      add(comp[4 * k + lane]);
    }
    add(tail[k]);
    out[k] = total + c;
  }
}

#else

DoubleDouble truncated_power_sum_avx2(const NodeData& nodes, double t, int s) {
  return truncated_power_sum_scalar(nodes, t, s);
}

void chebyshev_sums_avx2(std::span<const double> x, std::span<const double> a,
                         std::span<double> out) {
  chebyshev_sums_scalar(x, a, out);
}

#endif

}  // namespace bvquad::simd::detail

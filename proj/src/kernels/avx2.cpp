#include <immintrin.h>

#include <cmath>

#include "oilsent/kernels.hpp"

namespace oilsent::kernels {
namespace {

// Four adjacent windows per iteration, one per lane.
void rolling_zscore(const double* x, std::size_t n, std::size_t w, double* z,
                    std::uint8_t* degenerate) {
  if (w == 0 || n < w) return;
  const std::size_t count = n - w + 1;
  const __m256d wd = _mm256_set1_pd(static_cast<double>(w));
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const double* win = x + i;
    __m256d sum = zero;
    __m256d lo = _mm256_loadu_pd(win);
    __m256d hi = lo;
    for (std::size_t j = 0; j < w; ++j) {
      const __m256d v = _mm256_loadu_pd(win + j);
      sum = _mm256_add_pd(sum, v);
      lo = _mm256_min_pd(lo, v);
      hi = _mm256_max_pd(hi, v);
    }
    const __m256d mean = _mm256_div_pd(sum, wd);
    __m256d ss = zero;
    for (std::size_t j = 0; j < w; ++j) {
      const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(win + j), mean);
      ss = _mm256_add_pd(ss, _mm256_mul_pd(d, d));
    }
    const __m256d sd = _mm256_sqrt_pd(_mm256_div_pd(ss, wd));
    const __m256d flat = _mm256_or_pd(_mm256_cmp_pd(lo, hi, _CMP_EQ_OQ),
                                      _mm256_cmp_pd(sd, zero, _CMP_EQ_OQ));
    const __m256d last = _mm256_loadu_pd(win + w - 1);
    const __m256d zs = _mm256_div_pd(_mm256_sub_pd(last, mean), sd);
    _mm256_storeu_pd(z + i, _mm256_blendv_pd(zs, zero, flat));
    const int mask = _mm256_movemask_pd(flat);
    for (int k = 0; k < 4; ++k) degenerate[i + static_cast<std::size_t>(k)] = (mask >> k) & 1;
  }
  if (i < count) scalar().rolling_zscore(x + i, n - i, w, z + i, degenerate + i);
}

void simple_returns(const double* p, std::size_t n, double* r) {
  if (n < 2) return;
  const std::size_t count = n - 1;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d prev = _mm256_loadu_pd(p + i);
    const __m256d next = _mm256_loadu_pd(p + i + 1);
    _mm256_storeu_pd(r + i, _mm256_div_pd(_mm256_sub_pd(next, prev), prev));
  }
  if (i < count) scalar().simple_returns(p + i, n - i, r + i);
}

void discretize(const double* x, std::size_t n, double theta, std::int8_t* out) {
  const __m256d hi = _mm256_set1_pd(theta);
  const __m256d lo = _mm256_set1_pd(-theta);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    const int up = _mm256_movemask_pd(_mm256_cmp_pd(v, hi, _CMP_GT_OQ));
    const int down = _mm256_movemask_pd(_mm256_cmp_pd(v, lo, _CMP_LT_OQ));
    for (int k = 0; k < 4; ++k)
      out[i + static_cast<std::size_t>(k)] =
          static_cast<std::int8_t>(((up >> k) & 1) - ((down >> k) & 1));
  }
  if (i < n) scalar().discretize(x + i, n - i, theta, out + i);
}

}  // namespace

const KernelTable* avx2() {
  static const KernelTable table{"avx2", rolling_zscore, simple_returns, discretize};
  return __builtin_cpu_supports("avx2") ? &table : nullptr;
}

}  // namespace oilsent::kernels

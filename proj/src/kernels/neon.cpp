#include <arm_neon.h>

#include "oilsent/kernels.hpp"

namespace oilsent::kernels {
namespace {

// Two adjacent windows per iteration, one per lane.
void rolling_zscore(const double* x, std::size_t n, std::size_t w, double* z,
                    std::uint8_t* degenerate) {
  if (w == 0 || n < w) return;
  const std::size_t count = n - w + 1;
  const float64x2_t wd = vdupq_n_f64(static_cast<double>(w));
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const double* win = x + i;
    float64x2_t sum = zero;
    float64x2_t lo = vld1q_f64(win);
    float64x2_t hi = lo;
    for (std::size_t j = 0; j < w; ++j) {
      const float64x2_t v = vld1q_f64(win + j);
      sum = vaddq_f64(sum, v);
      lo = vminq_f64(lo, v);
      hi = vmaxq_f64(hi, v);
    }
    const float64x2_t mean = vdivq_f64(sum, wd);
    float64x2_t ss = zero;
    for (std::size_t j = 0; j < w; ++j) {
      const float64x2_t d = vsubq_f64(vld1q_f64(win + j), mean);
      ss = vaddq_f64(ss, vmulq_f64(d, d));
    }
    const float64x2_t sd = vsqrtq_f64(vdivq_f64(ss, wd));
    const uint64x2_t flat = vorrq_u64(vceqq_f64(lo, hi), vceqq_f64(sd, zero));
    const float64x2_t zs = vdivq_f64(vsubq_f64(vld1q_f64(win + w - 1), mean), sd);
    vst1q_f64(z + i, vbslq_f64(flat, zero, zs));
    degenerate[i] = vgetq_lane_u64(flat, 0) ? 1 : 0;
    degenerate[i + 1] = vgetq_lane_u64(flat, 1) ? 1 : 0;
  }
  if (i < count) scalar().rolling_zscore(x + i, n - i, w, z + i, degenerate + i);
}

void simple_returns(const double* p, std::size_t n, double* r) {
  if (n < 2) return;
  const std::size_t count = n - 1;
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const float64x2_t prev = vld1q_f64(p + i);
    const float64x2_t next = vld1q_f64(p + i + 1);
    vst1q_f64(r + i, vdivq_f64(vsubq_f64(next, prev), prev));
  }
  if (i < count) scalar().simple_returns(p + i, n - i, r + i);
}

void discretize(const double* x, std::size_t n, double theta, std::int8_t* out) {
  const float64x2_t hi = vdupq_n_f64(theta);
  const float64x2_t lo = vdupq_n_f64(-theta);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    const uint64x2_t up = vcgtq_f64(v, hi);
    const uint64x2_t down = vcltq_f64(v, lo);
    for (int k = 0; k < 2; ++k) {
      const int u = (k == 0 ? vgetq_lane_u64(up, 0) : vgetq_lane_u64(up, 1)) ? 1 : 0;
      const int d = (k == 0 ? vgetq_lane_u64(down, 0) : vgetq_lane_u64(down, 1)) ? 1 : 0;
      out[i + static_cast<std::size_t>(k)] = static_cast<std::int8_t>(u - d);
    }
  }
  if (i < n) scalar().discretize(x + i, n - i, theta, out + i);
}

}  // namespace

const KernelTable* neon() {
  static const KernelTable table{"neon", rolling_zscore, simple_returns, discretize};
  return &table;
}

}  // namespace oilsent::kernels

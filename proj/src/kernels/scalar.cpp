#include <cmath>

#include "oilsent/kernels.hpp"

namespace oilsent::kernels {
namespace {

void rolling_zscore(const double* x, std::size_t n, std::size_t w, double* z,
                    std::uint8_t* degenerate) {
  if (w == 0 || n < w) return;
  const double wd = static_cast<double>(w);
  for (std::size_t i = 0; i + w <= n; ++i) {
    const double* win = x + i;
    double sum = 0, lo = win[0], hi = win[0];
    for (std::size_t j = 0; j < w; ++j) {
      sum += win[j];
      lo = std::fmin(lo, win[j]);
      hi = std::fmax(hi, win[j]);
    }
    const double mean = sum / wd;
    double ss = 0;
    for (std::size_t j = 0; j < w; ++j) {
      const double d = win[j] - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / wd);
    const bool flat = lo == hi || sd == 0;
    z[i] = flat ? 0.0 : (win[w - 1] - mean) / sd;
    degenerate[i] = flat ? 1 : 0;
  }
}

void simple_returns(const double* p, std::size_t n, double* r) {
  for (std::size_t i = 0; i + 1 < n; ++i) r[i] = (p[i + 1] - p[i]) / p[i];
}

void discretize(const double* x, std::size_t n, double theta, std::int8_t* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] > theta ? 1 : x[i] < -theta ? -1 : 0;
}

}  // namespace

const KernelTable& scalar() {
  static const KernelTable table{"scalar", rolling_zscore, simple_returns, discretize};
  return table;
}

}  // namespace oilsent::kernels

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

// Numeric inner loops behind the signals module. Every variant performs the
// same IEEE operations in the same order per element, so results are
// bit-identical across variants.
namespace oilsent::kernels {

struct KernelTable {
  std::string_view name;
  /// z[i] for the window x[i..i+w-1], i in [0, n-w]. A window whose min
  /// equals its max (or whose deviation underflows to 0) gives z = 0 and
  /// degenerate = 1.
  void (*rolling_zscore)(const double* x, std::size_t n, std::size_t w, double* z,
                         std::uint8_t* degenerate);
  /// r[i] = (p[i+1] - p[i]) / p[i], i in [0, n-1).
  void (*simple_returns)(const double* p, std::size_t n, double* r);
  /// out[i] = +1 if x > theta, -1 if x < -theta, else 0.
  void (*discretize)(const double* x, std::size_t n, double theta, std::int8_t* out);
};

const KernelTable& scalar();
/// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* avx2();
const KernelTable* neon();

/// Variants usable on this machine, scalar first.
std::vector<const KernelTable*> available();

/// Best available variant, chosen once. OILSENT_SIMD=scalar|avx2|neon
/// forces a variant (falls back to scalar if unavailable).
const KernelTable& active();

}  // namespace oilsent::kernels

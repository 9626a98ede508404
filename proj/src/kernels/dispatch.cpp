#include <cstdlib>
#include <string_view>

#include "oilsent/kernels.hpp"

namespace oilsent::kernels {

#ifndef OILSENT_HAVE_AVX2
const KernelTable* avx2() { return nullptr; }
#endif
#ifndef OILSENT_HAVE_NEON
const KernelTable* neon() { return nullptr; }
#endif

std::vector<const KernelTable*> available() {
  std::vector<const KernelTable*> out{&scalar()};
  if (auto* t = avx2()) out.push_back(t);
  if (auto* t = neon()) out.push_back(t);
  return out;
}

const KernelTable& active() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("OILSENT_SIMD");
    const std::string_view want = env ? env : "";
    if (want == "scalar") return scalar();
    if (want == "avx2") return avx2() ? *avx2() : scalar();
    if (want == "neon") return neon() ? *neon() : scalar();
    if (auto* t = avx2()) return *t;
    if (auto* t = neon()) return *t;
    return scalar();
  }();
  return chosen;
}

}  // namespace oilsent::kernels

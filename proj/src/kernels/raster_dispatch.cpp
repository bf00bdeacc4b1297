#include <cstdlib>

#include "kernels/raster_variants.hpp"

namespace algoprice::kernels {

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
#if defined(ALGOPRICE_HAVE_AVX2_KERNELS)
  if (__builtin_cpu_supports("avx2")) out.push_back(&avx2_kernels());
#endif
#if defined(ALGOPRICE_HAVE_NEON_KERNELS)
  out.push_back(&neon_kernels());
#endif
  return out;
}

const KernelTable* find_kernels(const std::string& name) {
  for (const KernelTable* k : available_kernels()) {
    if (name == k->name) return k;
  }
  return nullptr;
}

const KernelTable& active_kernels() {
  static const KernelTable* chosen = [] {
    if (const char* env = std::getenv("ALGOPRICE_KERNELS")) {
      if (const KernelTable* k = find_kernels(env)) return k;
    }
    return available_kernels().back();
  }();
  return *chosen;
}

}  // namespace algoprice::kernels

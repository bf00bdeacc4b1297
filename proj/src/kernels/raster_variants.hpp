#pragma once

#include "algoprice/raster_kernels.hpp"

namespace algoprice::kernels {

#if defined(__x86_64__) || defined(__i386__)
#define ALGOPRICE_HAVE_AVX2_KERNELS 1
const KernelTable& avx2_kernels();
#endif

#if defined(__aarch64__)
#define ALGOPRICE_HAVE_NEON_KERNELS 1
const KernelTable& neon_kernels();
#endif

}  // namespace algoprice::kernels

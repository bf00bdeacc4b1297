#include "kernels/raster_variants.hpp"

#if defined(ALGOPRICE_HAVE_NEON_KERNELS)

#include <arm_neon.h>

namespace algoprice::kernels {

namespace {

// NEON has no gather, so the range tests reuse the scalar loops.
void range_any_strided_neon(const std::int32_t* prefix, int stride, int rows, int lo, int hi, std::uint8_t* out) {
  scalar_kernels().range_any_strided(prefix, stride, rows, lo, hi, out);
}

void range_any_indexed_neon(const std::int32_t* prefix, const std::int32_t* lo, const std::int32_t* hi, int n,
                            std::uint8_t* out) {
  int i = 0;
  const int32x4_t zero = vdupq_n_s32(0);
  for (; i + 4 <= n; i += 4) {
    const int32_t a[4] = {prefix[hi[i]], prefix[hi[i + 1]], prefix[hi[i + 2]], prefix[hi[i + 3]]};
    const int32_t b[4] = {prefix[lo[i]], prefix[lo[i + 1]], prefix[lo[i + 2]], prefix[lo[i + 3]]};
    const uint32x4_t gt = vcgtq_s32(vsubq_s32(vld1q_s32(a), vld1q_s32(b)), zero);
    out[i] = vgetq_lane_u32(gt, 0) & 1;
    out[i + 1] = vgetq_lane_u32(gt, 1) & 1;
    out[i + 2] = vgetq_lane_u32(gt, 2) & 1;
    out[i + 3] = vgetq_lane_u32(gt, 3) & 1;
  }
  for (; i < n; ++i) out[i] = prefix[hi[i]] - prefix[lo[i]] > 0;
}

void or_into_neon(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) vst1q_u8(dst + i, vorrq_u8(vld1q_u8(dst + i), vld1q_u8(src + i)));
  for (; i < n; ++i) dst[i] |= src[i];
}

void and_into_neon(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) vst1q_u8(dst + i, vandq_u8(vld1q_u8(dst + i), vld1q_u8(src + i)));
  for (; i < n; ++i) dst[i] &= src[i];
}

std::size_t count_set_neon(const std::uint8_t* src, std::size_t n) {
  std::size_t c = 0;
  std::size_t i = 0;
  const uint8x16_t one = vdupq_n_u8(1);
  for (; i + 16 <= n; i += 16) {
    const uint8x16_t nz = vandq_u8(vtstq_u8(vld1q_u8(src + i), vld1q_u8(src + i)), one);
    c += vaddlvq_u8(nz);
  }
  for (; i < n; ++i) c += src[i] != 0;
  return c;
}

std::size_t count_diff_neon(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t c = 0;
  std::size_t i = 0;
  const uint8x16_t one = vdupq_n_u8(1);
  for (; i + 16 <= n; i += 16) {
    const uint8x16_t ne = vandq_u8(vmvnq_u8(vceqq_u8(vld1q_u8(a + i), vld1q_u8(b + i))), one);
    c += vaddlvq_u8(ne);
  }
  for (; i < n; ++i) c += a[i] != b[i];
  return c;
}

}  // namespace

const KernelTable& neon_kernels() {
  static const KernelTable table{
      "neon",        range_any_strided_neon, range_any_indexed_neon, or_into_neon,
      and_into_neon, count_set_neon,         count_diff_neon,
  };
  return table;
}

}  // namespace algoprice::kernels

#endif

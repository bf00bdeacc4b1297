// Built with -mavx2; only reached after a runtime CPU check.
#include "kernels/raster_variants.hpp"

#if defined(ALGOPRICE_HAVE_AVX2_KERNELS)

#include <immintrin.h>

namespace algoprice::kernels {

namespace {

// Packs eight 0/1 dwords into eight bytes.
inline void store8(std::uint8_t* out, __m256i flags) {
  const __m128i lo = _mm256_castsi256_si128(flags);
  const __m128i hi = _mm256_extracti128_si256(flags, 1);
  const __m128i w = _mm_packs_epi32(lo, hi);
  _mm_storel_epi64(reinterpret_cast<__m128i*>(out), _mm_packus_epi16(w, w));
}

void range_any_strided_avx2(const std::int32_t* prefix, int stride, int rows, int lo, int hi, std::uint8_t* out) {
  const __m256i zero = _mm256_setzero_si256();
  const __m256i one = _mm256_set1_epi32(1);
  const __m256i step = _mm256_mullo_epi32(_mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7), _mm256_set1_epi32(stride));
  int r = 0;
  for (; r + 8 <= rows; r += 8) {
    const std::int32_t* base = prefix + static_cast<std::ptrdiff_t>(r) * stride;
    const __m256i a = _mm256_i32gather_epi32(reinterpret_cast<const int*>(base + hi), step, 4);
    const __m256i b = _mm256_i32gather_epi32(reinterpret_cast<const int*>(base + lo), step, 4);
    store8(out + r, _mm256_and_si256(_mm256_cmpgt_epi32(_mm256_sub_epi32(a, b), zero), one));
  }
  for (; r < rows; ++r) {
    const std::int32_t* row = prefix + static_cast<std::ptrdiff_t>(r) * stride;
    out[r] = row[hi] - row[lo] > 0;
  }
}

void range_any_indexed_avx2(const std::int32_t* prefix, const std::int32_t* lo, const std::int32_t* hi, int n,
                            std::uint8_t* out) {
  const __m256i zero = _mm256_setzero_si256();
  const __m256i one = _mm256_set1_epi32(1);
  int i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256i ih = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(hi + i));
    const __m256i il = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(lo + i));
    const __m256i a = _mm256_i32gather_epi32(reinterpret_cast<const int*>(prefix), ih, 4);
    const __m256i b = _mm256_i32gather_epi32(reinterpret_cast<const int*>(prefix), il, 4);
    store8(out + i, _mm256_and_si256(_mm256_cmpgt_epi32(_mm256_sub_epi32(a, b), zero), one));
  }
  for (; i < n; ++i) out[i] = prefix[hi[i]] - prefix[lo[i]] > 0;
}

void or_into_avx2(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    auto* d = reinterpret_cast<__m256i*>(dst + i);
    _mm256_storeu_si256(d, _mm256_or_si256(_mm256_loadu_si256(d),
                                           _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i))));
  }
  for (; i < n; ++i) dst[i] |= src[i];
}

void and_into_avx2(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    auto* d = reinterpret_cast<__m256i*>(dst + i);
    _mm256_storeu_si256(d, _mm256_and_si256(_mm256_loadu_si256(d),
                                            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i))));
  }
  for (; i < n; ++i) dst[i] &= src[i];
}

// Bytes are 0/1, so summing them with sad against zero counts set cells.
std::size_t count_set_avx2(const std::uint8_t* src, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  __m256i acc = zero;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
    const __m256i nz = _mm256_andnot_si256(_mm256_cmpeq_epi8(v, zero), _mm256_set1_epi8(1));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(nz, zero));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::size_t c = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) c += src[i] != 0;
  return c;
}

std::size_t count_diff_avx2(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  __m256i acc = zero;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const __m256i ne = _mm256_andnot_si256(_mm256_cmpeq_epi8(va, vb), _mm256_set1_epi8(1));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(ne, zero));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  std::size_t c = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) c += a[i] != b[i];
  return c;
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{
      "avx2",        range_any_strided_avx2, range_any_indexed_avx2, or_into_avx2,
      and_into_avx2, count_set_avx2,         count_diff_avx2,
  };
  return table;
}

}  // namespace algoprice::kernels

#endif

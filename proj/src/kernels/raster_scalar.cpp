#include "kernels/raster_variants.hpp"

namespace algoprice::kernels {

namespace {

void range_any_strided_scalar(const std::int32_t* prefix, int stride, int rows, int lo, int hi, std::uint8_t* out) {
  for (int r = 0; r < rows; ++r) {
    const std::int32_t* row = prefix + static_cast<std::ptrdiff_t>(r) * stride;
    out[r] = row[hi] - row[lo] > 0;
  }
}

void range_any_indexed_scalar(const std::int32_t* prefix, const std::int32_t* lo, const std::int32_t* hi, int n,
                              std::uint8_t* out) {
  for (int i = 0; i < n; ++i) out[i] = prefix[hi[i]] - prefix[lo[i]] > 0;
}

void or_into_scalar(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] |= src[i];
}

void and_into_scalar(std::uint8_t* dst, const std::uint8_t* src, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] &= src[i];
}

std::size_t count_set_scalar(const std::uint8_t* src, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += src[i] != 0;
  return c;
}

std::size_t count_diff_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += a[i] != b[i];
  return c;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar",         range_any_strided_scalar, range_any_indexed_scalar, or_into_scalar,
      and_into_scalar,  count_set_scalar,         count_diff_scalar,
  };
  return table;
}

void prefix_counts(const std::uint8_t* in, int n, std::int32_t* out) {
  out[0] = 0;
  for (int i = 0; i < n; ++i) out[i + 1] = out[i] + in[i];
}

}  // namespace algoprice::kernels

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

// Inner loops of the payoff-set rasterizer. Rasters hold one byte per cell
// with values 0 or 1; prefix arrays hold running counts of set cells.
namespace algoprice::kernels {

struct KernelTable {
  const char* name;

  // out[r] = prefix[r*stride + hi] - prefix[r*stride + lo] > 0, r in [0, rows)
  void (*range_any_strided)(const std::int32_t* prefix, int stride, int rows, int lo, int hi,
                            std::uint8_t* out);

  // out[i] = prefix[hi[i]] - prefix[lo[i]] > 0, i in [0, n)
  void (*range_any_indexed)(const std::int32_t* prefix, const std::int32_t* lo, const std::int32_t* hi, int n,
                            std::uint8_t* out);

  void (*or_into)(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
  void (*and_into)(std::uint8_t* dst, const std::uint8_t* src, std::size_t n);
  std::size_t (*count_set)(const std::uint8_t* src, std::size_t n);
  std::size_t (*count_diff)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
};

const KernelTable& scalar_kernels();

// Variants compiled into this build and supported by the running CPU,
// scalar first.
std::vector<const KernelTable*> available_kernels();

// Picked once: ALGOPRICE_KERNELS=<name> if set and available, else the
// widest available variant.
const KernelTable& active_kernels();

const KernelTable* find_kernels(const std::string& name);

// out[0] = 0, out[i+1] = out[i] + in[i]
void prefix_counts(const std::uint8_t* in, int n, std::int32_t* out);

}  // namespace algoprice::kernels

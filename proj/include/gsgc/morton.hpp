#ifndef GSGC_MORTON_HPP
#define GSGC_MORTON_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "gsgc/error.hpp"

namespace gsgc {

// Morton (Z-order) keys interleave the bits of three coordinates so that
// sorted keys enumerate octree cells in coded order. Bit j of x lands on
// key bit 3j+2, y on 3j+1, z on 3j. Depth is capped at 21 so a key fits
// in 64 bits.
inline constexpr int kMaxDepth = 21;

uint64_t morton_encode(uint32_t x, uint32_t y, uint32_t z, int depth);

std::array<uint32_t, 3> morton_decode(uint64_t key, int depth);

// output[i] = input[forward[i]]
struct Permutation {
  std::vector<uint64_t> forward;

  size_t size() const { return forward.size(); }
  Permutation inverse() const;
};

// Stable ascending sort: keys[forward[i]] <= keys[forward[i+1]], ties keep
// their original relative order.
Permutation sort_permutation(std::span<const uint64_t> keys);

// Reorders a table of fixed-stride rows.
template <class T>
std::vector<T> apply_permutation(std::span<const T> rows, size_t stride, const Permutation& perm) {
  if (stride == 0 || rows.size() != perm.size() * stride)
    fail(Err::LengthMismatch, "row count does not match permutation size");
  std::vector<T> out(rows.size());
  for (size_t i = 0; i < perm.size(); i++) {
    const T* src = rows.data() + perm.forward[i] * stride;
    T* dst = out.data() + i * stride;
    for (size_t k = 0; k < stride; k++)
      dst[k] = src[k];
  }
  return out;
}

}  // namespace gsgc

#endif

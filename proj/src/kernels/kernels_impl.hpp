#ifndef GSGC_KERNELS_IMPL_HPP
#define GSGC_KERNELS_IMPL_HPP

// Internal: per-implementation entry points behind gsgc/kernels.hpp.

#include <cstddef>
#include <cstdint>

namespace gsgc::kernels {

// Bit spreading for one 21-bit axis value: bit j lands on bit 3j.
inline uint64_t spread3(uint32_t v) {
  uint64_t x = v & 0x1FFFFFu;
  x = (x | (x << 32)) & 0x001F00000000FFFFull;
  x = (x | (x << 16)) & 0x001F0000FF0000FFull;
  x = (x | (x << 8)) & 0x100F00F00F00F00Full;
  x = (x | (x << 4)) & 0x10C30C30C30C30C3ull;
  x = (x | (x << 2)) & 0x1249249249249249ull;
  return x;
}

// Inverse of spread3: collects every third bit.
inline uint32_t collect3(uint64_t x) {
  x &= 0x1249249249249249ull;
  x = (x | (x >> 2)) & 0x10C30C30C30C30C3ull;
  x = (x | (x >> 4)) & 0x100F00F00F00F00Full;
  x = (x | (x >> 8)) & 0x001F0000FF0000FFull;
  x = (x | (x >> 16)) & 0x001F00000000FFFFull;
  x = (x | (x >> 32)) & 0x1FFFFFull;
  return static_cast<uint32_t>(x);
}

namespace scalar {
void morton_encode_batch(const uint32_t* coords, size_t n, uint64_t* keys);
void morton_decode_batch(const uint64_t* keys, size_t n, uint32_t* coords);
size_t quantize_batch(const double* positions, size_t n, const double origin[3],
                      double step, int depth, uint32_t* coords);
void dequantize_batch(const uint32_t* coords, size_t n, const double origin[3],
                      double step, double* positions);
}  // namespace scalar

#ifdef GSGC_HAVE_AVX2
namespace avx2 {
void morton_encode_batch(const uint32_t* coords, size_t n, uint64_t* keys);
void morton_decode_batch(const uint64_t* keys, size_t n, uint32_t* coords);
size_t quantize_batch(const double* positions, size_t n, const double origin[3],
                      double step, int depth, uint32_t* coords);
void dequantize_batch(const uint32_t* coords, size_t n, const double origin[3],
                      double step, double* positions);
}  // namespace avx2
#endif

}  // namespace gsgc::kernels

#endif

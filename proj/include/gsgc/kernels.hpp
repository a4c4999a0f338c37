#ifndef GSGC_KERNELS_HPP
#define GSGC_KERNELS_HPP

#include <cstddef>
#include <cstdint>

namespace gsgc::kernels {

// Data-parallel inner loops of the codec. Every operation has a scalar
// reference implementation and may have SIMD variants; all variants are
// bit-identical, so the dispatch choice never affects coded output.
enum class Impl {
  Scalar,
  Avx2,
};

const char* impl_name(Impl impl);

// Best implementation this CPU supports.
Impl best_supported();

// Currently selected implementation. Defaults to best_supported(), or to
// the value of the GSGC_KERNELS environment variable ("scalar", "avx2")
// when set.
Impl active();

// Selects an implementation; throws InvalidArgument if unsupported here.
void set_active(Impl impl);

// ---- batch operations -----------------------------------------------------
// coords/positions are interleaved xyz triplets; n counts points.
// Callers guarantee coords < 2^21 per axis and keys < 2^63.

void morton_encode_batch(const uint32_t* coords, size_t n, uint64_t* keys);

void morton_decode_batch(const uint64_t* keys, size_t n, uint32_t* coords);

// coords[i] = clamp(round_half_away_from_zero((p[i] - origin)/step), 0, 2^depth - 1).
// Returns n when every point is inside the grid, else the index of the
// first point whose scaled coordinate falls outside [-0.5, 2^depth).
size_t quantize_batch(const double* positions, size_t n, const double origin[3],
                      double step, int depth, uint32_t* coords);

// positions[i] = origin + coords[i] * step
void dequantize_batch(const uint32_t* coords, size_t n, const double origin[3],
                      double step, double* positions);

}  // namespace gsgc::kernels

#endif

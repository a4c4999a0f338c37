#ifndef GSGC_OCTREE_HPP
#define GSGC_OCTREE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "gsgc/voxel.hpp"

namespace gsgc {

// Breadth-first occupancy description of a voxelized cloud. levels[l]
// holds the 8-bit child masks of the level-l nodes in ascending
// Morton-prefix order; level 0 is the root alone. Every mask is nonzero.
// dup_counts[j] is the extra-point count (multiplicity - 1) of the j-th
// unique voxel in Morton order.
struct OccupancyStream {
  std::vector<std::vector<uint8_t>> levels;
  std::vector<uint64_t> dup_counts;
};

// Optional coder instrumentation; encoder and decoder context tables must
// agree bit for bit after a round trip.
struct CoderTrace {
  uint32_t context_checksum = 0;
  uint64_t coded_masks = 0;
};

OccupancyStream build_occupancy(const VoxelizedCloud& v);

// Entropy-codes the occupancy stream: mask bits child 0..7 through 64
// adaptive contexts indexed by 8*child + popcount(already-coded set bits),
// then per-leaf duplicate counts in unary under one dedicated context.
std::vector<uint8_t> encode_geometry(const VoxelizedCloud& v, CoderTrace* trace = nullptr);

// Inverse of encode_geometry. Returns coords sorted by Morton key with
// duplicates adjacent; total row count equals point_count.
VoxelizedCloud decode_geometry(std::span<const uint8_t> payload, const GridParams& params,
                               uint64_t point_count, CoderTrace* trace = nullptr);

}  // namespace gsgc

#endif

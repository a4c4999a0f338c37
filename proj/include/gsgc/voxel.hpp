#ifndef GSGC_VOXEL_HPP
#define GSGC_VOXEL_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "gsgc/types.hpp"

namespace gsgc {

enum class DupPolicy : uint8_t {
  Keep,
  Dedup,
};

// Cubic integer grid: side 2^depth, one step for all axes.
struct GridParams {
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  double step = 1.0;
  int depth = 1;

  uint32_t max_coord() const { return (uint32_t(1) << depth) - 1; }

  bool operator==(const GridParams&) const = default;
};

struct VoxelizedCloud {
  std::vector<uint32_t> coords;  // 3*N, xyz interleaved, each < 2^depth
  GridParams params;
  DupPolicy dup_policy = DupPolicy::Keep;

  size_t size() const { return coords.size() / 3; }
};

// Derives grid parameters from a cloud's bounding box. Exactly one of
// depth/step may be given; with both empty the grid is chosen
// automatically (integer-valued inputs get the identity grid, everything
// else a depth-16 fit).
GridParams fit_grid(const GaussianCloud& cloud, std::optional<int> depth,
                    std::optional<double> step);

// coords = clamp(round_half_away_from_zero((p - origin)/step), 0, 2^depth - 1),
// row order unchanged. A point whose scaled offset falls outside
// [-0.5, 2^depth) raises OutOfRange.
VoxelizedCloud quantize(const GaussianCloud& cloud, const GridParams& params,
                        DupPolicy dup_policy = DupPolicy::Keep);

// p = origin + coord * step per axis.
std::vector<double> dequantize(const VoxelizedCloud& v);

// True when positions are already integers on a step-1 grid anchored at an
// integral origin, which makes quantize/dequantize the identity.
bool integer_grid_preserving(const GaussianCloud& cloud, const GridParams& params);

}  // namespace gsgc

#endif

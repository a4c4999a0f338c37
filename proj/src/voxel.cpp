#include "gsgc/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gsgc/kernels.hpp"
#include "gsgc/morton.hpp"

namespace gsgc {

namespace {

struct Bounds {
  std::array<double, 3> lo;
  std::array<double, 3> hi;
};

Bounds bounds_of(const GaussianCloud& cloud) {
  Bounds b{{cloud.positions[0], cloud.positions[1], cloud.positions[2]},
           {cloud.positions[0], cloud.positions[1], cloud.positions[2]}};
  const size_t n = cloud.size();
  for (size_t i = 0; i < n; i++) {
    for (int a = 0; a < 3; a++) {
      double v = cloud.positions[3 * i + a];
      b.lo[a] = std::min(b.lo[a], v);
      b.hi[a] = std::max(b.hi[a], v);
    }
  }
  return b;
}

double max_extent(const Bounds& b) {
  double e = 0.0;
  for (int a = 0; a < 3; a++)
    e = std::max(e, b.hi[a] - b.lo[a]);
  return e;
}

int depth_for_extent(double extent, double step) {
  double cells = extent / step;
  for (int d = 1; d <= kMaxDepth; d++) {
    if (cells < std::ldexp(1.0, d))
      return d;
  }
  fail(Err::DepthOverflow, "extent " + std::to_string(extent) + " at step "
       + std::to_string(step) + " needs depth > 21");
}

bool all_integral(const GaussianCloud& cloud) {
  for (double v : cloud.positions)
    if (v != std::floor(v))
      return false;
  return true;
}

constexpr int kAutoDepth = 16;

}  // namespace

GridParams fit_grid(const GaussianCloud& cloud, std::optional<int> depth,
                    std::optional<double> step) {
  if (cloud.size() == 0)
    fail(Err::EmptyCloud, "cannot fit a grid to an empty cloud");
  if (depth && step)
    fail(Err::InvalidArgument, "give depth or step, not both");
  if (depth && (*depth < 1 || *depth > kMaxDepth))
    fail(Err::DepthOutOfRange, "depth must be in [1, 21], got " + std::to_string(*depth));
  if (step && !(*step > 0.0))
    fail(Err::InvalidArgument, "step must be positive");

  const Bounds b = bounds_of(cloud);
  const double extent = max_extent(b);

  GridParams p;
  p.origin = b.lo;
  if (step) {
    p.step = *step;
    p.depth = depth_for_extent(extent, *step);
  } else if (depth) {
    p.depth = *depth;
    p.step = extent > 0.0 ? extent / (std::ldexp(1.0, *depth) - 1.0) : 1.0;
  } else if (all_integral(cloud) && extent < std::ldexp(1.0, kMaxDepth)) {
    // identity grid: integer inputs survive the round trip bit-exactly
    p.step = 1.0;
    p.depth = depth_for_extent(extent, 1.0);
  } else {
    p.depth = kAutoDepth;
    p.step = extent > 0.0 ? extent / (std::ldexp(1.0, kAutoDepth) - 1.0) : 1.0;
  }
  return p;
}

VoxelizedCloud quantize(const GaussianCloud& cloud, const GridParams& params,
                        DupPolicy dup_policy) {
  VoxelizedCloud v;
  v.params = params;
  v.dup_policy = dup_policy;
  v.coords.resize(cloud.positions.size());
  size_t ok = kernels::quantize_batch(cloud.positions.data(), cloud.size(),
                                      params.origin.data(), params.step, params.depth,
                                      v.coords.data());
  if (ok != cloud.size())
    fail(Err::OutOfRange, "point " + std::to_string(ok) + " falls outside the grid");
  return v;
}

std::vector<double> dequantize(const VoxelizedCloud& v) {
  std::vector<double> out(v.coords.size());
  kernels::dequantize_batch(v.coords.data(), v.size(), v.params.origin.data(),
                            v.params.step, out.data());
  return out;
}

bool integer_grid_preserving(const GaussianCloud& cloud, const GridParams& params) {
  if (params.step != 1.0)
    return false;
  for (double o : params.origin)
    if (o != std::floor(o))
      return false;
  return all_integral(cloud);
}

}  // namespace gsgc

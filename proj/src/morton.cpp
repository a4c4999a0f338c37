#include "gsgc/morton.hpp"

#include <algorithm>
#include <numeric>

#include "kernels/kernels_impl.hpp"

namespace gsgc {

namespace {

void check_depth(int depth) {
  if (depth < 1 || depth > kMaxDepth)
    fail(Err::DepthOutOfRange, "depth must be in [1, 21], got " + std::to_string(depth));
}

}  // namespace

uint64_t morton_encode(uint32_t x, uint32_t y, uint32_t z, int depth) {
  check_depth(depth);
  const uint32_t limit = uint32_t(1) << depth;
  if (x >= limit || y >= limit || z >= limit)
    fail(Err::CoordinateOutOfRange, "coordinate does not fit depth-" + std::to_string(depth) + " grid");
  using kernels::spread3;
  return (spread3(x) << 2) | (spread3(y) << 1) | spread3(z);
}

std::array<uint32_t, 3> morton_decode(uint64_t key, int depth) {
  check_depth(depth);
  if ((key >> (3 * depth)) != 0)
    fail(Err::KeyOutOfRange, "key does not fit depth-" + std::to_string(depth) + " grid");
  using kernels::collect3;
  return {collect3(key >> 2), collect3(key >> 1), collect3(key)};
}

Permutation Permutation::inverse() const {
  Permutation inv;
  inv.forward.resize(forward.size());
  for (size_t i = 0; i < forward.size(); i++)
    inv.forward[forward[i]] = i;
  return inv;
}

Permutation sort_permutation(std::span<const uint64_t> keys) {
  Permutation perm;
  perm.forward.resize(keys.size());
  std::iota(perm.forward.begin(), perm.forward.end(), uint64_t(0));
  std::stable_sort(perm.forward.begin(), perm.forward.end(),
                   [&](uint64_t a, uint64_t b) { return keys[a] < keys[b]; });
  return perm;
}

}  // namespace gsgc

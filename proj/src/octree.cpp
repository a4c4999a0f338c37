#include "gsgc/octree.hpp"

#include <algorithm>
#include <array>
#include <bit>

#include "gsgc/crc32.hpp"
#include "gsgc/kernels.hpp"
#include "gsgc/range_coder.hpp"

namespace gsgc {

namespace {

struct Contexts {
  std::array<BinProb, 64> mask;
  BinProb dup;

  uint32_t checksum() const {
    std::vector<uint8_t> bytes;
    bytes.reserve(2 * 65);
    auto push = [&](uint16_t p) {
      bytes.push_back(static_cast<uint8_t>(p & 0xFF));
      bytes.push_back(static_cast<uint8_t>(p >> 8));
    };
    for (const auto& c : mask)
      push(c.p);
    push(dup.p);
    return crc32(bytes);
  }
};

std::vector<uint64_t> sorted_keys(const VoxelizedCloud& v) {
  std::vector<uint64_t> keys(v.size());
  kernels::morton_encode_batch(v.coords.data(), v.size(), keys.data());
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace

OccupancyStream build_occupancy(const VoxelizedCloud& v) {
  if (v.size() == 0)
    fail(Err::EmptyCloud, "cannot build occupancy of an empty cloud");

  const std::vector<uint64_t> keys = sorted_keys(v);

  OccupancyStream s;
  s.dup_counts.reserve(keys.size());
  std::vector<uint64_t> unique;
  unique.reserve(keys.size());
  for (size_t i = 0; i < keys.size();) {
    size_t j = i;
    while (j < keys.size() && keys[j] == keys[i])
      j++;
    unique.push_back(keys[i]);
    s.dup_counts.push_back(j - i - 1);
    i = j;
  }

  const int depth = v.params.depth;
  s.levels.resize(depth);
  for (int l = 0; l < depth; l++) {
    const int prefix_shift = 3 * (depth - l);
    const int child_shift = prefix_shift - 3;
    auto& masks = s.levels[l];
    uint64_t cur = unique[0] >> prefix_shift;
    uint8_t mask = 0;
    for (uint64_t k : unique) {
      const uint64_t pre = k >> prefix_shift;
      if (pre != cur) {
        masks.push_back(mask);
        mask = 0;
        cur = pre;
      }
      mask |= uint8_t(1) << ((k >> child_shift) & 7);
    }
    masks.push_back(mask);
  }
  return s;
}

std::vector<uint8_t> encode_geometry(const VoxelizedCloud& v, CoderTrace* trace) {
  const OccupancyStream s = build_occupancy(v);

  RangeEncoder enc;
  Contexts ctx;
  uint64_t coded_masks = 0;
  for (const auto& level : s.levels) {
    for (uint8_t mask : level) {
      int ones = 0;
      for (int c = 0; c < 8; c++) {
        const int bit = (mask >> c) & 1;
        enc.encode(ctx.mask[8 * c + ones], bit);
        ones += bit;
      }
      coded_masks++;
    }
  }
  for (uint64_t k : s.dup_counts) {
    for (uint64_t j = 0; j < k; j++)
      enc.encode(ctx.dup, 1);
    enc.encode(ctx.dup, 0);
  }

  if (trace) {
    trace->context_checksum = ctx.checksum();
    trace->coded_masks = coded_masks;
  }
  return enc.finish();
}

VoxelizedCloud decode_geometry(std::span<const uint8_t> payload, const GridParams& params,
                               uint64_t point_count, CoderTrace* trace) {
  if (point_count == 0)
    fail(Err::EmptyCloud, "frame declares zero points");

  Contexts ctx;
  uint64_t coded_masks = 0;
  std::vector<uint64_t> nodes{0};
  std::vector<uint64_t> multiplicity;

  try {
    RangeDecoder dec(payload);
    std::vector<uint64_t> next;
    for (int l = 0; l < params.depth; l++) {
      next.clear();
      for (uint64_t prefix : nodes) {
        uint8_t mask = 0;
        int ones = 0;
        for (int c = 0; c < 8; c++) {
          if (dec.decode(ctx.mask[8 * c + ones])) {
            mask |= uint8_t(1) << c;
            ones++;
          }
        }
        if (mask == 0)
          fail(Err::CorruptPayload, "decoded an empty occupancy mask");
        for (int c = 0; c < 8; c++)
          if ((mask >> c) & 1)
            next.push_back((prefix << 3) | uint64_t(c));
        coded_masks++;
      }
      if (next.size() > point_count)
        fail(Err::CorruptPayload, "more occupied voxels than points");
      nodes.swap(next);
    }

    // per-leaf duplicate counts, unary
    multiplicity.resize(nodes.size());
    uint64_t total = 0;
    for (size_t j = 0; j < nodes.size(); j++) {
      uint64_t k = 1;
      while (dec.decode(ctx.dup)) {
        k++;
        if (total + k > point_count)
          fail(Err::CorruptPayload, "duplicate counts exceed the declared point count");
      }
      multiplicity[j] = k;
      total += k;
    }
    if (total != point_count)
      fail(Err::CorruptPayload, "decoded point count mismatch");
  } catch (const CodecError& e) {
    if (e.code() == Err::InputExhausted)
      fail(Err::CorruptPayload, "geometry payload is truncated");
    throw;
  }

  std::vector<uint32_t> unique_coords(3 * nodes.size());
  kernels::morton_decode_batch(nodes.data(), nodes.size(), unique_coords.data());

  VoxelizedCloud v;
  v.params = params;
  v.coords.reserve(3 * point_count);
  for (size_t j = 0; j < nodes.size(); j++) {
    for (uint64_t r = 0; r < multiplicity[j]; r++) {
      v.coords.push_back(unique_coords[3 * j]);
      v.coords.push_back(unique_coords[3 * j + 1]);
      v.coords.push_back(unique_coords[3 * j + 2]);
    }
  }

  if (trace) {
    trace->context_checksum = ctx.checksum();
    trace->coded_masks = coded_masks;
  }
  return v;
}

}  // namespace gsgc

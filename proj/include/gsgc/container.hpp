#ifndef GSGC_CONTAINER_HPP
#define GSGC_CONTAINER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "gsgc/types.hpp"
#include "gsgc/voxel.hpp"

namespace gsgc {

// .gsgc on-disk frame. All multi-byte fields little-endian; the full
// layout is documented bit-exactly in docs/format.md.
inline constexpr uint8_t kFormatVersion = 1;
inline constexpr uint8_t kFlagIntegerGrid = 0x01;
inline constexpr uint8_t kFlagDuplicates = 0x02;

struct FrameHeader {
  uint8_t flags = 0;
  uint8_t depth = 1;
  uint64_t point_count = 0;
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  double step = 1.0;
  AttributeSchema schema;

  GridParams grid() const { return GridParams{origin, step, depth}; }

  bool operator==(const FrameHeader&) const = default;
};

struct CodedFrame {
  FrameHeader header;
  std::vector<uint8_t> geometry;    // entropy-coded occupancy payload
  std::vector<uint8_t> attributes;  // raw rows, Morton order

  bool operator==(const CodedFrame&) const = default;
};

// Header bytes before the schema channel list.
inline constexpr size_t kFixedHeaderBytes = 50;

size_t header_bytes(const FrameHeader& h);

std::vector<uint8_t> write_frame(const CodedFrame& frame);

CodedFrame read_frame(std::span<const uint8_t> bytes);

}  // namespace gsgc

#endif

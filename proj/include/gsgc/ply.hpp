#ifndef GSGC_PLY_HPP
#define GSGC_PLY_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "gsgc/types.hpp"

namespace gsgc {

enum class PlyFormat : uint8_t {
  Ascii,
  BinaryLE,
};

struct PlyParseResult {
  GaussianCloud cloud;
  size_t trailing_bytes = 0;  // bytes after the declared vertex data, not consumed
};

// Accepts ascii 1.0 and binary_little_endian 1.0 point clouds whose vertex
// element carries at least x, y, z. Every non-position property lands in
// the schema in header order, values preserved verbatim at their declared
// dtype. List properties on the vertex element are rejected.
PlyParseResult parse_ply_detail(std::span<const uint8_t> bytes);

GaussianCloud parse_ply(std::span<const uint8_t> bytes);

// Inverse of parse_ply: positions first (at cloud.position_dtype), then
// schema channels in order. parse_ply(write_ply(c)) == c bit-exactly.
std::vector<uint8_t> write_ply(const GaussianCloud& cloud, PlyFormat format = PlyFormat::BinaryLE);

}  // namespace gsgc

#endif

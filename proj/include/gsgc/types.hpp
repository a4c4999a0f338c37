#ifndef GSGC_TYPES_HPP
#define GSGC_TYPES_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "gsgc/error.hpp"

namespace gsgc {

// Attribute element types. The numeric values double as the on-disk dtype
// codes in the frame header.
enum class DType : uint8_t {
  F32 = 0,
  F64 = 1,
  U8 = 2,
  I32 = 3,
};

size_t dtype_size(DType t);
const char* dtype_ply_name(DType t);

struct Channel {
  std::string name;
  DType dtype = DType::F32;

  bool operator==(const Channel&) const = default;
};

// Ordered non-position channels of a point cloud. Position channels x/y/z
// are held separately and never appear here.
struct AttributeSchema {
  std::vector<Channel> channels;

  size_t row_bytes() const {
    size_t n = 0;
    for (const auto& c : channels)
      n += dtype_size(c.dtype);
    return n;
  }

  // Channel names must be unique, non-empty, printable ASCII.
  void validate() const;

  bool operator==(const AttributeSchema&) const = default;
};

// A Gaussian-splat point cloud: N positions plus N raw attribute rows laid
// out per the schema (little-endian, row-major).
struct GaussianCloud {
  std::vector<double> positions;  // 3*N, xyz interleaved
  DType position_dtype = DType::F32;
  AttributeSchema schema;
  std::vector<uint8_t> attributes;  // N * schema.row_bytes()

  size_t size() const { return positions.size() / 3; }
  size_t row_bytes() const { return schema.row_bytes(); }

  const uint8_t* row(size_t i) const { return attributes.data() + i * row_bytes(); }

  // Checks the row-count and finiteness invariants.
  void validate() const;

  bool operator==(const GaussianCloud&) const = default;
};

}  // namespace gsgc

#endif

#include "gsgc/types.hpp"

#include <cmath>
#include <unordered_set>

namespace gsgc {

const char* err_name(Err e) {
  switch (e) {
    case Err::MalformedHeader: return "malformed header";
    case Err::MissingPosition: return "missing position property";
    case Err::TruncatedPayload: return "truncated payload";
    case Err::NonFiniteCoordinate: return "non-finite coordinate";
    case Err::MalformedValue: return "malformed value";
    case Err::CoordinateOutOfRange: return "coordinate out of range";
    case Err::DepthOutOfRange: return "depth out of range";
    case Err::KeyOutOfRange: return "key out of range";
    case Err::LengthMismatch: return "length mismatch";
    case Err::EmptyCloud: return "empty cloud";
    case Err::DepthOverflow: return "depth overflow";
    case Err::OutOfRange: return "point out of grid range";
    case Err::InputExhausted: return "input exhausted";
    case Err::CorruptPayload: return "corrupt payload";
    case Err::BadMagic: return "bad magic";
    case Err::UnsupportedVersion: return "unsupported version";
    case Err::ChecksumMismatch: return "checksum mismatch";
    case Err::NonUniqueVoxels: return "non-unique voxels";
    case Err::InvalidArgument: return "invalid argument";
    case Err::IoError: return "i/o error";
  }
  return "unknown error";
}

size_t dtype_size(DType t) {
  switch (t) {
    case DType::F32: return 4;
    case DType::F64: return 8;
    case DType::U8: return 1;
    case DType::I32: return 4;
  }
  fail(Err::InvalidArgument, "unknown dtype code");
}

const char* dtype_ply_name(DType t) {
  switch (t) {
    case DType::F32: return "float";
    case DType::F64: return "double";
    case DType::U8: return "uchar";
    case DType::I32: return "int";
  }
  fail(Err::InvalidArgument, "unknown dtype code");
}

void AttributeSchema::validate() const {
  std::unordered_set<std::string> seen;
  for (const auto& c : channels) {
    if (c.name.empty())
      fail(Err::InvalidArgument, "empty channel name");
    for (char ch : c.name)
      if (static_cast<unsigned char>(ch) < 0x21 || static_cast<unsigned char>(ch) > 0x7e)
        fail(Err::InvalidArgument, "channel name not printable ASCII: " + c.name);
    if (!seen.insert(c.name).second)
      fail(Err::InvalidArgument, "duplicate channel name: " + c.name);
    dtype_size(c.dtype);
  }
}

void GaussianCloud::validate() const {
  if (positions.size() % 3 != 0)
    fail(Err::InvalidArgument, "positions not a multiple of 3");
  schema.validate();
  if (attributes.size() != size() * row_bytes())
    fail(Err::LengthMismatch, "attribute bytes do not match point count");
  for (double v : positions)
    if (!std::isfinite(v))
      fail(Err::NonFiniteCoordinate, "position component is NaN or infinite");
}

}  // namespace gsgc

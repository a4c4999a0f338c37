#ifndef GSGC_ERROR_HPP
#define GSGC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace gsgc {

enum class Err {
  // ply
  MalformedHeader,
  MissingPosition,
  TruncatedPayload,
  NonFiniteCoordinate,
  MalformedValue,
  // morton
  CoordinateOutOfRange,
  DepthOutOfRange,
  KeyOutOfRange,
  LengthMismatch,
  // voxel grid
  EmptyCloud,
  DepthOverflow,
  OutOfRange,
  // range coder / octree
  InputExhausted,
  CorruptPayload,
  // container
  BadMagic,
  UnsupportedVersion,
  ChecksumMismatch,
  // pipeline
  NonUniqueVoxels,
  InvalidArgument,
  IoError,
};

const char* err_name(Err e);

class CodecError : public std::runtime_error {
public:
  CodecError(Err code, const std::string& what)
    : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}

  Err code() const { return code_; }

private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) {
  throw CodecError(code, what);
}

}  // namespace gsgc

#endif

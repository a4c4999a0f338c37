#ifndef GSGC_PIPELINE_HPP
#define GSGC_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "gsgc/container.hpp"
#include "gsgc/types.hpp"
#include "gsgc/voxel.hpp"

namespace gsgc {

struct EncodeConfig {
  // exactly one of depth/step, or neither for automatic grid selection
  std::optional<int> depth;
  std::optional<double> step;
  DupPolicy dup_policy = DupPolicy::Keep;

  // Test-harness only: skips the attribute reordering that keeps rows
  // bound to their points across the codec, to demonstrate the mismatch
  // it prevents. Deliberately not reachable from the CLI.
  bool ablate_skip_attribute_reorder = false;
};

// quantize -> Morton sort -> permute attribute rows -> entropy-code geometry
CodedFrame encode_cloud(const GaussianCloud& cloud, const EncodeConfig& cfg);

// Decoded geometry arrives in Morton order; stored attribute row i belongs
// to decoded point i by construction.
GaussianCloud decode_cloud(const CodedFrame& frame);

struct AlignmentReport {
  bool passed = false;
  uint64_t checked = 0;
  std::optional<uint64_t> mismatch_index;  // decoded row of the first mismatch
  std::string message;
};

// Asserts every decoded point carries the attribute row of the source point
// on the same voxel. Requires unique voxels (NonUniqueVoxels otherwise);
// clouds with duplicates are handled by multiset_lossless below.
AlignmentReport verify_alignment(const GaussianCloud& original, const GaussianCloud& decoded,
                                 const GridParams& params);

// Multiset equality of (voxel, attribute row) pairs under params; the
// general lossless check, valid with duplicates.
bool multiset_lossless(const GaussianCloud& original, const GaussianCloud& decoded,
                       const GridParams& params);

// What a Dedup encode is expected to preserve: the first source row of
// every voxel, in source order.
GaussianCloud dedup_reference(const GaussianCloud& cloud, const GridParams& params);

}  // namespace gsgc

#endif

#include "gsgc/pipeline.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_map>

#include "gsgc/kernels.hpp"
#include "gsgc/morton.hpp"
#include "gsgc/octree.hpp"

namespace gsgc {

namespace {

std::vector<uint64_t> morton_keys(const VoxelizedCloud& v) {
  std::vector<uint64_t> keys(v.size());
  kernels::morton_encode_batch(v.coords.data(), v.size(), keys.data());
  return keys;
}

// (key, row bytes) pairs sorted lexicographically; exact multiset identity
std::vector<std::pair<uint64_t, std::string_view>> tagged_rows(const GaussianCloud& c,
                                                               const std::vector<uint64_t>& keys) {
  std::vector<std::pair<uint64_t, std::string_view>> rows(c.size());
  const size_t rb = c.row_bytes();
  for (size_t i = 0; i < c.size(); i++) {
    rows[i] = {keys[i],
               std::string_view(reinterpret_cast<const char*>(c.attributes.data()) + i * rb, rb)};
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace

CodedFrame encode_cloud(const GaussianCloud& cloud, const EncodeConfig& cfg) {
  cloud.validate();
  if (cloud.size() == 0)
    fail(Err::EmptyCloud, "nothing to encode");

  const GridParams params = fit_grid(cloud, cfg.depth, cfg.step);
  VoxelizedCloud vox = quantize(cloud, params, cfg.dup_policy);

  const std::vector<uint64_t> keys = morton_keys(vox);
  const Permutation perm = sort_permutation(keys);

  vox.coords = apply_permutation(std::span<const uint32_t>(vox.coords), 3, perm);
  std::vector<uint8_t> attrs = cloud.row_bytes() == 0 || cfg.ablate_skip_attribute_reorder
    ? cloud.attributes
    : apply_permutation(std::span<const uint8_t>(cloud.attributes), cloud.row_bytes(), perm);

  if (cfg.dup_policy == DupPolicy::Dedup) {
    // keep the first source row of every voxel (stable sort order)
    const size_t rb = cloud.row_bytes();
    std::vector<uint32_t> coords;
    std::vector<uint8_t> rows;
    coords.reserve(vox.coords.size());
    rows.reserve(attrs.size());
    uint64_t prev_key = 0;
    for (size_t i = 0; i < vox.size(); i++) {
      const uint64_t k = keys[perm.forward[i]];
      if (i > 0 && k == prev_key)
        continue;
      prev_key = k;
      coords.insert(coords.end(), vox.coords.begin() + 3 * i, vox.coords.begin() + 3 * i + 3);
      rows.insert(rows.end(), attrs.begin() + i * rb, attrs.begin() + (i + 1) * rb);
    }
    vox.coords = std::move(coords);
    attrs = std::move(rows);
  }

  CoderTrace trace;
  std::vector<uint8_t> geometry = encode_geometry(vox, &trace);

  CodedFrame frame;
  frame.header.depth = static_cast<uint8_t>(params.depth);
  frame.header.point_count = vox.size();
  frame.header.origin = params.origin;
  frame.header.step = params.step;
  frame.header.schema = cloud.schema;
  frame.header.flags = 0;
  if (integer_grid_preserving(cloud, params))
    frame.header.flags |= kFlagIntegerGrid;
  for (size_t i = 1; i < vox.size(); i++) {
    if (std::memcmp(&vox.coords[3 * i], &vox.coords[3 * (i - 1)], 12) == 0) {
      frame.header.flags |= kFlagDuplicates;
      break;
    }
  }
  frame.geometry = std::move(geometry);
  frame.attributes = std::move(attrs);
  return frame;
}

GaussianCloud decode_cloud(const CodedFrame& frame) {
  const FrameHeader& h = frame.header;
  VoxelizedCloud vox = decode_geometry(frame.geometry, h.grid(), h.point_count);

  GaussianCloud cloud;
  cloud.positions = dequantize(vox);
  cloud.schema = h.schema;
  cloud.attributes = frame.attributes;
  if (cloud.attributes.size() != cloud.size() * cloud.row_bytes())
    fail(Err::LengthMismatch, "attribute payload does not match decoded point count");

  // interchange dtype: float unless that would drop bits
  cloud.position_dtype = DType::F32;
  for (double v : cloud.positions) {
    if (static_cast<double>(static_cast<float>(v)) != v) {
      cloud.position_dtype = DType::F64;
      break;
    }
  }
  return cloud;
}

AlignmentReport verify_alignment(const GaussianCloud& original, const GaussianCloud& decoded,
                                 const GridParams& params) {
  if (original.row_bytes() != decoded.row_bytes() || original.size() != decoded.size())
    fail(Err::InvalidArgument, "clouds are not comparable");

  const VoxelizedCloud vo = quantize(original, params);
  const VoxelizedCloud vd = quantize(decoded, params);
  const std::vector<uint64_t> ko = morton_keys(vo);
  const std::vector<uint64_t> kd = morton_keys(vd);

  std::unordered_map<uint64_t, uint64_t> row_of;
  row_of.reserve(ko.size());
  for (size_t i = 0; i < ko.size(); i++) {
    if (!row_of.emplace(ko[i], i).second)
      fail(Err::NonUniqueVoxels, "original cloud has duplicate voxels");
  }

  AlignmentReport rep;
  const size_t rb = original.row_bytes();
  for (size_t i = 0; i < kd.size(); i++) {
    auto it = row_of.find(kd[i]);
    if (it == row_of.end()) {
      rep.mismatch_index = i;
      rep.message = "decoded voxel not present in original";
      return rep;
    }
    if (rb > 0 && std::memcmp(decoded.row(i), original.row(it->second), rb) != 0) {
      rep.mismatch_index = i;
      rep.message = "attribute row differs from the source row of this voxel";
      return rep;
    }
    rep.checked++;
  }
  rep.passed = true;
  rep.message = "ok";
  return rep;
}

bool multiset_lossless(const GaussianCloud& original, const GaussianCloud& decoded,
                       const GridParams& params) {
  if (original.row_bytes() != decoded.row_bytes() || original.size() != decoded.size())
    return false;
  const VoxelizedCloud vo = quantize(original, params);
  const VoxelizedCloud vd = quantize(decoded, params);
  return tagged_rows(original, morton_keys(vo)) == tagged_rows(decoded, morton_keys(vd));
}

GaussianCloud dedup_reference(const GaussianCloud& cloud, const GridParams& params) {
  const VoxelizedCloud vox = quantize(cloud, params);
  const std::vector<uint64_t> keys = morton_keys(vox);
  const Permutation perm = sort_permutation(keys);

  GaussianCloud out;
  out.schema = cloud.schema;
  out.position_dtype = cloud.position_dtype;
  const size_t rb = cloud.row_bytes();
  uint64_t prev_key = 0;
  for (size_t i = 0; i < perm.size(); i++) {
    const uint64_t src = perm.forward[i];
    const uint64_t k = keys[src];
    if (i > 0 && k == prev_key)
      continue;
    prev_key = k;
    out.positions.insert(out.positions.end(), cloud.positions.begin() + 3 * src,
                         cloud.positions.begin() + 3 * src + 3);
    out.attributes.insert(out.attributes.end(), cloud.attributes.begin() + src * rb,
                          cloud.attributes.begin() + (src + 1) * rb);
  }
  return out;
}

}  // namespace gsgc

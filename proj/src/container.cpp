#include "gsgc/container.hpp"

#include <bit>
#include <cstring>
#include <string>

#include "gsgc/crc32.hpp"
#include "gsgc/morton.hpp"

namespace gsgc {

namespace {

constexpr uint8_t kMagic[4] = {'G', 'S', 'G', 'C'};

struct Writer {
  std::vector<uint8_t> out;

  void u8(uint8_t v) { out.push_back(v); }
  void u16(uint16_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
  }
  void u32(uint32_t v) {
    for (int i = 0; i < 4; i++)
      out.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void u64(uint64_t v) {
    for (int i = 0; i < 8; i++)
      out.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
  void bytes(std::span<const uint8_t> b) { out.insert(out.end(), b.begin(), b.end()); }
};

struct Reader {
  std::span<const uint8_t> in;
  size_t pos = 0;

  void need(size_t n) const {
    if (in.size() - pos < n)
      fail(Err::LengthMismatch, "frame shorter than its declared contents");
  }
  uint8_t u8() {
    need(1);
    return in[pos++];
  }
  uint16_t u16() {
    need(2);
    uint16_t v = static_cast<uint16_t>(in[pos]) | static_cast<uint16_t>(in[pos + 1]) << 8;
    pos += 2;
    return v;
  }
  uint32_t u32() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; i++)
      v |= static_cast<uint32_t>(in[pos + i]) << (8 * i);
    pos += 4;
    return v;
  }
  uint64_t u64() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; i++)
      v |= static_cast<uint64_t>(in[pos + i]) << (8 * i);
    pos += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::span<const uint8_t> bytes(size_t n) {
    need(n);
    auto s = in.subspan(pos, n);
    pos += n;
    return s;
  }
};

void validate_header(const FrameHeader& h) {
  if (h.depth < 1 || h.depth > kMaxDepth)
    fail(Err::MalformedHeader, "depth outside [1, 21]");
  if (!(h.step > 0.0))
    fail(Err::MalformedHeader, "step must be positive");
  h.schema.validate();
  if (h.schema.channels.size() > 0xFFFF)
    fail(Err::MalformedHeader, "too many schema channels");
  for (const auto& c : h.schema.channels)
    if (c.name.size() > 0xFF)
      fail(Err::MalformedHeader, "channel name longer than 255 bytes");
}

}  // namespace

size_t header_bytes(const FrameHeader& h) {
  size_t n = kFixedHeaderBytes;
  for (const auto& c : h.schema.channels)
    n += 2 + c.name.size();
  return n;
}

std::vector<uint8_t> write_frame(const CodedFrame& frame) {
  const FrameHeader& h = frame.header;
  validate_header(h);
  if (frame.attributes.size() != h.point_count * h.schema.row_bytes())
    fail(Err::LengthMismatch, "attribute payload does not match point count * row width");

  Writer w;
  w.bytes(kMagic);
  w.u8(kFormatVersion);
  w.u8(h.flags);
  w.u8(h.depth);
  w.u8(0);  // reserved
  w.u64(h.point_count);
  for (double o : h.origin)
    w.f64(o);
  w.f64(h.step);
  w.u16(static_cast<uint16_t>(h.schema.channels.size()));
  for (const auto& c : h.schema.channels) {
    w.u8(static_cast<uint8_t>(c.name.size()));
    w.bytes(std::span(reinterpret_cast<const uint8_t*>(c.name.data()), c.name.size()));
    w.u8(static_cast<uint8_t>(c.dtype));
  }
  w.u64(frame.geometry.size());
  w.bytes(frame.geometry);
  w.u64(frame.attributes.size());
  w.bytes(frame.attributes);

  uint32_t crc = crc32(frame.geometry);
  crc = crc32(frame.attributes, crc);
  w.u32(crc);
  return std::move(w.out);
}

CodedFrame read_frame(std::span<const uint8_t> bytes) {
  Reader r{bytes};

  auto magic = r.bytes(4);
  if (std::memcmp(magic.data(), kMagic, 4) != 0)
    fail(Err::BadMagic, "not a GSGC frame");
  const uint8_t version = r.u8();
  if (version != kFormatVersion)
    fail(Err::UnsupportedVersion, "frame version " + std::to_string(version));

  CodedFrame f;
  f.header.flags = r.u8();
  f.header.depth = r.u8();
  if (r.u8() != 0)
    fail(Err::MalformedHeader, "reserved byte must be zero");
  f.header.point_count = r.u64();
  for (double& o : f.header.origin)
    o = r.f64();
  f.header.step = r.f64();

  const uint16_t nchannels = r.u16();
  f.header.schema.channels.reserve(nchannels);
  for (uint16_t i = 0; i < nchannels; i++) {
    const uint8_t len = r.u8();
    auto name = r.bytes(len);
    const uint8_t code = r.u8();
    if (code > 3)
      fail(Err::MalformedHeader, "unknown dtype code " + std::to_string(code));
    f.header.schema.channels.push_back(
      Channel{std::string(name.begin(), name.end()), static_cast<DType>(code)});
  }
  validate_header(f.header);

  const uint64_t geom_len = r.u64();
  auto geom = r.bytes(geom_len);
  const uint64_t attr_len = r.u64();
  if (attr_len != f.header.point_count * f.header.schema.row_bytes())
    fail(Err::LengthMismatch, "attribute length inconsistent with point count and schema");
  auto attrs = r.bytes(attr_len);

  uint32_t crc = crc32(geom);
  crc = crc32(attrs, crc);
  if (r.u32() != crc)
    fail(Err::ChecksumMismatch, "payload CRC does not match");
  if (r.pos != bytes.size())
    fail(Err::LengthMismatch, "trailing bytes after frame");

  f.geometry.assign(geom.begin(), geom.end());
  f.attributes.assign(attrs.begin(), attrs.end());
  return f;
}

}  // namespace gsgc

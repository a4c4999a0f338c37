#include "gsgc/ply.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>

namespace gsgc {

namespace {

struct Property {
  std::string name;
  DType dtype;
};

struct Header {
  PlyFormat format = PlyFormat::BinaryLE;
  uint64_t vertex_count = 0;
  std::vector<Property> properties;  // vertex properties in declared order
  size_t body_offset = 0;            // first byte after "end_header\n"
  bool elements_after_vertex = false;
};

std::string_view next_line(std::span<const uint8_t> bytes, size_t& pos) {
  if (pos >= bytes.size())
    fail(Err::MalformedHeader, "header ends before end_header");
  const char* base = reinterpret_cast<const char*>(bytes.data());
  size_t end = pos;
  while (end < bytes.size() && bytes[end] != '\n')
    end++;
  if (end == bytes.size())
    fail(Err::MalformedHeader, "header ends before end_header");
  size_t len = end - pos;
  if (len > 0 && bytes[pos + len - 1] == '\r')
    len--;
  std::string_view line(base + pos, len);
  pos = end + 1;
  return line;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
      i++;
    size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t')
      j++;
    if (j > i)
      out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::optional<DType> dtype_from_name(std::string_view t) {
  if (t == "float" || t == "float32") return DType::F32;
  if (t == "double" || t == "float64") return DType::F64;
  if (t == "uchar" || t == "uint8") return DType::U8;
  if (t == "int" || t == "int32") return DType::I32;
  return std::nullopt;
}

Header parse_header(std::span<const uint8_t> bytes) {
  size_t pos = 0;
  if (next_line(bytes, pos) != "ply")
    fail(Err::MalformedHeader, "missing ply magic");

  Header h;
  bool have_format = false;
  bool in_vertex = false;
  bool seen_vertex = false;

  for (;;) {
    const std::string_view line = next_line(bytes, pos);
    const auto tok = split_ws(line);
    if (tok.empty())
      continue;

    if (tok[0] == "end_header") {
      break;
    } else if (tok[0] == "comment" || tok[0] == "obj_info") {
      continue;
    } else if (tok[0] == "format") {
      if (tok.size() != 3 || tok[2] != "1.0")
        fail(Err::MalformedHeader, "unsupported format line");
      if (tok[1] == "ascii")
        h.format = PlyFormat::Ascii;
      else if (tok[1] == "binary_little_endian")
        h.format = PlyFormat::BinaryLE;
      else
        fail(Err::MalformedHeader, "unsupported format " + std::string(tok[1]));
      have_format = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3)
        fail(Err::MalformedHeader, "malformed element line");
      uint64_t count = 0;
      auto [p, ec] = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), count);
      if (ec != std::errc() || p != tok[2].data() + tok[2].size())
        fail(Err::MalformedHeader, "bad element count");
      if (tok[1] == "vertex") {
        if (seen_vertex)
          fail(Err::MalformedHeader, "duplicate vertex element");
        seen_vertex = true;
        in_vertex = true;
        h.vertex_count = count;
      } else {
        if (!seen_vertex)
          fail(Err::MalformedHeader, "element " + std::string(tok[1]) + " precedes vertex data");
        in_vertex = false;
        h.elements_after_vertex = true;
      }
    } else if (tok[0] == "property") {
      if (tok.size() >= 2 && tok[1] == "list") {
        if (in_vertex)
          fail(Err::MalformedHeader, "list property on vertex element");
        continue;  // later element, its data is never read
      }
      if (!in_vertex)
        continue;
      if (tok.size() != 3)
        fail(Err::MalformedHeader, "malformed property line");
      auto dt = dtype_from_name(tok[1]);
      if (!dt)
        fail(Err::MalformedHeader, "unsupported property type " + std::string(tok[1]));
      for (const auto& prev : h.properties)
        if (prev.name == tok[2])
          fail(Err::MalformedHeader, "duplicate property " + std::string(tok[2]));
      h.properties.push_back(Property{std::string(tok[2]), *dt});
    } else {
      fail(Err::MalformedHeader, "unknown header line: " + std::string(line.substr(0, 32)));
    }
  }

  if (!have_format)
    fail(Err::MalformedHeader, "missing format line");
  if (!seen_vertex)
    fail(Err::MalformedHeader, "no vertex element");
  h.body_offset = pos;
  return h;
}

struct Layout {
  int pos_index[3] = {-1, -1, -1};  // property index of x, y, z
  DType pos_dtype = DType::F32;
  std::vector<size_t> prop_offsets;  // byte offset of each property in a source row
  size_t row_stride = 0;
  std::vector<int> attr_props;  // property indices that land in the schema, in order
  AttributeSchema schema;
};

Layout plan_layout(const Header& h) {
  Layout lay;
  lay.prop_offsets.reserve(h.properties.size());
  for (size_t i = 0; i < h.properties.size(); i++) {
    const auto& p = h.properties[i];
    lay.prop_offsets.push_back(lay.row_stride);
    lay.row_stride += dtype_size(p.dtype);
    int axis = -1;
    if (p.name == "x") axis = 0;
    else if (p.name == "y") axis = 1;
    else if (p.name == "z") axis = 2;
    if (axis >= 0) {
      if (p.dtype != DType::F32 && p.dtype != DType::F64)
        fail(Err::MalformedHeader, "position property must be float or double");
      lay.pos_index[axis] = static_cast<int>(i);
    } else {
      lay.attr_props.push_back(static_cast<int>(i));
      lay.schema.channels.push_back(Channel{p.name, p.dtype});
    }
  }
  for (int a = 0; a < 3; a++)
    if (lay.pos_index[a] < 0)
      fail(Err::MissingPosition, "vertex element lacks x/y/z");
  lay.pos_dtype = h.properties[lay.pos_index[0]].dtype;
  for (int a = 1; a < 3; a++)
    if (h.properties[lay.pos_index[a]].dtype != lay.pos_dtype)
      fail(Err::MalformedHeader, "x/y/z must share one dtype");
  return lay;
}

double read_position(const uint8_t* p, DType t) {
  if (t == DType::F32) {
    uint32_t u;
    std::memcpy(&u, p, 4);
    return static_cast<double>(std::bit_cast<float>(u));
  }
  uint64_t u;
  std::memcpy(&u, p, 8);
  return std::bit_cast<double>(u);
}

void check_finite(double v) {
  if (!std::isfinite(v))
    fail(Err::NonFiniteCoordinate, "position is NaN or infinite");
}

PlyParseResult parse_binary(const Header& h, const Layout& lay, std::span<const uint8_t> bytes) {
  const size_t avail = bytes.size() - h.body_offset;
  if (h.vertex_count > avail / lay.row_stride)
    fail(Err::TruncatedPayload, "vertex data shorter than header promises");
  const size_t need = h.vertex_count * lay.row_stride;

  PlyParseResult res;
  GaussianCloud& c = res.cloud;
  c.schema = lay.schema;
  c.position_dtype = lay.pos_dtype;
  c.positions.resize(3 * h.vertex_count);
  const size_t row_bytes = lay.schema.row_bytes();
  c.attributes.resize(h.vertex_count * row_bytes);

  // attribute block contiguous in the source row -> single copy per row
  bool contiguous = true;
  {
    size_t expect = lay.attr_props.empty() ? 0 : lay.prop_offsets[lay.attr_props[0]];
    for (int pi : lay.attr_props) {
      if (lay.prop_offsets[pi] != expect) {
        contiguous = false;
        break;
      }
      expect += dtype_size(h.properties[pi].dtype);
    }
  }

  const uint8_t* src = bytes.data() + h.body_offset;
  for (uint64_t i = 0; i < h.vertex_count; i++) {
    const uint8_t* row = src + i * lay.row_stride;
    for (int a = 0; a < 3; a++) {
      double v = read_position(row + lay.prop_offsets[lay.pos_index[a]], lay.pos_dtype);
      check_finite(v);
      c.positions[3 * i + a] = v;
    }
    uint8_t* dst = c.attributes.data() + i * row_bytes;
    if (contiguous) {
      if (row_bytes > 0)
        std::memcpy(dst, row + lay.prop_offsets[lay.attr_props[0]], row_bytes);
    } else {
      for (int pi : lay.attr_props) {
        const size_t sz = dtype_size(h.properties[pi].dtype);
        std::memcpy(dst, row + lay.prop_offsets[pi], sz);
        dst += sz;
      }
    }
  }
  res.trailing_bytes = bytes.size() - h.body_offset - need;
  return res;
}

struct Tokenizer {
  std::span<const uint8_t> bytes;
  size_t pos;

  std::string_view next() {
    while (pos < bytes.size() && std::isspace(bytes[pos]))
      pos++;
    if (pos >= bytes.size())
      fail(Err::TruncatedPayload, "vertex data shorter than header promises");
    size_t start = pos;
    while (pos < bytes.size() && !std::isspace(bytes[pos]))
      pos++;
    return std::string_view(reinterpret_cast<const char*>(bytes.data()) + start, pos - start);
  }
};

template <class T>
T parse_number(std::string_view tok) {
  T v{};
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size())
    fail(Err::MalformedValue, "bad ascii value '" + std::string(tok) + "'");
  return v;
}

void store_ascii_value(std::string_view tok, DType t, uint8_t* dst) {
  switch (t) {
    case DType::F32: {
      const uint32_t u = std::bit_cast<uint32_t>(parse_number<float>(tok));
      std::memcpy(dst, &u, 4);
      return;
    }
    case DType::F64: {
      const uint64_t u = std::bit_cast<uint64_t>(parse_number<double>(tok));
      std::memcpy(dst, &u, 8);
      return;
    }
    case DType::U8: {
      const int v = parse_number<int>(tok);
      if (v < 0 || v > 255)
        fail(Err::MalformedValue, "uchar out of range: " + std::string(tok));
      *dst = static_cast<uint8_t>(v);
      return;
    }
    case DType::I32: {
      const int32_t v = parse_number<int32_t>(tok);
      std::memcpy(dst, &v, 4);
      return;
    }
  }
}

PlyParseResult parse_ascii(const Header& h, const Layout& lay, std::span<const uint8_t> bytes) {
  PlyParseResult res;
  GaussianCloud& c = res.cloud;
  c.schema = lay.schema;
  c.position_dtype = lay.pos_dtype;
  c.positions.resize(3 * h.vertex_count);
  const size_t row_bytes = lay.schema.row_bytes();
  c.attributes.resize(h.vertex_count * row_bytes);

  // property index -> (axis | attribute offset)
  std::vector<int> axis_of(h.properties.size(), -1);
  std::vector<size_t> attr_off(h.properties.size(), 0);
  for (int a = 0; a < 3; a++)
    axis_of[lay.pos_index[a]] = a;
  {
    size_t off = 0;
    for (int pi : lay.attr_props) {
      attr_off[pi] = off;
      off += dtype_size(h.properties[pi].dtype);
    }
  }

  Tokenizer tz{bytes, h.body_offset};
  for (uint64_t i = 0; i < h.vertex_count; i++) {
    uint8_t* dst_row = c.attributes.data() + i * row_bytes;
    for (size_t pi = 0; pi < h.properties.size(); pi++) {
      const std::string_view tok = tz.next();
      const int a = axis_of[pi];
      if (a >= 0) {
        double v = lay.pos_dtype == DType::F32
          ? static_cast<double>(parse_number<float>(tok))
          : parse_number<double>(tok);
        check_finite(v);
        c.positions[3 * i + a] = v;
      } else {
        store_ascii_value(tok, h.properties[pi].dtype, dst_row + attr_off[pi]);
      }
    }
  }
  res.trailing_bytes = bytes.size() - tz.pos;
  return res;
}

void append_number(std::string& out, DType t, const uint8_t* src) {
  char buf[40];
  char* end = buf;
  switch (t) {
    case DType::F32: {
      uint32_t u;
      std::memcpy(&u, src, 4);
      end = std::to_chars(buf, buf + sizeof buf, std::bit_cast<float>(u)).ptr;
      break;
    }
    case DType::F64: {
      uint64_t u;
      std::memcpy(&u, src, 8);
      end = std::to_chars(buf, buf + sizeof buf, std::bit_cast<double>(u)).ptr;
      break;
    }
    case DType::U8:
      end = std::to_chars(buf, buf + sizeof buf, int(*src)).ptr;
      break;
    case DType::I32: {
      int32_t v;
      std::memcpy(&v, src, 4);
      end = std::to_chars(buf, buf + sizeof buf, v).ptr;
      break;
    }
  }
  out.append(buf, end);
}

}  // namespace

PlyParseResult parse_ply_detail(std::span<const uint8_t> bytes) {
  const Header h = parse_header(bytes);
  const Layout lay = plan_layout(h);
  return h.format == PlyFormat::BinaryLE ? parse_binary(h, lay, bytes)
                                         : parse_ascii(h, lay, bytes);
}

GaussianCloud parse_ply(std::span<const uint8_t> bytes) {
  return parse_ply_detail(bytes).cloud;
}

std::vector<uint8_t> write_ply(const GaussianCloud& cloud, PlyFormat format) {
  cloud.validate();
  if (cloud.position_dtype != DType::F32 && cloud.position_dtype != DType::F64)
    fail(Err::InvalidArgument, "position dtype must be float or double");

  std::string header;
  header += "ply\n";
  header += format == PlyFormat::Ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n";
  header += "element vertex " + std::to_string(cloud.size()) + "\n";
  const char* pos_name = dtype_ply_name(cloud.position_dtype);
  for (const char* axis : {"x", "y", "z"})
    header += std::string("property ") + pos_name + " " + axis + "\n";
  for (const auto& ch : cloud.schema.channels)
    header += std::string("property ") + dtype_ply_name(ch.dtype) + " " + ch.name + "\n";
  header += "end_header\n";

  std::vector<uint8_t> out(header.begin(), header.end());
  const size_t n = cloud.size();
  const size_t row_bytes = cloud.row_bytes();

  if (format == PlyFormat::BinaryLE) {
    const size_t pos_sz = dtype_size(cloud.position_dtype);
    out.reserve(out.size() + n * (3 * pos_sz + row_bytes));
    for (size_t i = 0; i < n; i++) {
      for (int a = 0; a < 3; a++) {
        const double v = cloud.positions[3 * i + a];
        if (cloud.position_dtype == DType::F32) {
          const uint32_t u = std::bit_cast<uint32_t>(static_cast<float>(v));
          for (int b = 0; b < 4; b++)
            out.push_back(static_cast<uint8_t>(u >> (8 * b)));
        } else {
          const uint64_t u = std::bit_cast<uint64_t>(v);
          for (int b = 0; b < 8; b++)
            out.push_back(static_cast<uint8_t>(u >> (8 * b)));
        }
      }
      const uint8_t* row = cloud.row(i);
      out.insert(out.end(), row, row + row_bytes);
    }
    return out;
  }

  std::string body;
  for (size_t i = 0; i < n; i++) {
    for (int a = 0; a < 3; a++) {
      if (a)
        body += ' ';
      const double v = cloud.positions[3 * i + a];
      char buf[40];
      char* end = cloud.position_dtype == DType::F32
        ? std::to_chars(buf, buf + sizeof buf, static_cast<float>(v)).ptr
        : std::to_chars(buf, buf + sizeof buf, v).ptr;
      body.append(buf, end);
    }
    const uint8_t* row = cloud.row(i);
    size_t off = 0;
    for (const auto& ch : cloud.schema.channels) {
      body += ' ';
      append_number(body, ch.dtype, row + off);
      off += dtype_size(ch.dtype);
    }
    body += '\n';
  }
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

}  // namespace gsgc

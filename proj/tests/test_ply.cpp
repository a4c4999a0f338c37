#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <limits>
#include <string>

#include "gsgc/ply.hpp"
#include "support/check_error.hpp"
#include "support/test_util.hpp"

using namespace gsgc;

namespace {

std::vector<uint8_t> bytes_of(const std::string& s) {
  return std::vector<uint8_t>(s.begin(), s.end());
}

void push_f32(std::vector<uint8_t>& out, float v) {
  uint32_t u;
  std::memcpy(&u, &v, 4);
  for (int i = 0; i < 4; i++)
    out.push_back(static_cast<uint8_t>(u >> (8 * i)));
}

}  // namespace

TEST_CASE("minimal ascii cloud") {
  const auto cloud = parse_ply(bytes_of(
    "ply\nformat ascii 1.0\nelement vertex 1\n"
    "property float x\nproperty float y\nproperty float z\nend_header\n"
    "0 0 0\n"));
  CHECK(cloud.size() == 1);
  CHECK(cloud.positions == std::vector<double>{0, 0, 0});
  CHECK(cloud.schema.channels.empty());
  CHECK(cloud.position_dtype == DType::F32);
}

TEST_CASE("binary cloud with the 59-channel splat layout") {
  std::string header = "ply\nformat binary_little_endian 1.0\nelement vertex 2\n";
  header += "property float x\nproperty float y\nproperty float z\n";
  std::vector<std::string> names;
  for (int i = 0; i < 3; i++)
    names.push_back("f_dc_" + std::to_string(i));
  for (int i = 0; i < 45; i++)
    names.push_back("f_rest_" + std::to_string(i));
  names.push_back("opacity");
  for (int i = 0; i < 3; i++)
    names.push_back("scale_" + std::to_string(i));
  for (int i = 0; i < 4; i++)
    names.push_back("rot_" + std::to_string(i));
  REQUIRE(names.size() == 56);
  for (const auto& n : names)
    header += "property float " + n + "\n";
  header += "end_header\n";

  auto bytes = bytes_of(header);
  for (int v = 0; v < 2; v++)
    for (int p = 0; p < 59; p++)
      push_f32(bytes, static_cast<float>(v * 100 + p));

  const auto cloud = parse_ply(bytes);
  CHECK(cloud.size() == 2);
  CHECK(cloud.schema.channels.size() == 56);
  CHECK(cloud.positions[3] == 100.0);
  float opacity;
  std::memcpy(&opacity, cloud.row(1) + 4 * 48, 4);  // after f_dc_* and f_rest_*
  CHECK(opacity == 151.0f);
}

TEST_CASE("bad magic is rejected") {
  CHECK_FAILS(parse_ply(bytes_of("plz\nformat ascii 1.0\nend_header\n")), Err::MalformedHeader);
}

TEST_CASE("big endian and unknown formats are rejected") {
  CHECK_FAILS(parse_ply(bytes_of("ply\nformat binary_big_endian 1.0\nelement vertex 0\n"
                                 "property float x\nproperty float y\nproperty float z\n"
                                 "end_header\n")),
              Err::MalformedHeader);
  CHECK_FAILS(parse_ply(bytes_of("ply\nformat utf8 1.0\nend_header\n")), Err::MalformedHeader);
}

TEST_CASE("missing position properties") {
  CHECK_FAILS(parse_ply(bytes_of("ply\nformat ascii 1.0\nelement vertex 0\n"
                                 "property float x\nproperty float y\nend_header\n")),
              Err::MissingPosition);
}

TEST_CASE("list properties on the vertex element are rejected") {
  CHECK_FAILS(parse_ply(bytes_of("ply\nformat ascii 1.0\nelement vertex 1\n"
                                 "property float x\nproperty float y\nproperty float z\n"
                                 "property list uchar int vertex_indices\nend_header\n")),
              Err::MalformedHeader);
}

TEST_CASE("unsupported property dtypes are rejected") {
  CHECK_FAILS(parse_ply(bytes_of("ply\nformat ascii 1.0\nelement vertex 0\n"
                                 "property float x\nproperty float y\nproperty float z\n"
                                 "property short flags\nend_header\n")),
              Err::MalformedHeader);
}

TEST_CASE("truncated binary payload") {
  std::string header =
    "ply\nformat binary_little_endian 1.0\nelement vertex 2\n"
    "property float x\nproperty float y\nproperty float z\nend_header\n";
  auto bytes = bytes_of(header);
  for (int i = 0; i < 4; i++)
    push_f32(bytes, 1.0f);  // 16 of the 24 required bytes
  CHECK_FAILS(parse_ply(bytes), Err::TruncatedPayload);
}

TEST_CASE("truncated ascii payload") {
  CHECK_FAILS(parse_ply(bytes_of("ply\nformat ascii 1.0\nelement vertex 2\n"
                                 "property float x\nproperty float y\nproperty float z\n"
                                 "end_header\n1 2 3\n4 5\n")),
              Err::TruncatedPayload);
}

TEST_CASE("non-finite positions are a hard error") {
  std::string header =
    "ply\nformat binary_little_endian 1.0\nelement vertex 1\n"
    "property float x\nproperty float y\nproperty float z\nend_header\n";
  auto bytes = bytes_of(header);
  push_f32(bytes, 0.0f);
  push_f32(bytes, std::numeric_limits<float>::quiet_NaN());
  push_f32(bytes, 0.0f);
  CHECK_FAILS(parse_ply(bytes), Err::NonFiniteCoordinate);

  CHECK_FAILS(parse_ply(bytes_of("ply\nformat ascii 1.0\nelement vertex 1\n"
                                 "property float x\nproperty float y\nproperty float z\n"
                                 "end_header\n0 inf 0\n")),
              Err::NonFiniteCoordinate);
}

TEST_CASE("trailing bytes are reported, never consumed") {
  std::string header =
    "ply\nformat binary_little_endian 1.0\nelement vertex 1\n"
    "property float x\nproperty float y\nproperty float z\nend_header\n";
  auto bytes = bytes_of(header);
  for (int i = 0; i < 3; i++)
    push_f32(bytes, 2.0f);
  bytes.push_back(0xAB);
  bytes.push_back(0xCD);
  const auto res = parse_ply_detail(bytes);
  CHECK(res.cloud.size() == 1);
  CHECK(res.trailing_bytes == 2);
}

TEST_CASE("empty cloud writes a valid header") {
  GaussianCloud c;
  const auto bytes = write_ply(c, PlyFormat::BinaryLE);
  const std::string text(bytes.begin(), bytes.end());
  CHECK(text.find("element vertex 0") != std::string::npos);
  CHECK(parse_ply(bytes).size() == 0);
}

TEST_CASE("schema channels echo into the header") {
  GaussianCloud c;
  c.positions = {1, 2, 3};
  c.schema.channels = {{"opacity", DType::F32}};
  c.attributes = {0, 0, 0x80, 0x3F};  // 1.0f
  const auto bytes = write_ply(c, PlyFormat::Ascii);
  const std::string text(bytes.begin(), bytes.end());
  CHECK(text.find("property float opacity") != std::string::npos);
}

TEST_CASE("binary round trip is bit-exact") {
  test::Rng rng(401);
  for (int iter = 0; iter < 20; iter++) {
    GaussianCloud c = test::random_integer_cloud(rng, 1000, 10, test::mixed_schema(), 10);
    // non-integer positions too
    for (auto& p : c.positions)
      p = double(float(p + rng.unit()));
    const auto bytes = write_ply(c, PlyFormat::BinaryLE);
    const GaussianCloud back = parse_ply(bytes);
    REQUIRE(back.size() == c.size());
    CHECK(std::memcmp(back.positions.data(), c.positions.data(),
                      c.positions.size() * sizeof(double)) == 0);
    CHECK(back.attributes == c.attributes);
    CHECK(back.schema == c.schema);
    CHECK(back.position_dtype == c.position_dtype);
  }
}

TEST_CASE("ascii round trip is value-exact for every dtype") {
  test::Rng rng(409);
  GaussianCloud c = test::random_integer_cloud(rng, 200, 8, test::mixed_schema(), 0);
  for (auto& p : c.positions)
    p = double(float(p * 0.37 - 11.0));
  const auto bytes = write_ply(c, PlyFormat::Ascii);
  const GaussianCloud back = parse_ply(bytes);
  REQUIRE(back.size() == c.size());
  CHECK(std::memcmp(back.positions.data(), c.positions.data(),
                    c.positions.size() * sizeof(double)) == 0);
  CHECK(back.attributes == c.attributes);
  CHECK(back.schema == c.schema);
}

TEST_CASE("double positions round trip through binary and ascii") {
  GaussianCloud c;
  c.position_dtype = DType::F64;
  c.positions = {0.1, -2.301, 1e308, 123456789.123456789, -1e-300, 42.0};
  for (auto fmt : {PlyFormat::BinaryLE, PlyFormat::Ascii}) {
    const GaussianCloud back = parse_ply(write_ply(c, fmt));
    CHECK(back.position_dtype == DType::F64);
    CHECK(std::memcmp(back.positions.data(), c.positions.data(),
                      c.positions.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("positions may sit anywhere among the properties") {
  std::string header =
    "ply\nformat ascii 1.0\nelement vertex 1\n"
    "property uchar label\nproperty float x\nproperty int id\n"
    "property float y\nproperty float z\nend_header\n"
    "7 1.5 -9 2.5 3.5\n";
  const auto cloud = parse_ply(bytes_of(header));
  CHECK(cloud.positions == std::vector<double>{1.5, 2.5, 3.5});
  REQUIRE(cloud.schema.channels.size() == 2);
  CHECK(cloud.schema.channels[0].name == "label");
  CHECK(cloud.schema.channels[1].name == "id");
  CHECK(cloud.row(0)[0] == 7);
  int32_t id;
  std::memcpy(&id, cloud.row(0) + 1, 4);
  CHECK(id == -9);
}

TEST_CASE("duplicate vertex properties are rejected") {
  CHECK_FAILS(parse_ply(bytes_of("ply\nformat ascii 1.0\nelement vertex 0\n"
                                 "property float x\nproperty float y\nproperty float z\n"
                                 "property float x\nend_header\n")),
              Err::MalformedHeader);
}

TEST_CASE("elements after vertex are tolerated, before vertex rejected") {
  const auto ok = parse_ply(bytes_of("ply\nformat ascii 1.0\nelement vertex 1\n"
                                     "property float x\nproperty float y\nproperty float z\n"
                                     "element face 0\nproperty list uchar int vertex_indices\n"
                                     "end_header\n1 2 3\n"));
  CHECK(ok.size() == 1);
  CHECK_FAILS(parse_ply(bytes_of("ply\nformat ascii 1.0\nelement camera 1\nproperty float fx\n"
                                 "element vertex 0\nproperty float x\nproperty float y\n"
                                 "property float z\nend_header\n")),
              Err::MalformedHeader);
}

TEST_CASE("crlf headers parse") {
  const auto cloud = parse_ply(bytes_of(
    "ply\r\nformat ascii 1.0\r\ncomment exported\r\nelement vertex 1\r\n"
    "property float x\r\nproperty float y\r\nproperty float z\r\nend_header\r\n"
    "4 5 6\n"));
  CHECK(cloud.positions == std::vector<double>{4, 5, 6});
}

TEST_CASE("malformed ascii values are rejected") {
  CHECK_FAILS(parse_ply(bytes_of("ply\nformat ascii 1.0\nelement vertex 1\n"
                                 "property float x\nproperty float y\nproperty float z\n"
                                 "property uchar label\nend_header\n1 2 3 999\n")),
              Err::MalformedValue);
  CHECK_FAILS(parse_ply(bytes_of("ply\nformat ascii 1.0\nelement vertex 1\n"
                                 "property float x\nproperty float y\nproperty float z\n"
                                 "end_header\n1 two 3\n")),
              Err::MalformedValue);
}

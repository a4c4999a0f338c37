#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gsgc/voxel.hpp"
#include "support/check_error.hpp"
#include "support/test_util.hpp"

using namespace gsgc;

namespace {

GaussianCloud cloud_of(std::vector<double> positions) {
  GaussianCloud c;
  c.positions = std::move(positions);
  return c;
}

}  // namespace

TEST_CASE("fit_grid with explicit step picks the smallest covering depth") {
  // integer positions spanning [0,5]: 6 cells at step 1 -> depth 3
  auto c = cloud_of({0, 0, 0, 5, 5, 5, 2, 3, 4});
  const GridParams p = fit_grid(c, std::nullopt, 1.0);
  CHECK(p.depth == 3);
  CHECK(p.step == 1.0);
  CHECK(p.origin == std::array<double, 3>{0, 0, 0});
}

TEST_CASE("fit_grid on a single point degenerates cleanly") {
  auto c = cloud_of({2.5, 0.0, -1.0});
  const GridParams p = fit_grid(c, 10, std::nullopt);
  CHECK(p.origin == std::array<double, 3>{2.5, 0.0, -1.0});
  CHECK(p.step == 1.0);
  const VoxelizedCloud v = quantize(c, p);
  CHECK(v.coords == std::vector<uint32_t>{0, 0, 0});
}

TEST_CASE("fit_grid with explicit depth derives the step from the extent") {
  auto c = cloud_of({0, 0, 0, 1, 0.5, 0.25});
  const GridParams p = fit_grid(c, 10, std::nullopt);
  CHECK(p.depth == 10);
  CHECK(p.step == doctest::Approx(1.0 / 1023.0).epsilon(1e-12));
}

TEST_CASE("fit_grid argument validation") {
  auto c = cloud_of({0, 0, 0});
  CHECK_FAILS(fit_grid(GaussianCloud{}, 4, std::nullopt), Err::EmptyCloud);
  CHECK_FAILS(fit_grid(c, 4, 1.0), Err::InvalidArgument);
  CHECK_FAILS(fit_grid(c, 0, std::nullopt), Err::DepthOutOfRange);
  CHECK_FAILS(fit_grid(c, 22, std::nullopt), Err::DepthOutOfRange);
  CHECK_FAILS(fit_grid(c, std::nullopt, 0.0), Err::InvalidArgument);
  auto wide = cloud_of({0, 0, 0, std::ldexp(1.0, 22), 0, 0});
  CHECK_FAILS(fit_grid(wide, std::nullopt, 1.0), Err::DepthOverflow);
}

TEST_CASE("auto grid: integer inputs get the identity grid") {
  auto c = cloud_of({3, 4, 5, 10, 11, 12});
  const GridParams p = fit_grid(c, std::nullopt, std::nullopt);
  CHECK(p.step == 1.0);
  CHECK(p.depth == 3);  // extent 7 -> 2^3
  CHECK(integer_grid_preserving(c, p));

  auto f = cloud_of({0.5, 0, 0, 1.0, 0, 0});
  const GridParams pf = fit_grid(f, std::nullopt, std::nullopt);
  CHECK(pf.depth == 16);
  CHECK(!integer_grid_preserving(f, pf));
}

TEST_CASE("quantize applies round-half-away-from-zero") {
  auto c = cloud_of({0.4, 0.5, 0.6});
  GridParams p{{0, 0, 0}, 1.0, 4};
  const VoxelizedCloud v = quantize(c, p);
  CHECK(v.coords == std::vector<uint32_t>{0, 1, 1});
}

TEST_CASE("quantize is the identity on integer inputs at step 1") {
  auto c = cloud_of({0, 1, 2, 7, 6, 5, 3, 3, 3});
  GridParams p{{0, 0, 0}, 1.0, 3};
  const VoxelizedCloud v = quantize(c, p);
  CHECK(v.coords == std::vector<uint32_t>{0, 1, 2, 7, 6, 5, 3, 3, 3});
  CHECK(dequantize(v) == c.positions);
}

TEST_CASE("quantize maps the origin to the zero voxel") {
  auto c = cloud_of({-2.5, 3.75, 11.0});
  GridParams p{{-2.5, 3.75, 11.0}, 0.125, 6};
  CHECK(quantize(c, p).coords == std::vector<uint32_t>{0, 0, 0});
}

TEST_CASE("quantize rejects out-of-grid points") {
  GridParams p{{0, 0, 0}, 1.0, 3};
  CHECK_FAILS(quantize(cloud_of({8.0, 0, 0}), p), Err::OutOfRange);
  CHECK_FAILS(quantize(cloud_of({0, -0.75, 0}), p), Err::OutOfRange);
  // boundary half-voxel clamps instead of failing
  CHECK(quantize(cloud_of({7.4, 0, 0}), p).coords[0] == 7);
}

TEST_CASE("dequantize applies origin and step") {
  VoxelizedCloud v;
  v.coords = {0, 0, 0};
  v.params = GridParams{{1, 2, 3}, 0.5, 4};
  CHECK(dequantize(v) == std::vector<double>{1, 2, 3});
}

TEST_CASE("round trip error stays within half a step at depth 16") {
  test::Rng rng(101);
  GaussianCloud c;
  c.positions.resize(3 * 5000);
  for (auto& p : c.positions)
    p = rng.unit() * 40.0 - 17.0;
  const GridParams params = fit_grid(c, 16, std::nullopt);
  const VoxelizedCloud v = quantize(c, params);
  const auto back = dequantize(v);
  double worst = 0.0;
  for (size_t i = 0; i < c.positions.size(); i++)
    worst = std::max(worst, std::abs(back[i] - c.positions[i]));
  CHECK(worst <= params.step / 2);
}

TEST_CASE("integer grids survive the round trip bit-exactly") {
  test::Rng rng(103);
  GaussianCloud c = test::random_integer_cloud(rng, 2000, 12, AttributeSchema{});
  const GridParams params = fit_grid(c, std::nullopt, 1.0);
  CHECK(integer_grid_preserving(c, params));
  const auto back = dequantize(quantize(c, params));
  CHECK(back == c.positions);
}

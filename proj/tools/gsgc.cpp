// gsgc: encode/decode/bench for Gaussian-splat point cloud geometry.

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gsgc/container.hpp"
#include "gsgc/pipeline.hpp"
#include "gsgc/ply.hpp"
#include "gsgc/report.hpp"

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    gsgc::fail(gsgc::Err::IoError, "cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad())
    gsgc::fail(gsgc::Err::IoError, "read failed on " + path.string());
  return bytes;
}

void write_file(const fs::path& path, std::span<const uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    gsgc::fail(gsgc::Err::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out)
    gsgc::fail(gsgc::Err::IoError, "write failed on " + path.string());
}

struct GridFlags {
  std::optional<int> depth;
  std::optional<double> step;
  bool dedup = false;

  gsgc::EncodeConfig config() const {
    gsgc::EncodeConfig cfg;
    cfg.depth = depth;
    cfg.step = step;
    cfg.dup_policy = dedup ? gsgc::DupPolicy::Dedup : gsgc::DupPolicy::Keep;
    return cfg;
  }
};

void add_grid_flags(CLI::App* cmd, GridFlags& flags) {
  auto* d = cmd->add_option_function<int>(
    "--depth", [&flags](int v) { flags.depth = v; },
    "Octree depth (grid side 2^depth)");
  d->check([](const std::string& s) -> std::string {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
      return "depth must be an integer";
    if (v < 1 || v > 21)
      return "depth out of range [1..21]";
    return {};
  });
  auto* s = cmd->add_option_function<double>(
    "--step", [&flags](double v) { flags.step = v; },
    "Voxel size in scene units");
  s->check(CLI::PositiveNumber);
  cmd->add_flag("--auto", "Pick the grid automatically (default)");
  cmd->add_flag("--dedup", flags.dedup, "Drop duplicate voxels (keeps the first row)");
  d->excludes(s);
}

int cmd_encode(const fs::path& input, const fs::path& output, const GridFlags& flags) {
  const auto t0 = Clock::now();
  const auto src = read_file(input);
  const gsgc::GaussianCloud cloud = gsgc::parse_ply(src);
  const gsgc::CodedFrame frame = gsgc::encode_cloud(cloud, flags.config());
  const auto bytes = gsgc::write_frame(frame);
  write_file(output, bytes);

  std::printf("encoded %s -> %s\n", input.string().c_str(), output.string().c_str());
  std::printf("  points        %llu\n", static_cast<unsigned long long>(frame.header.point_count));
  std::printf("  depth         %d\n", int(frame.header.depth));
  std::printf("  step          %.9g\n", frame.header.step);
  std::printf("  geometry      %zu bytes\n", frame.geometry.size());
  std::printf("  attributes    %zu bytes\n", frame.attributes.size());
  std::printf("  frame total   %zu bytes\n", bytes.size());
  std::printf("  elapsed       %.3f s\n", seconds_since(t0));
  return 0;
}

int cmd_decode(const fs::path& input, const fs::path& output, bool ascii) {
  const auto t0 = Clock::now();
  const auto bytes = read_file(input);
  const gsgc::CodedFrame frame = gsgc::read_frame(bytes);
  const gsgc::GaussianCloud cloud = gsgc::decode_cloud(frame);
  const auto ply = gsgc::write_ply(cloud, ascii ? gsgc::PlyFormat::Ascii : gsgc::PlyFormat::BinaryLE);
  write_file(output, ply);

  std::printf("decoded %s -> %s\n", input.string().c_str(), output.string().c_str());
  std::printf("  points        %zu\n", cloud.size());
  std::printf("  channels      %zu\n", cloud.schema.channels.size());
  std::printf("  elapsed       %.3f s\n", seconds_since(t0));
  return 0;
}

gsgc::FrameReport bench_frame(const fs::path& path, const GridFlags& flags) {
  gsgc::FrameReport r;
  r.name = path.filename().string();
  try {
    const auto src = read_file(path);
    const gsgc::GaussianCloud cloud = gsgc::parse_ply(src);

    const auto enc0 = Clock::now();
    const gsgc::CodedFrame frame = gsgc::encode_cloud(cloud, flags.config());
    const auto coded = gsgc::write_frame(frame);
    r.enc_seconds = seconds_since(enc0);

    const auto dec0 = Clock::now();
    const gsgc::CodedFrame reread = gsgc::read_frame(coded);
    const gsgc::GaussianCloud decoded = gsgc::decode_cloud(reread);
    r.dec_seconds = seconds_since(dec0);

    r.points = frame.header.point_count;
    r.depth = frame.header.depth;
    r.input_total_bytes = src.size();
    r.input_xyz_bytes = 12 * cloud.size();
    r.coded_total_bytes = coded.size();
    r.geometry_payload_bytes = frame.geometry.size();
    r.coded_xyz_bytes = frame.geometry.size() + gsgc::kFixedHeaderBytes + 8;
    r.total_savings_pct = gsgc::savings_pct(static_cast<double>(r.coded_total_bytes),
                                            static_cast<double>(r.input_total_bytes));
    r.xyz_savings_pct = gsgc::savings_pct(static_cast<double>(r.coded_xyz_bytes),
                                          static_cast<double>(r.input_xyz_bytes));

    const gsgc::GridParams grid = frame.header.grid();
    r.lossless_verified = flags.dedup
      ? gsgc::multiset_lossless(gsgc::dedup_reference(cloud, grid), decoded, grid)
      : gsgc::multiset_lossless(cloud, decoded, grid);
  } catch (const std::exception& e) {
    r.failed = true;
    r.error = e.what();
  }
  return r;
}

int cmd_bench(const fs::path& dir, const std::vector<std::string>& reports, unsigned threads,
              bool strict, const GridFlags& flags) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ply")
      files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    std::fprintf(stderr, "error: no .ply files in %s\n", dir.string().c_str());
    return kExitData;
  }

  std::vector<gsgc::FrameReport> rows(files.size());
  if (threads == 0)
    threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, files.size());

  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= files.size())
        return;
      rows[i] = bench_frame(files[i], flags);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; t++)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
  }

  size_t failures = 0;
  for (const auto& r : rows) {
    if (r.failed) {
      failures++;
      std::fprintf(stderr, "warning: %s skipped: %s\n", r.name.c_str(), r.error.c_str());
    }
  }

  std::vector<gsgc::FrameReport> table = rows;
  table.push_back(gsgc::aggregate(rows));
  std::fputs(gsgc::report_markdown(table).c_str(), stdout);

  for (const auto& out : reports) {
    const fs::path p(out);
    const std::string text =
      p.extension() == ".md" ? gsgc::report_markdown(table) : gsgc::report_csv(table);
    std::ofstream f(p, std::ios::trunc);
    if (!f) {
      std::fprintf(stderr, "error: cannot write report %s\n", out.c_str());
      return kExitData;
    }
    f << text;
  }

  if (failures == rows.size())
    return kExitData;
  if (strict) {
    for (const auto& r : rows)
      if (r.failed || !r.lossless_verified) {
        std::fprintf(stderr, "error: strict mode: %s is not verified lossless\n", r.name.c_str());
        return kExitData;
      }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lossless geometry codec for Gaussian-splat point clouds"};
  app.require_subcommand(1);

  std::string input, output;
  GridFlags enc_flags;
  auto* enc = app.add_subcommand("encode", "Compress a PLY point cloud into a .gsgc frame");
  enc->add_option("input", input, "Source .ply")->required();
  enc->add_option("output", output, "Destination .gsgc")->required();
  add_grid_flags(enc, enc_flags);

  std::string din, dout;
  bool dec_ascii = false;
  auto* dec = app.add_subcommand("decode", "Reconstruct a PLY point cloud from a .gsgc frame");
  dec->add_option("input", din, "Source .gsgc")->required();
  dec->add_option("output", dout, "Destination .ply")->required();
  dec->add_flag("--ascii", dec_ascii, "Write ascii PLY instead of binary");

  std::string bench_dir;
  std::vector<std::string> bench_reports;
  unsigned bench_threads = 0;
  bool bench_strict = false;
  GridFlags bench_flags;
  auto* ben = app.add_subcommand("bench", "Encode/decode every PLY in a directory and report rates");
  ben->add_option("dir", bench_dir, "Directory of .ply frames")->required();
  ben->add_option("--report", bench_reports, "Write the table to a file (.csv or .md; repeatable)");
  ben->add_option("--threads", bench_threads, "Worker threads (0 = hardware)");
  ben->add_flag("--strict", bench_strict, "Fail unless every frame verifies lossless");
  add_grid_flags(ben, bench_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*enc)
      return cmd_encode(input, output, enc_flags);
    if (*dec)
      return cmd_decode(din, dout, dec_ascii);
    if (*ben)
      return cmd_bench(bench_dir, bench_reports, bench_threads, bench_strict, bench_flags);
  } catch (const gsgc::CodecError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}

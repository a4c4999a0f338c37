#ifndef GSGC_REPORT_HPP
#define GSGC_REPORT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gsgc {

// Per-frame benchmark row. Baselines are explicit: input_xyz_bytes is
// 12 bytes/point (three float32 components), input_total_bytes the source
// PLY byte size. coded_xyz_bytes counts the geometry payload plus the
// geometry share of the container (fixed header and payload length field).
struct FrameReport {
  std::string name;
  uint64_t points = 0;
  int depth = 0;
  uint64_t input_total_bytes = 0;
  uint64_t input_xyz_bytes = 0;
  uint64_t coded_total_bytes = 0;
  uint64_t coded_xyz_bytes = 0;
  uint64_t geometry_payload_bytes = 0;
  double total_savings_pct = 0.0;
  double xyz_savings_pct = 0.0;
  double enc_seconds = 0.0;
  double dec_seconds = 0.0;
  bool lossless_verified = false;
  bool failed = false;
  std::string error;
};

// 100 * (1 - coded/baseline)
double savings_pct(double coded, double baseline);

// Aggregate row over the successful frames (byte counts summed, times
// summed, savings recomputed from the sums).
FrameReport aggregate(std::span<const FrameReport> rows);

std::string report_csv(std::span<const FrameReport> rows);

// Markdown table: Frame | Size (MB) | Total Rate | XYZ Size (MB) |
// XYZ Rate | Enc Time (s) | Dec Time (s) | Lossless
std::string report_markdown(std::span<const FrameReport> rows);

}  // namespace gsgc

#endif

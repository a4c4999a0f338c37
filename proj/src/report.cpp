#include "gsgc/report.hpp"

#include <algorithm>
#include <cstdio>

namespace gsgc {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string mb(uint64_t bytes) {
  return fmt("%.4f", static_cast<double>(bytes) / 1e6);
}

}  // namespace

double savings_pct(double coded, double baseline) {
  if (baseline <= 0.0)
    return 0.0;
  return 100.0 * (1.0 - coded / baseline);
}

FrameReport aggregate(std::span<const FrameReport> rows) {
  FrameReport a;
  a.name = "all";
  for (const auto& r : rows) {
    if (r.failed)
      continue;
    a.points += r.points;
    a.depth = std::max(a.depth, r.depth);
    a.input_total_bytes += r.input_total_bytes;
    a.input_xyz_bytes += r.input_xyz_bytes;
    a.coded_total_bytes += r.coded_total_bytes;
    a.coded_xyz_bytes += r.coded_xyz_bytes;
    a.geometry_payload_bytes += r.geometry_payload_bytes;
    a.enc_seconds += r.enc_seconds;
    a.dec_seconds += r.dec_seconds;
  }
  a.total_savings_pct = savings_pct(static_cast<double>(a.coded_total_bytes),
                                    static_cast<double>(a.input_total_bytes));
  a.xyz_savings_pct = savings_pct(static_cast<double>(a.coded_xyz_bytes),
                                  static_cast<double>(a.input_xyz_bytes));
  a.lossless_verified = true;
  for (const auto& r : rows)
    if (!r.failed && !r.lossless_verified)
      a.lossless_verified = false;
  return a;
}

std::string report_csv(std::span<const FrameReport> rows) {
  std::string out =
    "frame,points,depth,input_total_bytes,input_xyz_bytes,coded_total_bytes,"
    "coded_xyz_bytes,geometry_payload_bytes,total_savings_pct,xyz_savings_pct,"
    "enc_seconds,dec_seconds,lossless_verified,error\n";
  for (const auto& r : rows) {
    out += r.name + ',';
    out += std::to_string(r.points) + ',';
    out += std::to_string(r.depth) + ',';
    out += std::to_string(r.input_total_bytes) + ',';
    out += std::to_string(r.input_xyz_bytes) + ',';
    out += std::to_string(r.coded_total_bytes) + ',';
    out += std::to_string(r.coded_xyz_bytes) + ',';
    out += std::to_string(r.geometry_payload_bytes) + ',';
    out += fmt("%.2f", r.total_savings_pct) + ',';
    out += fmt("%.2f", r.xyz_savings_pct) + ',';
    out += fmt("%.3f", r.enc_seconds) + ',';
    out += fmt("%.3f", r.dec_seconds) + ',';
    out += r.lossless_verified ? "true" : "false";
    out += ',';
    out += r.error;
    out += '\n';
  }
  return out;
}

std::string report_markdown(std::span<const FrameReport> rows) {
  std::string out =
    "| Frame | Size (MB) | Total Rate | XYZ Size (MB) | XYZ Rate | Enc Time (s) | Dec Time (s) | Lossless |\n"
    "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    if (r.failed) {
      out += "| " + r.name + " | skipped: " + r.error + " | | | | | | |\n";
      continue;
    }
    out += "| " + r.name;
    out += " | " + mb(r.coded_total_bytes);
    out += " | " + fmt("%.2f", r.total_savings_pct) + "\\%";
    out += " | " + mb(r.coded_xyz_bytes);
    out += " | " + fmt("%.2f", r.xyz_savings_pct) + "\\%";
    out += " | " + fmt("%.3f", r.enc_seconds);
    out += " | " + fmt("%.3f", r.dec_seconds);
    out += " | ";
    out += r.lossless_verified ? "yes" : "NO";
    out += " |\n";
  }
  return out;
}

}  // namespace gsgc

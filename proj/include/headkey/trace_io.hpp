#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "headkey/gesture.hpp"
#include "headkey/signal.hpp"

namespace headkey {

// Trace CSV: header `t_ms,gx,gy,gz`, integer milliseconds, decimal deg/s,
// LF line endings. Parse errors carry the 1-based line number.
std::vector<ImuSample> read_trace(std::istream& in);
std::vector<ImuSample> read_trace_file(const std::filesystem::path& path);
void write_trace(std::ostream& out, const std::vector<ImuSample>& samples);
void write_trace_file(const std::filesystem::path& path,
                      const std::vector<ImuSample>& samples);

// Ground truth for a synthetic trace: header `class,start_ms,end_ms`.
struct GestureLabel {
  GestureClass cls = GestureClass::Noise;
  double start_ms = 0.0;
  double end_ms = 0.0;

  friend bool operator==(const GestureLabel&, const GestureLabel&) = default;
};

std::vector<GestureLabel> read_labels(std::istream& in);
std::vector<GestureLabel> read_labels_file(const std::filesystem::path& path);
void write_labels(std::ostream& out, const std::vector<GestureLabel>& labels);
void write_labels_file(const std::filesystem::path& path,
                       const std::vector<GestureLabel>& labels);

// Shortest round-trip decimal for a double.
std::string format_decimal(double v);

}  // namespace headkey

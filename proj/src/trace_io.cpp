#include "headkey/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "headkey/errors.hpp"
#include "text_util.hpp"

namespace headkey {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InvalidInput("line " + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  return out;
}

}  // namespace

std::string format_decimal(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<ImuSample> read_trace(std::istream& in) {
  std::vector<ImuSample> out;
  std::string line;
  std::size_t no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++no;
    detail::strip_cr(line);
    if (line.empty()) continue;
    if (!header) {
      if (line != "t_ms,gx,gy,gz") fail(no, "expected header t_ms,gx,gy,gz");
      header = true;
      continue;
    }
    auto fields = detail::split(line, ',');
    if (fields.size() != 4) fail(no, "expected 4 fields");
    ImuSample s;
    long long t = 0;
    if (!detail::parse_int(fields[0], t) || t < 0) fail(no, "bad t_ms");
    s.t_ms = static_cast<double>(t);
    if (!detail::parse_double(fields[1], s.gx) || !detail::parse_double(fields[2], s.gy) ||
        !detail::parse_double(fields[3], s.gz))
      fail(no, "bad axis value");
    if (!std::isfinite(s.gx) || !std::isfinite(s.gy) || !std::isfinite(s.gz))
      fail(no, "non-finite axis value");
    if (!out.empty() && s.t_ms < out.back().t_ms) fail(no, "timestamps out of order");
    out.push_back(s);
  }
  if (!header) throw InvalidInput("empty trace file (missing header)");
  return out;
}

std::vector<ImuSample> read_trace_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  try {
    return read_trace(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void write_trace(std::ostream& out, const std::vector<ImuSample>& samples) {
  out << "t_ms,gx,gy,gz\n";
  for (const auto& s : samples) {
    out << std::llround(s.t_ms) << ',' << format_decimal(s.gx) << ','
        << format_decimal(s.gy) << ',' << format_decimal(s.gz) << '\n';
  }
}

void write_trace_file(const std::filesystem::path& path,
                      const std::vector<ImuSample>& samples) {
  auto out = open_out(path);
  write_trace(out, samples);
}

std::vector<GestureLabel> read_labels(std::istream& in) {
  std::vector<GestureLabel> out;
  std::string line;
  std::size_t no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++no;
    detail::strip_cr(line);
    if (line.empty()) continue;
    if (!header) {
      if (line != "class,start_ms,end_ms") fail(no, "expected header class,start_ms,end_ms");
      header = true;
      continue;
    }
    auto fields = detail::split(line, ',');
    if (fields.size() != 3) fail(no, "expected 3 fields");
    auto cls = parse_gesture(fields[0]);
    if (!cls) fail(no, "unknown gesture class '" + std::string(fields[0]) + "'");
    GestureLabel l{*cls, 0.0, 0.0};
    if (!detail::parse_double(fields[1], l.start_ms) ||
        !detail::parse_double(fields[2], l.end_ms) || l.end_ms <= l.start_ms)
      fail(no, "bad label interval");
    out.push_back(l);
  }
  return out;
}

std::vector<GestureLabel> read_labels_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_labels(in);
}

void write_labels(std::ostream& out, const std::vector<GestureLabel>& labels) {
  out << "class,start_ms,end_ms\n";
  for (const auto& l : labels) {
    out << gesture_name(l.cls) << ',' << format_decimal(l.start_ms) << ','
        << format_decimal(l.end_ms) << '\n';
  }
}

void write_labels_file(const std::filesystem::path& path,
                       const std::vector<GestureLabel>& labels) {
  auto out = open_out(path);
  write_labels(out, labels);
}

}  // namespace headkey

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "headkey/gesture.hpp"
#include "headkey/signal.hpp"
#include "headkey/trace_io.hpp"

namespace headkey {

struct ScriptStep {
  GestureClass gesture = GestureClass::SingleLeftTap;
  double gap_ms = 1000.0;  // quiet time after the gesture
};

/// A sequence of gestures to render as a gyroscope trace. Noise steps
/// render a walking-like burst of six alternating pulses.
struct GestureScript {
  std::vector<ScriptStep> steps;
  double amplitude = 90.0;  // deg/s
  double stroke_ms = 200.0;
  double noise_sigma = 0.0;  // per-axis Gaussian noise, deg/s
  double lead_in_ms = 500.0;
  double double_gap_ms = 100.0;  // between the taps of a double tap
  std::uint64_t seed = 1;
};

struct SynthResult {
  std::vector<ImuSample> samples;
  std::vector<GestureLabel> labels;
  std::vector<std::string> warnings;
};

/// Renders canonical waveforms: taps are a half-sine out and back on the yaw
/// axis (gz, left positive), the down tap is a pitch (gx) dip and return,
/// slides are out / double-length across / back. Samples are spaced at the
/// configured sample rate starting at t = 0.
SynthResult synth_trace(const GestureScript& script, const SegmentationConfig& cfg = {});

// Key=value header lines (amplitude, stroke_ms, noise_sigma, lead_in_ms,
// double_gap_ms, seed) followed by `GestureName [gap_ms]` lines; `#` comments.
GestureScript parse_script(std::istream& in);
GestureScript load_script(const std::filesystem::path& path);

}  // namespace headkey

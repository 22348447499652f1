#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "headkey/noise.hpp"
#include "headkey/recognizer.hpp"
#include "headkey/signal.hpp"
#include "headkey/sweep.hpp"
#include "headkey/synth.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return HEADKEY_DATA_DIR; }
inline std::string dictionary_path() { return (data_dir() / "words_10k.tsv").string(); }
inline std::string phrases_path() { return (data_dir() / "phrases40.txt").string(); }

/// Rectangular energy on gx at 100 Hz: each piece is (duration_ms, level).
inline std::vector<headkey::ImuSample> pulses(
    const std::vector<std::pair<double, double>>& pieces, double period_ms = 10.0) {
  std::vector<headkey::ImuSample> out;
  double t = 0.0;
  for (const auto& [dur, level] : pieces) {
    const auto n = static_cast<std::size_t>(std::llround(dur / period_ms));
    for (std::size_t i = 0; i < n; ++i, t += period_ms) out.push_back({t, level, 0.0, 0.0});
  }
  return out;
}

inline headkey::GestureScript script_of(const std::vector<headkey::GestureClass>& gestures,
                                        double amplitude = 90.0, double gap_ms = 1000.0) {
  headkey::GestureScript s;
  s.amplitude = amplitude;
  for (auto g : gestures) s.steps.push_back({g, gap_ms});
  return s;
}

inline headkey::LabelledTrace labelled(const headkey::GestureScript& script, std::string name = "t",
                                       const headkey::SegmentationConfig& cfg = {}) {
  auto r = headkey::synth_trace(script, cfg);
  return {std::move(name), std::move(r.samples), std::move(r.labels)};
}

/// One clean template per gesture class from the generator.
inline headkey::TemplateSet generator_templates(const headkey::SegmentationConfig& cfg = {}) {
  std::vector<headkey::GestureClass> all(headkey::kAllGestures.begin(), headkey::kAllGestures.end());
  const std::vector<headkey::LabelledTrace> traces{labelled(script_of(all), "all", cfg)};
  return headkey::build_templates(traces, cfg);
}

/// Noise rejector trained on generator taps/slides versus generator noise bursts.
inline headkey::NoiseClassifier generator_noise_model(const headkey::SegmentationConfig& cfg = {}) {
  std::vector<headkey::GestureUnit> gestures, noise;
  for (double amp : {60.0, 90.0, 120.0}) {
    std::vector<headkey::GestureClass> all(headkey::kAllGestures.begin(),
                                           headkey::kAllGestures.end());
    auto g = headkey::segment_trace(headkey::synth_trace(script_of(all, amp), cfg).samples, cfg);
    gestures.insert(gestures.end(), g.begin(), g.end());
    auto n = headkey::segment_trace(
        headkey::synth_trace(script_of({headkey::GestureClass::Noise, headkey::GestureClass::Noise}, amp),
                             cfg)
            .samples,
        cfg);
    noise.insert(noise.end(), n.begin(), n.end());
  }
  return headkey::train_noise_classifier(gestures, noise, cfg);
}

inline std::vector<headkey::GestureClass> random_gestures(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, headkey::kGestureCount - 1);
  std::vector<headkey::GestureClass> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(headkey::kAllGestures[pick(rng)]);
  return out;
}

}  // namespace fixtures

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "headkey/keyboard.hpp"
#include "headkey/noise.hpp"
#include "headkey/predictor.hpp"
#include "headkey/recognizer.hpp"
#include "headkey/signal.hpp"

namespace headkey {

/// Every tunable constant of the pipeline.
struct EngineConfig {
  SegmentationConfig segmentation;
  RecognizerConfig recognizer;
  double prominence_frac = kDefaultProminenceFrac;
  SpatialModel spatial;
  PredictorConfig predictor;

  void validate() const;
};

/// Applies `key = value` lines on top of `base`. Keys:
///   peak_threshold left_buffer_ms right_buffer_ms tolerance_ms sample_rate_hz
///   max_unit_ms k z_normalize prominence_frac p_same p_adjacent p_diagonal
///   alpha max_extra_letters top_k
/// Blank lines and `#` comments are ignored; unknown keys are errors.
EngineConfig parse_config(std::istream& in, EngineConfig base = {});
EngineConfig load_config(const std::filesystem::path& path, EngineConfig base = {});

/// Sets one key; throws InvalidInput on an unknown key or bad value.
void set_config_value(EngineConfig& cfg, std::string_view key, std::string_view value);

}  // namespace headkey

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "headkey/recognizer.hpp"
#include "headkey/signal.hpp"
#include "headkey/trace_io.hpp"

namespace headkey {

struct LabelledTrace {
  std::string name;
  std::vector<ImuSample> samples;
  std::vector<GestureLabel> labels;
};

struct SweepRow {
  double threshold = 0.0;
  double accuracy = 0.0;         // correctly recognized gesture labels / labels
  double mean_lasting_ms = 0.0;  // mean duration of detected units
  std::size_t labels = 0;
  std::size_t units = 0;
  std::size_t correct = 0;
  bool no_detection = false;
};

inline const std::vector<double> kDefaultThresholds = {10, 20, 30, 40, 50};

/// Re-segments and re-classifies every trace at each threshold (all other
/// segmentation parameters from `base`). A label counts as correct when
/// exactly one unit overlaps it, that unit overlaps no other label, and the
/// unit classifies as the label's class. Throws InvalidInput for a trace
/// without labels.
std::vector<SweepRow> sweep_threshold(std::span<const LabelledTrace> traces,
                                      std::span<const double> thresholds,
                                      const TemplateSet& templates,
                                      const SegmentationConfig& base = {});

/// Segments each trace and keeps every unit that pairs one-to-one with a
/// non-noise label as a template of that label's class.
TemplateSet build_templates(std::span<const LabelledTrace> traces,
                            const SegmentationConfig& seg = {},
                            const RecognizerConfig& rec = {});

/// Every `<name>.csv` in `dir` paired with `<name>.labels`, sorted by name.
std::vector<LabelledTrace> load_labelled_traces(const std::filesystem::path& dir);

}  // namespace headkey

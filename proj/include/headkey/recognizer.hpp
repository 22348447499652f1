#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "headkey/dtw.hpp"
#include "headkey/gesture.hpp"
#include "headkey/signal.hpp"

namespace headkey {

struct RecognizerConfig {
  std::size_t k = 1;
  bool z_normalize = false;
};

struct Template {
  GestureSeries series;    // as stored
  GestureSeries prepared;  // what DTW compares against (normalized if enabled)
  GestureClass cls = GestureClass::SingleLeftTap;
  std::size_t insertion_index = 0;
};

/// Labelled reference series for nearest-neighbour classification. Noise is
/// never a template class.
class TemplateSet {
 public:
  explicit TemplateSet(RecognizerConfig cfg = {});

  /// Appends a template and returns its insertion index.
  std::size_t add(GestureSeries series, GestureClass cls);
  std::size_t add(const GestureUnit& unit, GestureClass cls) {
    return add(GestureSeries::from_unit(unit), cls);
  }

  const std::vector<Template>& entries() const { return entries_; }
  const RecognizerConfig& config() const { return cfg_; }
  std::size_t size() const { return entries_.size(); }

  /// True once every one of the seven gesture classes has a template.
  bool ready() const;

  GestureSeries prepare(const GestureSeries& query) const;

 private:
  RecognizerConfig cfg_;
  std::vector<Template> entries_;
};

struct Classification {
  GestureClass cls = GestureClass::Noise;
  double distance = 0.0;            // to the nearest template of `cls`
  std::size_t template_index = 0;   // that template's insertion index

  friend bool operator==(const Classification&, const Classification&) = default;
};

// Distance from the (already prepared) query to every template, in insertion
// order. The parallel kernel and the serial reference must agree bit-for-bit.
std::vector<double> template_distances(const GestureSeries& prepared_query,
                                       const TemplateSet& set);
std::vector<double> template_distances_serial(const GestureSeries& prepared_query,
                                              const TemplateSet& set);

/// k-NN vote over `distances`. Neighbours are ordered by (distance, insertion
/// index); the vote is broken by smaller summed distance, then by the earliest
/// insertion index.
Classification vote(std::span<const double> distances, const TemplateSet& set);

/// Throws NotReady unless `set.ready()`.
Classification classify(const GestureSeries& query, const TemplateSet& set);
Classification classify(const GestureUnit& unit, const TemplateSet& set);
Classification classify_serial(const GestureSeries& query, const TemplateSet& set);

/// Classifies many units, parallel over units. Results are in input order.
std::vector<Classification> classify_all(std::span<const GestureUnit> units,
                                         const TemplateSet& set);

// Directory of `<Class>_<index>.csv` trace files plus `manifest.txt` listing
// the file names in insertion order.
void save_templates(const std::filesystem::path& dir, const TemplateSet& set);
TemplateSet load_templates(const std::filesystem::path& dir, RecognizerConfig cfg = {});

}  // namespace headkey

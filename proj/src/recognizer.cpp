#include "headkey/recognizer.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <numeric>
#include <string>

#include "headkey/errors.hpp"
#include "headkey/trace_io.hpp"
#include "text_util.hpp"

namespace headkey {

TemplateSet::TemplateSet(RecognizerConfig cfg) : cfg_(cfg) {
  if (cfg_.k < 1) throw InvalidInput("k must be >= 1");
}

std::size_t TemplateSet::add(GestureSeries series, GestureClass cls) {
  if (cls == GestureClass::Noise) throw InvalidInput("Noise cannot be a template class");
  if (series.empty()) throw InvalidInput("template series is empty");
  Template t;
  t.prepared = prepare(series);
  t.series = std::move(series);
  t.cls = cls;
  t.insertion_index = entries_.size();
  entries_.push_back(std::move(t));
  return entries_.back().insertion_index;
}

bool TemplateSet::ready() const {
  std::array<bool, kGestureCount> seen{};
  for (const auto& t : entries_) seen[gesture_index(t.cls)] = true;
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

GestureSeries TemplateSet::prepare(const GestureSeries& query) const {
  return cfg_.z_normalize ? z_normalized(query) : query;
}

std::vector<double> template_distances_serial(const GestureSeries& prepared_query,
                                              const TemplateSet& set) {
  const auto& entries = set.entries();
  std::vector<double> out(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    out[i] = dtw_distance(prepared_query, entries[i].prepared);
  }
  return out;
}

std::vector<double> template_distances(const GestureSeries& prepared_query,
                                       const TemplateSet& set) {
  if (prepared_query.empty()) throw InvalidInput("dtw_distance: empty series");
  const auto& entries = set.entries();
  const auto n = static_cast<std::ptrdiff_t>(entries.size());
  std::vector<double> out(entries.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        dtw_distance(prepared_query, entries[static_cast<std::size_t>(i)].prepared);
  }
  return out;
}

Classification vote(std::span<const double> distances, const TemplateSet& set) {
  const auto& entries = set.entries();
  if (distances.size() != entries.size())
    throw InvalidInput("distance count does not match template count");
  if (entries.empty()) throw NotReady("template set is empty");

  std::vector<std::size_t> order(entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t k = std::min(set.config().k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.end(), [&](std::size_t a, std::size_t b) {
                      if (distances[a] != distances[b]) return distances[a] < distances[b];
                      return entries[a].insertion_index < entries[b].insertion_index;
                    });

  struct Tally {
    std::size_t votes = 0;
    double sum = 0.0;
    std::size_t first = 0;  // nearest neighbour of this class (position in order)
  };
  std::array<Tally, kGestureCount> tally{};
  for (std::size_t r = 0; r < k; ++r) {
    auto& t = tally[gesture_index(entries[order[r]].cls)];
    if (t.votes == 0) t.first = r;
    ++t.votes;
    t.sum += distances[order[r]];
  }

  std::size_t best = kGestureCount;
  for (std::size_t c = 0; c < kGestureCount; ++c) {
    if (tally[c].votes == 0) continue;
    if (best == kGestureCount) {
      best = c;
      continue;
    }
    const auto& a = tally[c];
    const auto& b = tally[best];
    if (a.votes != b.votes) {
      if (a.votes > b.votes) best = c;
    } else if (a.sum != b.sum) {
      if (a.sum < b.sum) best = c;
    } else if (entries[order[a.first]].insertion_index <
               entries[order[b.first]].insertion_index) {
      best = c;
    }
  }
  const auto& nearest = entries[order[tally[best].first]];
  return {nearest.cls, distances[order[tally[best].first]], nearest.insertion_index};
}

namespace {
void require_ready(const TemplateSet& set) {
  if (!set.ready()) throw NotReady("template set lacks a template for some gesture class");
}
}  // namespace

Classification classify(const GestureSeries& query, const TemplateSet& set) {
  require_ready(set);
  const auto prepared = set.prepare(query);
  const auto d = template_distances(prepared, set);
  return vote(d, set);
}

Classification classify(const GestureUnit& unit, const TemplateSet& set) {
  return classify(GestureSeries::from_unit(unit), set);
}

Classification classify_serial(const GestureSeries& query, const TemplateSet& set) {
  require_ready(set);
  if (query.empty()) throw InvalidInput("dtw_distance: empty series");
  const auto prepared = set.prepare(query);
  const auto d = template_distances_serial(prepared, set);
  return vote(d, set);
}

std::vector<Classification> classify_all(std::span<const GestureUnit> units,
                                         const TemplateSet& set) {
  require_ready(set);
  const auto n = static_cast<std::ptrdiff_t>(units.size());
  std::vector<Classification> out(units.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto& u = units[static_cast<std::size_t>(i)];
    const auto q = set.prepare(GestureSeries::from_unit(u));
    out[static_cast<std::size_t>(i)] = vote(template_distances_serial(q, set), set);
  }
  return out;
}

void save_templates(const std::filesystem::path& dir, const TemplateSet& set) {
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.txt", std::ios::binary);
  if (!manifest) throw InvalidInput("cannot write " + (dir / "manifest.txt").string());
  for (const auto& t : set.entries()) {
    const std::string name = std::string(gesture_name(t.cls)) + "_" +
                             std::to_string(t.insertion_index) + ".csv";
    std::vector<ImuSample> samples;
    samples.reserve(t.series.size());
    for (std::size_t i = 0; i < t.series.size(); ++i) {
      const auto& p = t.series.points[i];
      samples.push_back({static_cast<double>(i) * 10.0, p[0], p[1], p[2]});
    }
    write_trace_file(dir / name, samples);
    manifest << name << '\n';
  }
}

TemplateSet load_templates(const std::filesystem::path& dir, RecognizerConfig cfg) {
  std::ifstream manifest(dir / "manifest.txt");
  if (!manifest) throw InvalidInput("missing template manifest in " + dir.string());
  TemplateSet set(cfg);
  std::string line;
  std::size_t no = 0;
  while (std::getline(manifest, line)) {
    ++no;
    detail::strip_cr(line);
    if (detail::trim(line).empty()) continue;
    const auto us = line.rfind('_');
    const auto cls = us == std::string::npos ? std::nullopt
                                             : parse_gesture(std::string_view(line).substr(0, us));
    if (!cls || *cls == GestureClass::Noise)
      throw InvalidInput("manifest line " + std::to_string(no) + ": bad template name '" +
                         line + "'");
    set.add(GestureSeries::from_samples(read_trace_file(dir / line)), *cls);
  }
  return set;
}

}  // namespace headkey

#include "headkey/sweep.hpp"

#include <algorithm>

#include "headkey/errors.hpp"

namespace headkey {

namespace {

bool overlaps(const GestureUnit& u, const GestureLabel& l) {
  return u.start_ms < l.end_ms && l.start_ms < u.end_ms;
}

struct TraceTally {
  std::size_t labels = 0;
  std::size_t units = 0;
  std::size_t correct = 0;
  double duration_sum = 0.0;
};

TraceTally score_trace(const LabelledTrace& trace, const SegmentationConfig& cfg,
                       const TemplateSet& templates) {
  TraceTally t;
  const auto units = segment_trace(trace.samples, cfg);
  t.units = units.size();
  for (const auto& u : units) t.duration_sum += u.duration_ms();

  std::vector<GestureClass> cls;
  cls.reserve(units.size());
  for (const auto& u : units) cls.push_back(classify_serial(GestureSeries::from_unit(u), templates).cls);

  for (const auto& label : trace.labels) {
    if (label.cls == GestureClass::Noise) continue;
    ++t.labels;
    std::size_t hits = 0, hit = 0;
    for (std::size_t i = 0; i < units.size(); ++i) {
      if (overlaps(units[i], label)) {
        ++hits;
        hit = i;
      }
    }
    if (hits != 1) continue;
    const auto shared = std::count_if(trace.labels.begin(), trace.labels.end(),
                                      [&](const GestureLabel& l) { return overlaps(units[hit], l); });
    if (shared == 1 && cls[hit] == label.cls) ++t.correct;
  }
  return t;
}

}  // namespace

std::vector<SweepRow> sweep_threshold(std::span<const LabelledTrace> traces,
                                      std::span<const double> thresholds,
                                      const TemplateSet& templates,
                                      const SegmentationConfig& base) {
  for (const auto& tr : traces) {
    if (tr.labels.empty()) throw InvalidInput("trace '" + tr.name + "' has no labels");
  }
  if (!templates.ready()) throw NotReady("template set lacks a template for some gesture class");

  std::vector<SegmentationConfig> cfgs;
  for (double thr : thresholds) {
    SegmentationConfig c = base;
    c.peak_threshold = thr;
    c.validate();
    cfgs.push_back(c);
  }

  const std::size_t nt = traces.size();
  std::vector<TraceTally> cells(cfgs.size() * nt);
  const auto total = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    cells[idx] = score_trace(traces[idx % nt], cfgs[idx / nt], templates);
  }

  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < cfgs.size(); ++k) {
    SweepRow row;
    row.threshold = cfgs[k].peak_threshold;
    double duration = 0.0;
    for (std::size_t j = 0; j < nt; ++j) {
      const auto& c = cells[k * nt + j];
      row.labels += c.labels;
      row.units += c.units;
      row.correct += c.correct;
      duration += c.duration_sum;
    }
    row.no_detection = row.units == 0;
    if (row.labels > 0)
      row.accuracy = static_cast<double>(row.correct) / static_cast<double>(row.labels);
    if (row.units > 0) row.mean_lasting_ms = duration / static_cast<double>(row.units);
    rows.push_back(row);
  }
  return rows;
}

TemplateSet build_templates(std::span<const LabelledTrace> traces, const SegmentationConfig& seg,
                            const RecognizerConfig& rec) {
  TemplateSet set(rec);
  for (const auto& tr : traces) {
    const auto units = segment_trace(tr.samples, seg);
    for (const auto& u : units) {
      const GestureLabel* match = nullptr;
      std::size_t hits = 0;
      for (const auto& l : tr.labels) {
        if (overlaps(u, l)) {
          ++hits;
          match = &l;
        }
      }
      if (hits != 1 || match->cls == GestureClass::Noise) continue;
      const auto owners = std::count_if(units.begin(), units.end(),
                                        [&](const GestureUnit& o) { return overlaps(o, *match); });
      if (owners == 1) set.add(u, match->cls);
    }
  }
  return set;
}

std::vector<LabelledTrace> load_labelled_traces(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw InvalidInput("not a directory: " + dir.string());
  std::vector<std::filesystem::path> csvs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ".csv") csvs.push_back(entry.path());
  }
  std::sort(csvs.begin(), csvs.end());
  std::vector<LabelledTrace> out;
  for (const auto& csv : csvs) {
    auto labels_path = csv;
    labels_path.replace_extension(".labels");
    if (!std::filesystem::exists(labels_path))
      throw InvalidInput("trace '" + csv.string() + "' has no labels file");
    out.push_back({csv.stem().string(), read_trace_file(csv), read_labels_file(labels_path)});
  }
  return out;
}

}  // namespace headkey

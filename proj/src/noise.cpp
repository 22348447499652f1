#include "headkey/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "headkey/errors.hpp"
#include "headkey/trace_io.hpp"
#include "text_util.hpp"

namespace headkey {

std::size_t count_peaks(std::span<const double> energy, double threshold,
                        double prominence_frac) {
  if (energy.empty()) return 0;
  std::vector<double> p;
  p.reserve(energy.size() + 2);
  p.push_back(0.0);
  p.insert(p.end(), energy.begin(), energy.end());
  p.push_back(0.0);
  const double top = *std::max_element(energy.begin(), energy.end());
  const double min_prominence = prominence_frac * top;

  std::size_t peaks = 0;
  std::size_t i = 1;
  while (i + 1 < p.size()) {
    if (!(p[i] > p[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < p.size() && p[j + 1] == p[i]) ++j;
    if (j + 1 < p.size() && p[j + 1] < p[i]) {
      const double h = p[i];
      if (h >= threshold) {
        double left_min = h;
        for (std::size_t k = i; k-- > 0;) {
          if (p[k] > h) break;
          left_min = std::min(left_min, p[k]);
        }
        double right_min = h;
        for (std::size_t k = j + 1; k < p.size(); ++k) {
          if (p[k] > h) break;
          right_min = std::min(right_min, p[k]);
        }
        if (h - std::max(left_min, right_min) >= min_prominence) ++peaks;
      }
    }
    i = j + 1;
  }
  return peaks;
}

NoiseFeatures noise_features(const GestureUnit& unit, const SegmentationConfig& cfg,
                             double prominence_frac) {
  const auto e = energy_curve(unit.samples);
  NoiseFeatures f;
  f.duration_ms = unit.duration_ms();
  if (e.empty()) return f;
  f.peak_count = count_peaks(e, cfg.peak_threshold, prominence_frac);
  double sum = 0.0;
  for (double v : e) sum += v;
  f.mean_energy = sum / static_cast<double>(e.size());
  f.max_energy = *std::max_element(e.begin(), e.end());
  return f;
}

NoiseClassifier::NoiseClassifier(Vector mean, Vector stddev, Vector weights, double bias)
    : mean_(mean), stddev_(stddev), weights_(weights), bias_(bias), trained_(true) {
  for (double s : stddev_) {
    if (!(s > 0.0)) throw InvalidInput("noise model stddev must be > 0");
  }
}

double NoiseClassifier::decision(const NoiseFeatures& f) const {
  if (!trained_) throw NotReady("noise classifier is not trained");
  const auto x = f.as_array();
  double d = bias_;
  for (std::size_t i = 0; i < x.size(); ++i) d += weights_[i] * (x[i] - mean_[i]) / stddev_[i];
  return d;
}

void NoiseClassifier::save(const std::filesystem::path& path) const {
  if (!trained_) throw NotReady("noise classifier is not trained");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  for (const auto* v : {&mean_, &stddev_, &weights_}) {
    for (double x : *v) out << format_decimal(x) << '\n';
  }
  out << format_decimal(bias_) << '\n';
}

NoiseClassifier NoiseClassifier::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    detail::strip_cr(line);
    if (detail::trim(line).empty()) continue;
    double v = 0.0;
    if (!detail::parse_double(line, v) || !std::isfinite(v))
      throw InvalidInput(path.string() + ": line " + std::to_string(no) + ": bad number");
    values.push_back(v);
  }
  if (values.size() != 13)
    throw InvalidInput(path.string() + ": expected 13 values, got " +
                       std::to_string(values.size()));
  Vector mean, sd, w;
  std::copy_n(values.begin(), 4, mean.begin());
  std::copy_n(values.begin() + 4, 4, sd.begin());
  std::copy_n(values.begin() + 8, 4, w.begin());
  return NoiseClassifier(mean, sd, w, values[12]);
}

namespace {

using Augmented = std::array<double, 5>;  // standardized features + constant 1

double dot(const Augmented& w, const Augmented& x) {
  double d = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) d += w[i] * x[i];
  return d;
}

}  // namespace

NoiseClassifier train_noise_classifier(std::span<const NoiseFeatures> gestures,
                                       std::span<const NoiseFeatures> noise,
                                       const NoiseTrainingOptions& opts) {
  if (gestures.empty() || noise.empty())
    throw InvalidInput("noise classifier needs at least one sample of each class");
  for (const auto& g : gestures) {
    for (const auto& n : noise) {
      if (g.as_array() == n.as_array())
        throw InvalidInput("identical feature vector labelled both gesture and noise");
    }
  }
  if (!(opts.lambda > 0.0) || opts.epochs == 0)
    throw InvalidInput("training needs lambda > 0 and at least one epoch");

  const std::size_t n = gestures.size() + noise.size();
  std::vector<std::array<double, 4>> raw;
  std::vector<double> label;
  raw.reserve(n);
  label.reserve(n);
  for (const auto& g : gestures) {
    raw.push_back(g.as_array());
    label.push_back(-1.0);
  }
  for (const auto& x : noise) {
    raw.push_back(x.as_array());
    label.push_back(1.0);
  }

  NoiseClassifier::Vector mean{}, sd{};
  for (std::size_t f = 0; f < 4; ++f) {
    double m = 0.0;
    for (const auto& r : raw) m += r[f];
    m /= static_cast<double>(n);
    double v = 0.0;
    for (const auto& r : raw) v += (r[f] - m) * (r[f] - m);
    double s = std::sqrt(v / static_cast<double>(n));
    mean[f] = m;
    sd[f] = s > 0.0 ? s : 1.0;
  }
  std::vector<Augmented> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t f = 0; f < 4; ++f) x[i][f] = (raw[i][f] - mean[f]) / sd[f];
    x[i][4] = 1.0;
  }

  auto evaluate = [&](const Augmented& w, std::size_t& errors) {
    errors = 0;
    double hinge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = dot(w, x[i]);
      // Zero is a gesture, matching the decision rule.
      const bool says_noise = d > 0.0;
      if (says_noise != (label[i] > 0.0)) ++errors;
      hinge += std::max(0.0, 1.0 - label[i] * d);
    }
    return 0.5 * opts.lambda * dot(w, w) + hinge / static_cast<double>(n);
  };

  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  Augmented w{};
  Augmented best = w;
  std::size_t best_errors = 0;
  double best_obj = evaluate(w, best_errors);

  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    for (std::size_t step = 0; step < n; ++step) {
      ++t;
      const std::size_t i = pick(rng);
      const double eta = 1.0 / (opts.lambda * static_cast<double>(t));
      const double margin = label[i] * dot(w, x[i]);
      for (auto& wi : w) wi *= 1.0 - eta * opts.lambda;
      if (margin < 1.0) {
        for (std::size_t f = 0; f < w.size(); ++f) w[f] += eta * label[i] * x[i][f];
      }
    }
    std::size_t errors = 0;
    const double obj = evaluate(w, errors);
    if (errors < best_errors || (errors == best_errors && obj < best_obj)) {
      best = w;
      best_errors = errors;
      best_obj = obj;
    }
  }

  return NoiseClassifier(mean, sd, {best[0], best[1], best[2], best[3]}, best[4]);
}

NoiseClassifier train_noise_classifier(std::span<const GestureUnit> gestures,
                                       std::span<const GestureUnit> noise,
                                       const SegmentationConfig& cfg,
                                       const NoiseTrainingOptions& opts) {
  std::vector<NoiseFeatures> g, z;
  for (const auto& u : gestures) g.push_back(noise_features(u, cfg));
  for (const auto& u : noise) z.push_back(noise_features(u, cfg));
  return train_noise_classifier(g, z, opts);
}

bool is_noise(const GestureUnit& unit, const NoiseClassifier& model,
              const SegmentationConfig& cfg) {
  return model.is_noise(noise_features(unit, cfg));
}

}  // namespace headkey

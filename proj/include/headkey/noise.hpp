#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "headkey/signal.hpp"

namespace headkey {

/// Time-domain features of a unit's energy curve.
struct NoiseFeatures {
  std::size_t peak_count = 0;
  double duration_ms = 0.0;
  double mean_energy = 0.0;
  double max_energy = 0.0;

  std::array<double, 4> as_array() const {
    return {static_cast<double>(peak_count), duration_ms, mean_energy, max_energy};
  }

  friend bool operator==(const NoiseFeatures&, const NoiseFeatures&) = default;
};

inline constexpr double kDefaultProminenceFrac = 0.2;

/// Counts peaks of `energy`: maximal flat-topped runs strictly higher than
/// both neighbours (values outside the curve count as zero), at or above
/// `threshold`, with topographic prominence >= prominence_frac * max(energy).
std::size_t count_peaks(std::span<const double> energy, double threshold,
                        double prominence_frac = kDefaultProminenceFrac);

NoiseFeatures noise_features(const GestureUnit& unit, const SegmentationConfig& cfg,
                             double prominence_frac = kDefaultProminenceFrac);

struct NoiseTrainingOptions {
  std::uint64_t seed = 20220101;
  std::size_t epochs = 2000;
  double lambda = 1e-3;
};

/// Linear max-margin classifier over standardized NoiseFeatures. Positive
/// decision values are noise; a value of exactly zero is a gesture.
class NoiseClassifier {
 public:
  using Vector = std::array<double, 4>;

  NoiseClassifier() = default;
  NoiseClassifier(Vector mean, Vector stddev, Vector weights, double bias);

  bool trained() const { return trained_; }

  /// Throws NotReady on an untrained model.
  double decision(const NoiseFeatures& f) const;
  bool is_noise(const NoiseFeatures& f) const { return decision(f) > 0.0; }

  const Vector& mean() const { return mean_; }
  const Vector& stddev() const { return stddev_; }
  const Vector& weights() const { return weights_; }
  double bias() const { return bias_; }

  // Flat text: 4 means, 4 stddevs, 4 weights, bias; one decimal per line.
  void save(const std::filesystem::path& path) const;
  static NoiseClassifier load(const std::filesystem::path& path);

  friend bool operator==(const NoiseClassifier&, const NoiseClassifier&) = default;

 private:
  Vector mean_{};
  Vector stddev_{1.0, 1.0, 1.0, 1.0};
  Vector weights_{};
  double bias_ = 0.0;
  bool trained_ = false;
};

/// Standardizes features and fits a hinge-loss linear classifier by
/// stochastic sub-gradient descent (fixed seed, step 1/(lambda*t)). The
/// iterate with the fewest training errors (then lowest objective) is kept.
/// Throws InvalidInput if either class is empty or the same feature vector
/// appears in both classes.
NoiseClassifier train_noise_classifier(std::span<const NoiseFeatures> gestures,
                                       std::span<const NoiseFeatures> noise,
                                       const NoiseTrainingOptions& opts = {});

NoiseClassifier train_noise_classifier(std::span<const GestureUnit> gestures,
                                       std::span<const GestureUnit> noise,
                                       const SegmentationConfig& cfg,
                                       const NoiseTrainingOptions& opts = {});

bool is_noise(const GestureUnit& unit, const NoiseClassifier& model,
              const SegmentationConfig& cfg);

}  // namespace headkey

#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <vector>

namespace headkey {

/// One timestamped gyroscope reading. Axis values are angular velocity in
/// degrees per second.
struct ImuSample {
  double t_ms = 0.0;
  double gx = 0.0;
  double gy = 0.0;
  double gz = 0.0;

  friend bool operator==(const ImuSample&, const ImuSample&) = default;
};

/// Parameters of the energy-threshold gesture segmenter. Durations are given
/// in milliseconds and converted to whole sample counts at `sample_rate_hz`
/// (rounded to nearest).
struct SegmentationConfig {
  double peak_threshold = 30.0;  // deg/s
  double left_buffer_ms = 200.0;
  double right_buffer_ms = 200.0;
  double tolerance_ms = 300.0;
  double sample_rate_hz = 100.0;
  double max_unit_ms = 5000.0;

  double sample_period_ms() const { return 1000.0 / sample_rate_hz; }
  std::size_t samples_for(double ms) const;
  std::size_t left_samples() const { return samples_for(left_buffer_ms); }
  std::size_t right_samples() const { return samples_for(right_buffer_ms); }
  std::size_t tolerance_samples() const { return samples_for(tolerance_ms); }
  std::size_t max_unit_samples() const { return samples_for(max_unit_ms); }

  // Throws InvalidInput when an invariant does not hold.
  void validate() const;
};

/// A segmented slice of samples holding one candidate gesture. `end_ms` is
/// exclusive: the timestamp of the last sample plus one nominal sample period,
/// so that consecutive units never share an instant and a one-sample unit
/// still has positive duration.
struct GestureUnit {
  std::vector<ImuSample> samples;
  double start_ms = 0.0;
  double end_ms = 0.0;
  double peak_energy = 0.0;
  bool truncated = false;  // force-finalized at max_unit_ms

  double duration_ms() const { return end_ms - start_ms; }

  friend bool operator==(const GestureUnit&, const GestureUnit&) = default;
};

/// Euclidean norm of the three axes. Throws InvalidInput on non-finite input.
double gyro_energy(const ImuSample& s);

std::vector<double> energy_curve(std::span<const ImuSample> samples);

/// Streaming segmenter: Idle -> Active -> Tolerating -> (emit) -> Idle.
///
/// In Idle only a rolling pre-buffer of `left_samples()` is kept. A sample at
/// or above the peak threshold opens a unit seeded with that pre-buffer. Below
/// threshold samples are appended while the below-threshold run is no longer
/// than the tolerance; the first sample that makes the run exceed it
/// finalizes the unit, which keeps only the first `right_samples()` of the
/// run. The discarded remainder seeds the next pre-buffer, so units never
/// overlap.
///
/// Single writer; emitted units are plain values.
class Segmenter {
 public:
  enum class Phase { Idle, Active, Tolerating };

  explicit Segmenter(SegmentationConfig cfg = {});

  /// Feeds one sample. Returns the unit finalized by this sample, if any.
  /// Throws InvalidInput on a non-finite sample or a timestamp earlier than
  /// the previous one; the segmenter state is left untouched in that case.
  std::optional<GestureUnit> feed(const ImuSample& s);

  /// Finalizes the open unit at end of stream, keeping whatever tail exists
  /// (up to the right buffer).
  std::optional<GestureUnit> flush();

  Phase phase() const { return phase_; }
  bool in_unit() const { return phase_ != Phase::Idle; }
  const SegmentationConfig& config() const { return cfg_; }

 private:
  GestureUnit finalize(std::size_t keep_tail, bool truncated);

  SegmentationConfig cfg_;
  std::size_t left_n_;
  std::size_t right_n_;
  std::size_t tolerance_n_;
  std::size_t max_n_;

  Phase phase_ = Phase::Idle;
  std::deque<ImuSample> pre_buffer_;
  std::vector<ImuSample> unit_;  // committed part of the open unit
  std::vector<ImuSample> tail_;  // current below-threshold run
  double peak_ = 0.0;
  std::optional<double> last_t_;
};

/// Batch wrapper: feeds every sample and flushes at end of stream.
std::vector<GestureUnit> segment_trace(std::span<const ImuSample> samples,
                                       const SegmentationConfig& cfg = {});

}  // namespace headkey

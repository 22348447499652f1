#include "headkey/signal.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "headkey/errors.hpp"

namespace headkey {

std::size_t SegmentationConfig::samples_for(double ms) const {
  return static_cast<std::size_t>(std::llround(ms * sample_rate_hz / 1000.0));
}

void SegmentationConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(peak_threshold) || peak_threshold <= 0.0)
    throw InvalidInput("peak_threshold must be > 0");
  if (!finite(sample_rate_hz) || sample_rate_hz <= 0.0)
    throw InvalidInput("sample_rate_hz must be > 0");
  for (double d : {left_buffer_ms, right_buffer_ms, tolerance_ms}) {
    if (!finite(d) || d < 0.0) throw InvalidInput("buffer durations must be >= 0");
  }
  if (right_buffer_ms > tolerance_ms)
    throw InvalidInput("right_buffer_ms must not exceed tolerance_ms");
  if (!finite(max_unit_ms) || max_unit_samples() < 1)
    throw InvalidInput("max_unit_ms must cover at least one sample");
}

double gyro_energy(const ImuSample& s) {
  if (!std::isfinite(s.gx) || !std::isfinite(s.gy) || !std::isfinite(s.gz))
    throw InvalidInput("non-finite gyroscope sample");
  return std::sqrt(s.gx * s.gx + s.gy * s.gy + s.gz * s.gz);
}

std::vector<double> energy_curve(std::span<const ImuSample> samples) {
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(gyro_energy(s));
  return out;
}

Segmenter::Segmenter(SegmentationConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  left_n_ = cfg_.left_samples();
  right_n_ = cfg_.right_samples();
  tolerance_n_ = cfg_.tolerance_samples();
  max_n_ = cfg_.max_unit_samples();
}

std::optional<GestureUnit> Segmenter::feed(const ImuSample& s) {
  if (!std::isfinite(s.t_ms) || s.t_ms < 0.0)
    throw InvalidInput("sample timestamp must be finite and non-negative");
  if (last_t_ && s.t_ms < *last_t_)
    throw InvalidInput("out-of-order timestamp " + std::to_string(s.t_ms) +
                       " after " + std::to_string(*last_t_));
  const double e = gyro_energy(s);
  last_t_ = s.t_ms;
  const bool above = e >= cfg_.peak_threshold;

  switch (phase_) {
    case Phase::Idle:
      if (above) {
        unit_.assign(pre_buffer_.begin(), pre_buffer_.end());
        pre_buffer_.clear();
        unit_.push_back(s);
        peak_ = e;
        phase_ = Phase::Active;
      } else {
        pre_buffer_.push_back(s);
        while (pre_buffer_.size() > left_n_) pre_buffer_.pop_front();
        return std::nullopt;
      }
      break;
    case Phase::Active:
      if (above) {
        unit_.push_back(s);
        peak_ = std::max(peak_, e);
      } else {
        tail_.push_back(s);
        phase_ = Phase::Tolerating;
      }
      break;
    case Phase::Tolerating:
      if (above) {
        unit_.insert(unit_.end(), tail_.begin(), tail_.end());
        tail_.clear();
        unit_.push_back(s);
        peak_ = std::max(peak_, e);
        phase_ = Phase::Active;
      } else {
        tail_.push_back(s);
      }
      break;
  }

  if (phase_ == Phase::Tolerating && tail_.size() > tolerance_n_) {
    return finalize(right_n_, false);
  }
  if (unit_.size() + tail_.size() >= max_n_) {
    return finalize(right_n_, true);
  }
  return std::nullopt;
}

std::optional<GestureUnit> Segmenter::flush() {
  if (phase_ == Phase::Idle) return std::nullopt;
  return finalize(right_n_, false);
}

GestureUnit Segmenter::finalize(std::size_t keep_tail, bool truncated) {
  const std::size_t kept = std::min(keep_tail, tail_.size());
  GestureUnit unit;
  unit.samples = std::move(unit_);
  unit.samples.insert(unit.samples.end(), tail_.begin(),
                      tail_.begin() + static_cast<std::ptrdiff_t>(kept));
  unit.start_ms = unit.samples.front().t_ms;
  unit.end_ms = unit.samples.back().t_ms + cfg_.sample_period_ms();
  unit.peak_energy = peak_;
  unit.truncated = truncated;

  // The discarded part of the tail becomes the next pre-buffer.
  pre_buffer_.assign(tail_.begin() + static_cast<std::ptrdiff_t>(kept), tail_.end());
  while (pre_buffer_.size() > left_n_) pre_buffer_.pop_front();

  unit_ = {};
  tail_.clear();
  peak_ = 0.0;
  phase_ = Phase::Idle;
  return unit;
}

std::vector<GestureUnit> segment_trace(std::span<const ImuSample> samples,
                                       const SegmentationConfig& cfg) {
  Segmenter seg(cfg);
  std::vector<GestureUnit> units;
  for (const auto& s : samples) {
    if (auto u = seg.feed(s)) units.push_back(std::move(*u));
  }
  if (auto u = seg.flush()) units.push_back(std::move(*u));
  return units;
}

}  // namespace headkey

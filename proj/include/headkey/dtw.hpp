#pragma once

#include <array>
#include <span>
#include <vector>

#include "headkey/signal.hpp"

namespace headkey {

using Vec3 = std::array<double, 3>;

/// Raw 3-axis gyroscope series fed to DTW.
struct GestureSeries {
  std::vector<Vec3> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  static GestureSeries from_unit(const GestureUnit& unit);
  static GestureSeries from_samples(std::span<const ImuSample> samples);
  // Pads the other two axes with zero.
  static GestureSeries from_scalar(std::span<const double> values);

  friend bool operator==(const GestureSeries&, const GestureSeries&) = default;
};

double point_distance(const Vec3& a, const Vec3& b);

/// DTW[L_M, L_N] with DTW[0,0] = 0, every other border cell unreachable, and
/// DTW[i,j] = d(i,j) + min(DTW[i-1,j], DTW[i,j-1], DTW[i-1,j-1]) where d is
/// the Euclidean distance between points. Throws InvalidInput on an empty
/// series.
double dtw_distance(const GestureSeries& a, const GestureSeries& b);

/// Per-axis z-normalization (constant axes are only centered).
GestureSeries z_normalized(const GestureSeries& s);

}  // namespace headkey

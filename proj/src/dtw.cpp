#include "headkey/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "headkey/errors.hpp"

namespace headkey {

GestureSeries GestureSeries::from_unit(const GestureUnit& unit) {
  return from_samples(unit.samples);
}

GestureSeries GestureSeries::from_samples(std::span<const ImuSample> samples) {
  GestureSeries s;
  s.points.reserve(samples.size());
  for (const auto& x : samples) s.points.push_back({x.gx, x.gy, x.gz});
  return s;
}

GestureSeries GestureSeries::from_scalar(std::span<const double> values) {
  GestureSeries s;
  s.points.reserve(values.size());
  for (double v : values) s.points.push_back({v, 0.0, 0.0});
  return s;
}

double point_distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double dtw_distance(const GestureSeries& a, const GestureSeries& b) {
  if (a.empty() || b.empty()) throw InvalidInput("dtw_distance: empty series");
  constexpr double kUnreachable = std::numeric_limits<double>::infinity();
  const std::size_t n = b.size();

  // Two rows of the (L_M+1) x (L_N+1) table. Column 0 is the border.
  std::vector<double> prev(n + 1, kUnreachable);
  std::vector<double> cur(n + 1, kUnreachable);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = kUnreachable;
    const Vec3& ai = a.points[i - 1];
    for (std::size_t j = 1; j <= n; ++j) {
      // At least one predecessor is always finite for i, j >= 1, so the
      // infinite sentinel is only compared, never added.
      const double best = std::min({prev[j], cur[j - 1], prev[j - 1]});
      cur[j] = point_distance(ai, b.points[j - 1]) + best;
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

GestureSeries z_normalized(const GestureSeries& s) {
  GestureSeries out = s;
  if (s.empty()) return out;
  const double n = static_cast<double>(s.size());
  for (std::size_t axis = 0; axis < 3; ++axis) {
    double mean = 0.0;
    for (const auto& p : s.points) mean += p[axis];
    mean /= n;
    double var = 0.0;
    for (const auto& p : s.points) var += (p[axis] - mean) * (p[axis] - mean);
    double sd = std::sqrt(var / n);
    if (sd == 0.0) sd = 1.0;
    for (auto& p : out.points) p[axis] = (p[axis] - mean) / sd;
  }
  return out;
}

}  // namespace headkey

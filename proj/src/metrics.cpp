#include "headkey/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "headkey/errors.hpp"

namespace headkey {

double wpm(std::string_view transcribed, double elapsed_s) {
  if (!(elapsed_s > 0.0) || !std::isfinite(elapsed_s))
    throw InvalidInput("elapsed time must be > 0");
  return (static_cast<double>(transcribed.size()) / 5.0) / (elapsed_s / 60.0);
}

std::size_t msd(std::string_view a, std::string_view b) {
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

ErrorRates error_rates(std::string_view target, std::string_view transcribed,
                       std::size_t fixed_chars) {
  ErrorRates r;
  r.incorrect_not_fixed = msd(target, transcribed);
  r.correct = std::max(target.size(), transcribed.size()) - r.incorrect_not_fixed;
  r.incorrect_fixed = fixed_chars;
  const std::size_t total = r.correct + r.incorrect_not_fixed + r.incorrect_fixed;
  if (total == 0) return r;
  r.uer = static_cast<double>(r.incorrect_not_fixed) / static_cast<double>(total);
  r.ter = static_cast<double>(r.incorrect_not_fixed + r.incorrect_fixed) /
          static_cast<double>(total);
  return r;
}

ErrorRates error_rates(std::string_view target, std::string_view transcribed,
                       std::span<const DecoderEvent> events) {
  std::size_t fixed = 0;
  for (const auto& e : events) fixed += e.removed_chars;
  return error_rates(target, transcribed, fixed);
}

double auto_complete_rate(std::string_view word, std::size_t gestures_used) {
  if (gestures_used < 1 || gestures_used > word.size())
    throw InvalidInput("gestures_used must lie in [1, |word|]");
  return static_cast<double>(word.size() - gestures_used) / static_cast<double>(word.size());
}

}  // namespace headkey

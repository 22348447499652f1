#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "headkey/decoder.hpp"

namespace headkey {

/// (characters / 5) per minute; spaces count as characters.
/// Throws InvalidInput when elapsed_s <= 0.
double wpm(std::string_view transcribed, double elapsed_s);

/// Levenshtein distance (minimum string distance).
std::size_t msd(std::string_view a, std::string_view b);

struct ErrorRates {
  double uer = 0.0;
  double ter = 0.0;
  std::size_t correct = 0;              // C
  std::size_t incorrect_not_fixed = 0;  // INF
  std::size_t incorrect_fixed = 0;      // IF

  friend bool operator==(const ErrorRates&, const ErrorRates&) = default;
};

/// UER = INF / (C + INF + IF), TER = (INF + IF) / (C + INF + IF) with
/// INF = msd(target, transcribed), C = max(|target|, |transcribed|) - INF,
/// and IF the characters removed by corrections during entry.
ErrorRates error_rates(std::string_view target, std::string_view transcribed,
                       std::size_t fixed_chars);
ErrorRates error_rates(std::string_view target, std::string_view transcribed,
                       std::span<const DecoderEvent> events);

/// (|word| - gestures_used) / |word|. Throws InvalidInput unless
/// 1 <= gestures_used <= |word|.
double auto_complete_rate(std::string_view word, std::size_t gestures_used);

}  // namespace headkey

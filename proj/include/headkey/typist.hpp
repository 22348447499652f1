#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "headkey/decoder.hpp"
#include "headkey/gesture.hpp"
#include "headkey/keyboard.hpp"

namespace headkey {

/// confusion[intended][reported], rows and columns in kAllGestures order.
using ConfusionMatrix = std::array<std::array<double, kGestureCount>, kGestureCount>;

ConfusionMatrix identity_confusion();

/// Block gestures keep `p_same` and leak to the gestures of the adjacent and
/// diagonal blocks with the spatial model's probabilities; the three control
/// gestures are always recognized.
ConfusionMatrix default_confusion(const KeyboardLayout& layout, const SpatialModel& spatial = {});

void validate_confusion(const ConfusionMatrix& m);

// Seven lines of seven whitespace-separated probabilities.
ConfusionMatrix parse_confusion(std::istream& in);
ConfusionMatrix load_confusion(const std::filesystem::path& path);

/// A simulated user. For each word the typist emits the intended blocks one
/// at a time (each reported through the confusion matrix), accepts the
/// target as soon as it shows among the candidates by cycling SingleDownTap,
/// and when the whole word is typed without the target appearing, slides
/// back to the first wrong block and retypes. After `max_repairs` failed
/// rounds it settles for the top candidate.
struct TypistModel {
  ConfusionMatrix confusion = identity_confusion();
  double seconds_per_gesture = 1.0;
  std::size_t max_repairs = 3;
};

struct PhraseResult {
  std::string target;
  std::string transcript;
  std::size_t gestures = 0;
  std::size_t words = 0;
  std::size_t words_recovered = 0;  // word-level LCS of target vs transcript
  std::size_t fixed_chars = 0;
  std::size_t autofilled_letters = 0;
  std::size_t selected_letters = 0;  // letters of targets picked from the list

  friend bool operator==(const PhraseResult&, const PhraseResult&) = default;
};

struct SessionMetrics {
  double wpm = 0.0;
  double uer = 0.0;
  double ter = 0.0;
  double auto_complete_rate = 0.0;
  double word_recovery_rate = 0.0;
  std::size_t phrase_count = 0;
  std::size_t gesture_count = 0;
  std::size_t word_count = 0;
  std::size_t words_recovered = 0;

  friend bool operator==(const SessionMetrics&, const SessionMetrics&) = default;
};

struct SimulationResult {
  SessionMetrics metrics;
  std::vector<PhraseResult> phrases;

  friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// Phrases run in parallel, each with its own random stream derived from
/// (seed, phrase index), and are merged in index order, so the result does
/// not depend on the thread count. Throws InvalidInput naming the first
/// phrase word missing from the dictionary.
SimulationResult simulate_typist(std::span<const std::string> phrases, const TypistModel& typist,
                                 const Decoder& decoder, std::uint64_t seed);
SimulationResult simulate_typist_serial(std::span<const std::string> phrases,
                                        const TypistModel& typist, const Decoder& decoder,
                                        std::uint64_t seed);

std::vector<std::string> load_phrases(const std::filesystem::path& path);

}  // namespace headkey

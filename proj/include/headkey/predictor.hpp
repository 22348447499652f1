#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "headkey/dictionary.hpp"
#include "headkey/keyboard.hpp"

namespace headkey {

struct PredictorConfig {
  double alpha = 0.65;                // per unobserved letter
  std::size_t max_extra_letters = 8;  // candidate length in [n, n + this]
  std::size_t top_k = 3;

  void validate() const;
};

struct Candidate {
  std::string word;
  double score = 0.0;      // P(W) * prod P(s_i | w_i) * alpha^(m - n)
  double log_score = 0.0;  // natural log of `score`, what ranking uses

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// Ranking order: higher score first, then lexicographically smaller word.
bool ranks_before(const Candidate& a, const Candidate& b);

/// Bayesian word predictor over an ambiguous block keyboard. Holds the
/// dictionary re-indexed by word length with each word's block sequence, so
/// a query only touches words inside the length window. Immutable after
/// construction and safe to share between threads.
class Predictor {
 public:
  Predictor(std::shared_ptr<const Dictionary> dict, KeyboardLayout layout,
            SpatialModel spatial = {}, PredictorConfig cfg = {});

  const Dictionary& dictionary() const { return *dict_; }
  const KeyboardLayout& layout() const { return layout_; }
  const SpatialModel& spatial() const { return spatial_; }
  const PredictorConfig& config() const { return cfg_; }

  /// Unnormalized posterior of `word` given the observed blocks. Throws
  /// InvalidInput if the word is not in the dictionary, `pending` is empty,
  /// or the word length is outside [n, n + max_extra_letters].
  double word_score(std::string_view word, std::span<const Block> pending) const;
  double word_log_score(std::string_view word, std::span<const Block> pending) const;

  /// Top-k candidates by (score desc, word asc). Words whose score is zero
  /// (possible with a degenerate spatial model) are never candidates.
  std::vector<Candidate> top_candidates(std::span<const Block> pending) const;
  std::vector<Candidate> top_candidates_serial(std::span<const Block> pending) const;

 private:
  struct Indexed {
    std::size_t entry;           // into dict_->entries()
    double log_prior;
    std::uint32_t blocks_offset;  // into blocks_
  };

  double log_score_of(const Indexed& w, std::size_t length,
                      std::span<const Block> pending) const;
  std::pair<std::size_t, std::size_t> window(std::size_t n) const;
  Candidate make_candidate(const Indexed& w, double log_score) const;

  std::shared_ptr<const Dictionary> dict_;
  KeyboardLayout layout_;
  SpatialModel spatial_;
  PredictorConfig cfg_;

  std::array<std::array<double, 4>, 4> log_spatial_{};  // [observed][intended]
  double log_alpha_ = 0.0;
  std::vector<Indexed> by_length_;                        // sorted by length
  std::array<std::size_t, kMaxWordLength + 2> offsets_{};  // first index of each length
  std::vector<Block> blocks_;
};

}  // namespace headkey

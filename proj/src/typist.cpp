#include "headkey/typist.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <random>
#include <sstream>

#include "headkey/errors.hpp"
#include "headkey/metrics.hpp"
#include "text_util.hpp"

namespace headkey {

ConfusionMatrix identity_confusion() {
  ConfusionMatrix m{};
  for (std::size_t i = 0; i < kGestureCount; ++i) m[i][i] = 1.0;
  return m;
}

ConfusionMatrix default_confusion(const KeyboardLayout& layout, const SpatialModel& spatial) {
  spatial.validate();
  ConfusionMatrix m = identity_confusion();
  for (Block intended : kAllBlocks) {
    const auto row = gesture_index(layout.gesture_for(intended));
    m[row] = {};
    for (Block reported : kAllBlocks) {
      m[row][gesture_index(layout.gesture_for(reported))] =
          spatial_prob(reported, intended, spatial);
    }
  }
  return m;
}

void validate_confusion(const ConfusionMatrix& m) {
  for (std::size_t i = 0; i < kGestureCount; ++i) {
    double sum = 0.0;
    for (double p : m[i]) {
      if (!std::isfinite(p) || p < 0.0 || p > 1.0)
        throw InvalidInput("confusion entries must lie in [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw InvalidInput("confusion row " + std::to_string(i) + " does not sum to 1");
  }
}

ConfusionMatrix parse_confusion(std::istream& in) {
  ConfusionMatrix m{};
  std::size_t rows = 0;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    detail::strip_cr(line);
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (rows == kGestureCount)
      throw InvalidInput("confusion line " + std::to_string(no) + ": more than 7 rows");
    std::istringstream fields{std::string(body)};
    std::string tok;
    std::size_t col = 0;
    while (fields >> tok) {
      if (col == kGestureCount || !detail::parse_double(tok, m[rows][col]))
        throw InvalidInput("confusion line " + std::to_string(no) + ": expected 7 numbers");
      ++col;
    }
    if (col != kGestureCount)
      throw InvalidInput("confusion line " + std::to_string(no) + ": expected 7 numbers");
    ++rows;
  }
  if (rows != kGestureCount) throw InvalidInput("confusion matrix needs 7 rows");
  validate_confusion(m);
  return m;
}

ConfusionMatrix load_confusion(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  return parse_confusion(in);
}

std::vector<std::string> load_phrases(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    detail::strip_cr(line);
    const auto body = detail::trim(line);
    if (!body.empty()) out.emplace_back(body);
  }
  return out;
}

namespace {

std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::size_t lcs(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (const auto& x : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = x == b[j - 1] ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

class PhraseRun {
 public:
  PhraseRun(const TypistModel& typist, const Decoder& decoder, std::uint64_t seed,
            std::size_t index)
      : typist_(typist), decoder_(decoder), layout_(decoder.predictor().layout()) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index)};
    rng_.seed(seq);
  }

  PhraseResult run(const std::string& phrase) {
    result_.target = phrase;
    const auto words = split_words(phrase);
    result_.words = words.size();
    for (const auto& w : words) type_word(w);

    for (int tries = 0; tries < 8 && !committed_; ++tries) emit(GestureClass::RightSlide);
    result_.words_recovered = lcs(words, split_words(result_.transcript));
    return result_;
  }

 private:
  GestureClass perturb(GestureClass intended) {
    const auto& row = typist_.confusion[gesture_index(intended)];
    const double u = static_cast<double>(rng_() >> 11) * 0x1p-53;
    double acc = 0.0;
    std::size_t last = gesture_index(intended);
    for (std::size_t j = 0; j < kGestureCount; ++j) {
      if (row[j] <= 0.0) continue;
      acc += row[j];
      last = j;
      if (u < acc) return kAllGestures[j];
    }
    return kAllGestures[last];
  }

  void emit(GestureClass intended) {
    const GestureClass g = perturb(intended);
    ++result_.gestures;
    for (const auto& e : decoder_.apply_in_place(state_, g)) {
      result_.fixed_chars += e.removed_chars;
      if (e.kind == DecoderEventKind::PhraseCommitted && !committed_) {
        result_.transcript = e.text;
        committed_ = true;
      }
    }
  }

  std::optional<std::size_t> target_rank(const std::string& w) const {
    for (std::size_t r = 0; r < state_.candidates.size(); ++r) {
      if (state_.candidates[r].word == w) return r;
    }
    return std::nullopt;
  }

  bool prefix_ok(const std::vector<Block>& blocks) const {
    if (state_.pending.size() > blocks.size()) return false;
    return std::equal(state_.pending.begin(), state_.pending.end(), blocks.begin());
  }

  void type_word(const std::string& w) {
    const auto blocks = layout_.blocks_of(w);
    const std::size_t top_k = decoder_.predictor().config().top_k;
    std::size_t budget = 8 * w.size() + 4 * top_k + 32;
    std::size_t repairs = 0;
    bool started = false;

    auto block_gesture = [&](std::size_t i) { return layout_.gesture_for(blocks[i]); };

    while (budget > 0) {
      --budget;
      if (!started) {
        // Also commits the previous word if it is selected.
        emit(block_gesture(0));
        started = true;
        continue;
      }
      if (auto r = target_rank(w); r && !state_.pending.empty()) {
        if (state_.selection == r) {
          result_.autofilled_letters += w.size() - state_.pending.size();
          result_.selected_letters += w.size();
          return;
        }
        emit(GestureClass::SingleDownTap);
        continue;
      }
      if (state_.selection) {
        emit(GestureClass::LeftSlide);  // a wrong word is selected
        continue;
      }
      if (state_.pending.size() < blocks.size()) {
        emit(block_gesture(state_.pending.size()));
        continue;
      }
      if (prefix_ok(blocks) || repairs == typist_.max_repairs) break;
      ++repairs;
      while (!prefix_ok(blocks) && budget > 0) {
        --budget;
        emit(GestureClass::LeftSlide);
      }
    }
    settle();
  }

  // Gives up on the current word: take the top candidate if there is one,
  // otherwise clear the pending blocks so the next word starts clean.
  void settle() {
    for (int tries = 0; tries < 8 && !state_.selection && !state_.candidates.empty(); ++tries)
      emit(GestureClass::SingleDownTap);
    for (int tries = 0; tries < 64 && !state_.selection && !state_.pending.empty(); ++tries)
      emit(GestureClass::LeftSlide);
  }

  const TypistModel& typist_;
  const Decoder& decoder_;
  const KeyboardLayout& layout_;
  std::mt19937_64 rng_;
  DecoderState state_;
  PhraseResult result_;
  bool committed_ = false;
};

void check_vocabulary(std::span<const std::string> phrases, const Dictionary& dict) {
  for (const auto& p : phrases) {
    for (const auto& w : split_words(p)) {
      if (!dict.contains(w))
        throw InvalidInput("phrase word '" + w + "' is not in the dictionary");
    }
  }
}

SimulationResult aggregate(std::vector<PhraseResult> phrases, const TypistModel& typist) {
  SimulationResult r;
  auto& m = r.metrics;
  m.phrase_count = phrases.size();
  std::size_t chars = 0, c = 0, inf = 0, fixed = 0, autofilled = 0, selected = 0;
  for (const auto& p : phrases) {
    m.gesture_count += p.gestures;
    m.word_count += p.words;
    m.words_recovered += p.words_recovered;
    chars += p.transcript.size();
    const auto er = error_rates(p.target, p.transcript, p.fixed_chars);
    c += er.correct;
    inf += er.incorrect_not_fixed;
    fixed += er.incorrect_fixed;
    autofilled += p.autofilled_letters;
    selected += p.selected_letters;
  }
  const double elapsed = static_cast<double>(m.gesture_count) * typist.seconds_per_gesture;
  if (elapsed > 0.0) m.wpm = (static_cast<double>(chars) / 5.0) / (elapsed / 60.0);
  if (const auto total = c + inf + fixed; total > 0) {
    m.uer = static_cast<double>(inf) / static_cast<double>(total);
    m.ter = static_cast<double>(inf + fixed) / static_cast<double>(total);
  }
  if (selected > 0) m.auto_complete_rate = static_cast<double>(autofilled) / static_cast<double>(selected);
  if (m.word_count > 0)
    m.word_recovery_rate = static_cast<double>(m.words_recovered) / static_cast<double>(m.word_count);
  r.phrases = std::move(phrases);
  return r;
}

void check_typist(const TypistModel& typist) {
  validate_confusion(typist.confusion);
  if (!(typist.seconds_per_gesture > 0.0)) throw InvalidInput("seconds_per_gesture must be > 0");
}

}  // namespace

SimulationResult simulate_typist_serial(std::span<const std::string> phrases,
                                        const TypistModel& typist, const Decoder& decoder,
                                        std::uint64_t seed) {
  check_typist(typist);
  check_vocabulary(phrases, decoder.predictor().dictionary());
  std::vector<PhraseResult> results;
  results.reserve(phrases.size());
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    results.push_back(PhraseRun(typist, decoder, seed, i).run(phrases[i]));
  }
  return aggregate(std::move(results), typist);
}

SimulationResult simulate_typist(std::span<const std::string> phrases, const TypistModel& typist,
                                 const Decoder& decoder, std::uint64_t seed) {
  check_typist(typist);
  check_vocabulary(phrases, decoder.predictor().dictionary());
  std::vector<PhraseResult> results(phrases.size());
  const auto n = static_cast<std::ptrdiff_t>(phrases.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    results[idx] = PhraseRun(typist, decoder, seed, idx).run(phrases[idx]);
  }
  return aggregate(std::move(results), typist);
}

}  // namespace headkey

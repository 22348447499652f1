#include "headkey/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "headkey/errors.hpp"

namespace headkey {

void PredictorConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("alpha must lie in (0, 1]");
  if (top_k < 1) throw InvalidInput("top_k must be >= 1");
}

bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.log_score != b.log_score) return a.log_score > b.log_score;
  return a.word < b.word;
}

Predictor::Predictor(std::shared_ptr<const Dictionary> dict, KeyboardLayout layout,
                     SpatialModel spatial, PredictorConfig cfg)
    : dict_(std::move(dict)), layout_(std::move(layout)), spatial_(spatial), cfg_(cfg) {
  if (!dict_) throw InvalidInput("predictor needs a dictionary");
  spatial_.validate();
  cfg_.validate();
  for (Block o : kAllBlocks) {
    for (Block i : kAllBlocks) {
      log_spatial_[block_index(o)][block_index(i)] = std::log(spatial_prob(o, i, spatial_));
    }
  }
  log_alpha_ = std::log(cfg_.alpha);

  const auto& entries = dict_->entries();
  std::array<std::size_t, kMaxWordLength + 2> counts{};
  for (const auto& e : entries) ++counts[e.word.size()];
  offsets_[0] = 0;
  for (std::size_t len = 1; len < offsets_.size(); ++len)
    offsets_[len] = offsets_[len - 1] + counts[len - 1];

  const double log_total = std::log(static_cast<double>(dict_->total_count()));
  by_length_.resize(entries.size());
  auto next = offsets_;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const auto off = static_cast<std::uint32_t>(blocks_.size());
    for (char c : e.word) blocks_.push_back(layout_.block_of(c));
    by_length_[next[e.word.size()]++] = {
        i, std::log(static_cast<double>(e.count)) - log_total, off};
  }
}

std::pair<std::size_t, std::size_t> Predictor::window(std::size_t n) const {
  if (n > kMaxWordLength) return {0, 0};
  const std::size_t hi_len = std::min(n + cfg_.max_extra_letters, kMaxWordLength);
  return {offsets_[n], offsets_[hi_len + 1]};
}

double Predictor::log_score_of(const Indexed& w, std::size_t length,
                               std::span<const Block> pending) const {
  double s = w.log_prior;
  const Block* blocks = blocks_.data() + w.blocks_offset;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    s += log_spatial_[block_index(pending[i])][block_index(blocks[i])];
  }
  if (s == -std::numeric_limits<double>::infinity()) return s;
  return s + static_cast<double>(length - pending.size()) * log_alpha_;
}

Candidate Predictor::make_candidate(const Indexed& w, double log_score) const {
  return {dict_->entries()[w.entry].word, std::exp(log_score), log_score};
}

double Predictor::word_log_score(std::string_view word, std::span<const Block> pending) const {
  if (pending.empty()) throw InvalidInput("word_score: empty block sequence");
  const std::size_t n = pending.size();
  const std::size_t m = word.size();
  if (m < n || m > n + cfg_.max_extra_letters)
    throw InvalidInput("word '" + std::string(word) + "' is outside the length window");
  auto count = dict_->count(word);
  if (!count) throw InvalidInput("word '" + std::string(word) + "' is not in the dictionary");

  double s = std::log(static_cast<double>(*count)) -
             std::log(static_cast<double>(dict_->total_count()));
  for (std::size_t i = 0; i < n; ++i) {
    s += log_spatial_[block_index(pending[i])][block_index(layout_.block_of(word[i]))];
  }
  if (s == -std::numeric_limits<double>::infinity()) return s;
  return s + static_cast<double>(m - n) * log_alpha_;
}

double Predictor::word_score(std::string_view word, std::span<const Block> pending) const {
  return std::exp(word_log_score(word, pending));
}

namespace {

struct Hit {
  double log_score;
  std::size_t slot;  // into by_length_
};

}  // namespace

std::vector<Candidate> Predictor::top_candidates_serial(std::span<const Block> pending) const {
  if (pending.empty()) return {};
  const auto [lo, hi] = window(pending.size());
  std::vector<Candidate> all;
  for (std::size_t i = lo; i < hi; ++i) {
    const auto& w = by_length_[i];
    const double s = log_score_of(w, dict_->entries()[w.entry].word.size(), pending);
    if (s == -std::numeric_limits<double>::infinity()) continue;
    all.push_back(make_candidate(w, s));
  }
  const std::size_t k = std::min(cfg_.top_k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                    ranks_before);
  all.resize(k);
  return all;
}

std::vector<Candidate> Predictor::top_candidates(std::span<const Block> pending) const {
  if (pending.empty()) return {};
  const auto [lo, hi] = window(pending.size());
  const std::size_t k = cfg_.top_k;
  const auto& entries = dict_->entries();

  auto better = [&](const Hit& a, const Hit& b) {
    if (a.log_score != b.log_score) return a.log_score > b.log_score;
    return entries[by_length_[a.slot].entry].word < entries[by_length_[b.slot].entry].word;
  };
  // Keeps `list` sorted best-first and at most k long.
  auto offer = [&](std::vector<Hit>& list, const Hit& h) {
    if (list.size() == k && !better(h, list.back())) return;
    auto pos = std::upper_bound(list.begin(), list.end(), h, better);
    list.insert(pos, h);
    if (list.size() > k) list.pop_back();
  };

  std::vector<Hit> merged;
  merged.reserve(k);
  const auto first = static_cast<std::ptrdiff_t>(lo);
  const auto last = static_cast<std::ptrdiff_t>(hi);
#pragma omp parallel
  {
    std::vector<Hit> local;
    local.reserve(k + 1);
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = first; i < last; ++i) {
      const auto slot = static_cast<std::size_t>(i);
      const auto& w = by_length_[slot];
      const double s = log_score_of(w, entries[w.entry].word.size(), pending);
      if (s == -std::numeric_limits<double>::infinity()) continue;
      offer(local, {s, slot});
    }
#pragma omp critical(headkey_top_candidates)
    for (const auto& h : local) offer(merged, h);
  }

  std::vector<Candidate> out;
  out.reserve(merged.size());
  for (const auto& h : merged) out.push_back(make_candidate(by_length_[h.slot], h.log_score));
  return out;
}

}  // namespace headkey

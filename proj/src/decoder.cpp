#include "headkey/decoder.hpp"

#include <array>

#include "headkey/errors.hpp"

namespace headkey {

std::string_view decoder_event_name(DecoderEventKind k) {
  static constexpr std::array<std::string_view, 8> kNames = {
      "PendingChanged",   "SelectionChanged", "WordCommitted", "PhraseCommitted",
      "GestureCancelled", "WordCancelled",    "WordDeleted",   "NoOp",
  };
  return kNames[static_cast<std::size_t>(k)];
}

std::string DecoderState::phrase_text() const {
  std::string out;
  for (const auto& w : committed_words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

Decoder::Decoder(std::shared_ptr<const Predictor> predictor)
    : predictor_(std::move(predictor)) {
  if (!predictor_) throw InvalidInput("decoder needs a predictor");
}

void Decoder::recompute(DecoderState& state) const {
  state.candidates = predictor_->top_candidates(state.pending);
  state.selection.reset();
}

std::vector<DecoderEvent> Decoder::apply_in_place(DecoderState& state, GestureClass g) const {
  std::vector<DecoderEvent> events;
  auto emit = [&](DecoderEventKind kind, std::string text = {}, std::size_t removed = 0) {
    events.push_back({kind, g, std::move(text), removed});
  };
  auto commit_selection = [&] {
    std::string word = state.candidates[*state.selection].word;
    state.committed_words.push_back(word);
    state.pending.clear();
    state.candidates.clear();
    state.selection.reset();
    emit(DecoderEventKind::WordCommitted, std::move(word));
  };

  if (is_block_gesture(g)) {
    if (state.selection) commit_selection();
    state.pending.push_back(*predictor_->layout().block_for(g));
    recompute(state);
    emit(DecoderEventKind::PendingChanged);
  } else if (g == GestureClass::SingleDownTap) {
    if (state.candidates.empty()) {
      emit(DecoderEventKind::NoOp);
    } else {
      state.selection = state.selection ? (*state.selection + 1) % state.candidates.size() : 0;
      emit(DecoderEventKind::SelectionChanged, state.candidates[*state.selection].word);
    }
  } else if (g == GestureClass::LeftSlide) {
    if (state.selection) {
      const std::string word = state.candidates[*state.selection].word;
      state.pending.clear();
      state.candidates.clear();
      state.selection.reset();
      emit(DecoderEventKind::WordCancelled, word, word.size());
    } else if (!state.pending.empty()) {
      state.pending.pop_back();
      recompute(state);
      emit(DecoderEventKind::GestureCancelled, {}, 1);
    } else if (!state.committed_words.empty()) {
      std::string word = std::move(state.committed_words.back());
      state.committed_words.pop_back();
      const auto n = word.size();
      emit(DecoderEventKind::WordDeleted, std::move(word), n);
    } else {
      emit(DecoderEventKind::NoOp);
    }
  } else if (g == GestureClass::RightSlide) {
    if (state.selection) commit_selection();
    std::string phrase = state.phrase_text();
    state.committed_words.clear();
    state.pending.clear();
    state.candidates.clear();
    state.selection.reset();
    emit(DecoderEventKind::PhraseCommitted, std::move(phrase));
  } else {
    // Noise never reaches the decoder; accept it as a no-op to stay total.
    emit(DecoderEventKind::NoOp);
  }

  state.event_log.insert(state.event_log.end(), events.begin(), events.end());
  return events;
}

Decoder::Transition Decoder::apply(const DecoderState& state, GestureClass g) const {
  Transition t{state, {}};
  t.events = apply_in_place(t.state, g);
  return t;
}

DecodeResult decode_gesture_stream(std::span<const GestureClass> gestures,
                                   const Decoder& decoder) {
  DecodeResult r;
  for (GestureClass g : gestures) {
    for (const auto& e : decoder.apply_in_place(r.final_state, g)) {
      if (e.kind == DecoderEventKind::PhraseCommitted) r.phrases.push_back(e.text);
    }
  }
  for (std::size_t i = 0; i < r.phrases.size(); ++i) {
    if (i > 0) r.transcript += '\n';
    r.transcript += r.phrases[i];
  }
  return r;
}

}  // namespace headkey

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "headkey/gesture.hpp"
#include "headkey/keyboard.hpp"
#include "headkey/predictor.hpp"

namespace headkey {

enum class DecoderEventKind {
  PendingChanged,
  SelectionChanged,
  WordCommitted,     // text = word; a space follows it in the phrase
  PhraseCommitted,   // text = the phrase
  GestureCancelled,  // last block removed (removed_chars = 1)
  WordCancelled,     // selected in-progress word dropped
  WordDeleted,       // last committed word dropped
  NoOp,
};

std::string_view decoder_event_name(DecoderEventKind k);

struct DecoderEvent {
  DecoderEventKind kind = DecoderEventKind::NoOp;
  GestureClass gesture = GestureClass::Noise;
  std::string text;
  std::size_t removed_chars = 0;  // characters undone by a correction

  friend bool operator==(const DecoderEvent&, const DecoderEvent&) = default;
};

struct DecoderState {
  std::vector<std::string> committed_words;  // current phrase
  std::vector<Block> pending;
  std::vector<Candidate> candidates;
  std::optional<std::size_t> selection;
  std::vector<DecoderEvent> event_log;

  /// Committed words of the current phrase joined by single spaces.
  std::string phrase_text() const;

  friend bool operator==(const DecoderState&, const DecoderState&) = default;
};

/// The text-entry state machine. Transitions are pure functions of
/// (state, gesture); every gesture is accepted in every state.
///
///  - tap gestures append their block (committing a selected word first);
///  - SingleDownTap cycles the selection through the candidates;
///  - LeftSlide cancels the selected word, else the last block, else the
///    last committed word;
///  - RightSlide commits the selection (if any) and then the phrase;
///    unselected pending blocks are dropped.
class Decoder {
 public:
  explicit Decoder(std::shared_ptr<const Predictor> predictor);

  struct Transition {
    DecoderState state;
    std::vector<DecoderEvent> events;
  };

  Transition apply(const DecoderState& state, GestureClass g) const;

  /// In-place variant; returns the events appended by this gesture.
  std::vector<DecoderEvent> apply_in_place(DecoderState& state, GestureClass g) const;

  const Predictor& predictor() const { return *predictor_; }

 private:
  void recompute(DecoderState& state) const;

  std::shared_ptr<const Predictor> predictor_;
};

struct DecodeResult {
  std::vector<std::string> phrases;
  std::string transcript;  // phrases joined by '\n'
  DecoderState final_state;
};

/// Folds the gestures over an empty state.
DecodeResult decode_gesture_stream(std::span<const GestureClass> gestures,
                                   const Decoder& decoder);

}  // namespace headkey

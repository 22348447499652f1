#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "headkey/config.hpp"
#include "headkey/decoder.hpp"
#include "headkey/noise.hpp"
#include "headkey/recognizer.hpp"
#include "headkey/signal.hpp"

namespace headkey {

enum class SessionMode { RawSamples, GestureEvents };

std::string_view mode_name(SessionMode m);
std::optional<SessionMode> parse_mode(std::string_view name);

struct SessionConfig {
  EngineConfig engine;
  SessionMode mode = SessionMode::GestureEvents;
  std::shared_ptr<const Dictionary> dictionary;
  std::shared_ptr<const KeyboardLayout> layout;  // default layout when null
  std::shared_ptr<const TemplateSet> templates;
  std::shared_ptr<const NoiseClassifier> noise_model;
};

/// Builds a SessionConfig from an `{"cmd":"open", ...}` message. Asset paths
/// (`dict`, `layout`, `templates`, `noise_model`) are resolved against
/// `assets_dir`; omitted ones default to `dictionary.tsv`, the built-in
/// layout, `templates/` and `noise_model.txt`. Any other member whose name is
/// a config key overrides that constant. Throws InvalidInput naming the asset
/// that failed to load.
SessionConfig session_config_from_open(const nlohmann::json& open,
                                       const std::filesystem::path& assets_dir,
                                       const EngineConfig& defaults = {});

/// One outbound message. Serialized as a single JSON object
/// `{"seq":N,"event":"<kind>", ...payload}` on one line.
struct WireEvent {
  std::uint64_t seq = 0;
  std::string kind;
  nlohmann::json payload = nlohmann::json::object();

  nlohmann::json to_json() const;
  std::string to_line() const { return to_json().dump(); }
};

nlohmann::json snapshot_json(const DecoderState& state);

class Session;

struct OpenResult {
  std::unique_ptr<Session> session;  // null on failure
  std::vector<WireEvent> events;     // initial decoder_state, or one error
};

/// Opens a session: fresh decoder state and an initial decoder_state event
/// with seq 0. Raw-samples mode needs templates and a noise model.
OpenResult open_session(const SessionConfig& cfg);

/// A live pipeline: segmenter -> noise filter -> classifier -> decoder.
/// Not thread-safe; the owner serializes calls. Every returned batch is in
/// causal order and seq numbers continue without gaps across batches.
class Session {
 public:
  /// Throws InvalidInput when a required asset is missing. The initial
  /// decoder_state event (seq 0) is already in log().
  explicit Session(SessionConfig cfg);

  std::vector<WireEvent> push_sample(const ImuSample& s);
  std::vector<WireEvent> push_gesture(GestureClass g);
  std::vector<WireEvent> reset();

  /// Dispatches a client command (`sample`, `gesture`, `reset`). Unknown or
  /// malformed commands produce an error event; the session is unaffected.
  std::vector<WireEvent> handle(const nlohmann::json& cmd);

  /// Re-runs a recorded event log (one JSON object per line) on a fresh
  /// state with this session's configuration and returns the final state.
  /// Throws InvalidInput naming the line on malformed JSON or a seq gap.
  DecoderState replay(std::span<const std::string> log_lines) const;

  const DecoderState& state() const { return state_; }
  const std::vector<WireEvent>& log() const { return log_; }
  const WireEvent& last_state_event() const { return log_[last_state_index_]; }
  SessionMode mode() const { return cfg_.mode; }
  const SessionConfig& config() const { return cfg_; }

 private:
  WireEvent& emit(std::vector<WireEvent>& out, std::string kind,
                  nlohmann::json payload = nlohmann::json::object());
  void emit_error(std::vector<WireEvent>& out, const std::string& message);
  void emit_state(std::vector<WireEvent>& out, std::string_view cause,
                  std::span<const DecoderEvent> events = {});
  void apply_gesture(std::vector<WireEvent>& out, GestureClass g);
  void handle_unit(std::vector<WireEvent>& out, const GestureUnit& unit);

  SessionConfig cfg_;
  std::shared_ptr<const Predictor> predictor_;
  Decoder decoder_;
  std::optional<Segmenter> segmenter_;
  DecoderState state_;
  std::uint64_t next_seq_ = 0;
  std::vector<WireEvent> log_;
  std::size_t last_state_index_ = 0;
};

}  // namespace headkey

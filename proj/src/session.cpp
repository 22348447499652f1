#include "headkey/session.hpp"

#include <cmath>

#include "headkey/errors.hpp"
#include "headkey/trace_io.hpp"

namespace headkey {

using nlohmann::json;

std::string_view mode_name(SessionMode m) {
  return m == SessionMode::RawSamples ? "raw-samples" : "gesture-events";
}

std::optional<SessionMode> parse_mode(std::string_view name) {
  if (name == "raw-samples") return SessionMode::RawSamples;
  if (name == "gesture-events") return SessionMode::GestureEvents;
  return std::nullopt;
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& assets, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : assets / path;
}

template <class F>
auto load_asset(const char* name, const std::filesystem::path& path, F&& load) {
  try {
    return load(path);
  } catch (const std::exception& e) {
    throw InvalidInput(std::string("cannot load ") + name + " '" + path.string() + "': " + e.what());
  }
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}

}  // namespace

SessionConfig session_config_from_open(const json& open, const std::filesystem::path& assets_dir,
                                       const EngineConfig& defaults) {
  SessionConfig cfg;
  cfg.engine = defaults;
  const auto mode_text = open.value("mode", std::string("gesture-events"));
  const auto mode = parse_mode(mode_text);
  if (!mode) throw InvalidInput("unknown mode '" + mode_text + "'");
  cfg.mode = *mode;

  static const std::vector<std::string> kAssetKeys = {"cmd", "mode", "dict", "layout",
                                                       "templates", "noise_model"};
  for (const auto& [key, value] : open.items()) {
    if (std::find(kAssetKeys.begin(), kAssetKeys.end(), key) != kAssetKeys.end()) continue;
    set_config_value(cfg.engine, key, scalar_text(value));
  }
  cfg.engine.validate();

  const auto dict_path = resolve(assets_dir, open.value("dict", std::string("dictionary.tsv")));
  cfg.dictionary = load_asset("dictionary", dict_path, [](const auto& p) {
    return std::make_shared<const Dictionary>(Dictionary::load(p));
  });
  if (open.contains("layout")) {
    cfg.layout = load_asset("layout", resolve(assets_dir, open["layout"].get<std::string>()),
                            [](const auto& p) {
                              return std::make_shared<const KeyboardLayout>(KeyboardLayout::load(p));
                            });
  }
  if (cfg.mode == SessionMode::RawSamples) {
    const auto tpl = resolve(assets_dir, open.value("templates", std::string("templates")));
    if (!std::filesystem::exists(tpl / "manifest.txt"))
      throw InvalidInput("templates required: no template manifest at '" + tpl.string() + "'");
    cfg.templates = load_asset("templates", tpl, [&](const auto& p) {
      return std::make_shared<const TemplateSet>(load_templates(p, cfg.engine.recognizer));
    });
    const auto nm = resolve(assets_dir, open.value("noise_model", std::string("noise_model.txt")));
    cfg.noise_model = load_asset("noise model", nm, [](const auto& p) {
      return std::make_shared<const NoiseClassifier>(NoiseClassifier::load(p));
    });
  }
  return cfg;
}

json WireEvent::to_json() const {
  json j = payload.is_object() ? payload : json::object();
  j["seq"] = seq;
  j["event"] = kind;
  return j;
}

json snapshot_json(const DecoderState& state) {
  json pending = json::array();
  for (Block b : state.pending) pending.push_back(std::string(block_name(b)));
  json candidates = json::array();
  for (const auto& c : state.candidates) candidates.push_back({{"word", c.word}, {"score", c.score}});
  return {
      {"text", state.phrase_text()},
      {"committed", state.committed_words},
      {"pending", pending},
      {"candidates", candidates},
      {"selection", state.selection ? json(*state.selection) : json(nullptr)},
  };
}

namespace {

std::shared_ptr<const Predictor> make_predictor(const SessionConfig& cfg) {
  if (!cfg.dictionary) throw InvalidInput("dictionary required");
  return std::make_shared<const Predictor>(cfg.dictionary,
                                           cfg.layout ? *cfg.layout : default_layout(),
                                           cfg.engine.spatial, cfg.engine.predictor);
}

}  // namespace

Session::Session(SessionConfig cfg)
    : cfg_(std::move(cfg)), predictor_(make_predictor(cfg_)), decoder_(predictor_) {
  cfg_.engine.validate();
  if (cfg_.mode == SessionMode::RawSamples) {
    if (!cfg_.templates) throw InvalidInput("templates required for raw-samples mode");
    if (!cfg_.templates->ready())
      throw InvalidInput("templates required: every gesture class needs a template");
    if (!cfg_.noise_model || !cfg_.noise_model->trained())
      throw InvalidInput("noise model required for raw-samples mode");
    segmenter_.emplace(cfg_.engine.segmentation);
  }
  std::vector<WireEvent> initial;
  emit_state(initial, "open");
}

OpenResult open_session(const SessionConfig& cfg) {
  OpenResult r;
  try {
    r.session = std::make_unique<Session>(cfg);
  } catch (const std::exception& e) {
    r.events.push_back({0, "error", {{"message", e.what()}}});
    return r;
  }
  r.events = r.session->log();
  return r;
}

WireEvent& Session::emit(std::vector<WireEvent>& out, std::string kind, json payload) {
  log_.push_back({next_seq_++, std::move(kind), std::move(payload)});
  out.push_back(log_.back());
  return log_.back();
}

void Session::emit_error(std::vector<WireEvent>& out, const std::string& message) {
  emit(out, "error", {{"message", message}});
}

void Session::emit_state(std::vector<WireEvent>& out, std::string_view cause,
                         std::span<const DecoderEvent> events) {
  json payload = {{"cause", cause}, {"state", snapshot_json(state_)}};
  if (!events.empty()) {
    json names = json::array();
    for (const auto& e : events) names.push_back(std::string(decoder_event_name(e.kind)));
    payload["decoder_events"] = names;
  }
  emit(out, "decoder_state", std::move(payload));
  last_state_index_ = log_.size() - 1;
}

void Session::apply_gesture(std::vector<WireEvent>& out, GestureClass g) {
  const auto events = decoder_.apply_in_place(state_, g);
  for (const auto& e : events) {
    if (e.kind == DecoderEventKind::WordCommitted) emit(out, "word_committed", {{"word", e.text}});
    if (e.kind == DecoderEventKind::PhraseCommitted) emit(out, "phrase_committed", {{"text", e.text}});
  }
  emit_state(out, "gesture", events);
}

void Session::handle_unit(std::vector<WireEvent>& out, const GestureUnit& unit) {
  const auto features = noise_features(unit, cfg_.engine.segmentation, cfg_.engine.prominence_frac);
  if (cfg_.noise_model->is_noise(features)) {
    emit(out, "noise_rejected",
         {{"start_ms", unit.start_ms}, {"end_ms", unit.end_ms}, {"peak_count", features.peak_count}});
    return;
  }
  const auto c = classify(unit, *cfg_.templates);
  emit(out, "gesture_recognized",
       {{"gesture", gesture_name(c.cls)},
        {"distance", c.distance},
        {"start_ms", unit.start_ms},
        {"end_ms", unit.end_ms},
        {"truncated", unit.truncated},
        {"source", "samples"}});
  apply_gesture(out, c.cls);
}

std::vector<WireEvent> Session::push_sample(const ImuSample& s) {
  std::vector<WireEvent> out;
  if (cfg_.mode != SessionMode::RawSamples) {
    emit_error(out, "sample rejected: session is in gesture-events mode");
    return out;
  }
  const bool was_idle = !segmenter_->in_unit();
  std::optional<GestureUnit> unit;
  try {
    unit = segmenter_->feed(s);
  } catch (const InvalidInput& e) {
    emit_error(out, std::string("sample dropped: ") + e.what());
    return out;
  }
  emit(out, "sample_ack", {{"t", s.t_ms}});
  // A unit can open and (force-)close on the same sample.
  if (was_idle && (segmenter_->in_unit() || unit)) emit(out, "segment_started", {{"t", s.t_ms}});
  if (unit) handle_unit(out, *unit);
  return out;
}

std::vector<WireEvent> Session::push_gesture(GestureClass g) {
  std::vector<WireEvent> out;
  if (cfg_.mode != SessionMode::GestureEvents) {
    emit_error(out, "gesture rejected: session is in raw-samples mode");
    return out;
  }
  if (g == GestureClass::Noise) {
    emit_error(out, "gesture rejected: Noise is not an input gesture");
    return out;
  }
  emit(out, "gesture_recognized", {{"gesture", gesture_name(g)}, {"source", "client"}});
  apply_gesture(out, g);
  return out;
}

std::vector<WireEvent> Session::reset() {
  std::vector<WireEvent> out;
  state_ = {};
  if (segmenter_) segmenter_.emplace(cfg_.engine.segmentation);
  emit_state(out, "reset");
  return out;
}

std::vector<WireEvent> Session::handle(const json& cmd) {
  std::vector<WireEvent> out;
  if (!cmd.is_object() || !cmd.contains("cmd") || !cmd["cmd"].is_string()) {
    emit_error(out, "malformed command: expected {\"cmd\": ...}");
    return out;
  }
  const auto name = cmd["cmd"].get<std::string>();
  try {
    if (name == "sample") {
      ImuSample s{cmd.at("t").get<double>(), cmd.at("gx").get<double>(),
                  cmd.at("gy").get<double>(), cmd.at("gz").get<double>()};
      return push_sample(s);
    }
    if (name == "gesture") {
      const auto g = parse_gesture(cmd.at("name").get<std::string>());
      if (!g) {
        emit_error(out, "unknown gesture '" + cmd["name"].get<std::string>() + "'");
        return out;
      }
      return push_gesture(*g);
    }
    if (name == "reset") return reset();
  } catch (const json::exception& e) {
    emit_error(out, "malformed '" + name + "' command: " + e.what());
    return out;
  }
  emit_error(out, "unknown cmd '" + name + "'");
  return out;
}

DecoderState Session::replay(std::span<const std::string> log_lines) const {
  DecoderState state;
  std::optional<std::uint64_t> prev;
  std::size_t no = 0;
  for (const auto& line : log_lines) {
    ++no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception&) {
      throw InvalidInput("event log line " + std::to_string(no) + ": malformed JSON");
    }
    if (!rec.is_object() || !rec.contains("seq") || !rec["seq"].is_number_unsigned() ||
        !rec.contains("event") || !rec["event"].is_string())
      throw InvalidInput("event log line " + std::to_string(no) + ": missing seq or event");
    const auto seq = rec["seq"].get<std::uint64_t>();
    const auto expected = prev ? *prev + 1 : 0;
    if (seq != expected)
      throw InvalidInput("event log line " + std::to_string(no) + ": seq gap (expected " +
                         std::to_string(expected) + ", got " + std::to_string(seq) + ")");
    prev = seq;

    const auto kind = rec["event"].get<std::string>();
    if (kind == "gesture_recognized") {
      const auto g = parse_gesture(rec.value("gesture", std::string()));
      if (!g || *g == GestureClass::Noise)
        throw InvalidInput("event log line " + std::to_string(no) + ": bad gesture");
      decoder_.apply_in_place(state, *g);
    } else if (kind == "decoder_state" && rec.value("cause", std::string()) == "reset") {
      state = {};
    }
  }
  return state;
}

}  // namespace headkey

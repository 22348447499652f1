// headkey: command-line front end for the head-gesture text entry engine.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "headkey/config.hpp"
#include "headkey/decoder.hpp"
#include "headkey/dictionary.hpp"
#include "headkey/errors.hpp"
#include "headkey/noise.hpp"
#include "headkey/recognizer.hpp"
#include "headkey/server.hpp"
#include "headkey/session.hpp"
#include "headkey/signal.hpp"
#include "headkey/sweep.hpp"
#include "headkey/synth.hpp"
#include "headkey/trace_io.hpp"
#include "headkey/typist.hpp"

using namespace headkey;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Globals {
  bool json = false;
  std::string config;

  EngineConfig engine() const {
    EngineConfig e = config.empty() ? EngineConfig{} : load_config(config);
    e.validate();
    return e;
  }
};

void emit_json(const json& j) { std::cout << j.dump(2) << '\n'; }

json unit_json(const GestureUnit& u) {
  return {{"start_ms", u.start_ms},     {"end_ms", u.end_ms},       {"duration_ms", u.duration_ms()},
          {"samples", u.samples.size()}, {"peak_energy", u.peak_energy}, {"truncated", u.truncated}};
}

std::vector<fs::path> csv_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw InvalidInput("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GestureUnit> units_in(const fs::path& dir, const SegmentationConfig& cfg) {
  std::vector<GestureUnit> out;
  for (const auto& f : csv_files(dir)) {
    auto units = segment_trace(read_trace_file(f), cfg);
    out.insert(out.end(), units.begin(), units.end());
  }
  return out;
}

std::vector<GestureClass> read_gestures(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::vector<GestureClass> out;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::string w;
    while (words >> w) {
      const auto g = parse_gesture(w);
      if (!g) throw InvalidInput("gestures line " + std::to_string(no) + ": unknown gesture '" + w + "'");
      out.push_back(*g);
    }
  }
  return out;
}

std::shared_ptr<const Predictor> make_predictor(const std::string& dict, const EngineConfig& e,
                                                const SpatialModel& spatial) {
  return std::make_shared<const Predictor>(std::make_shared<const Dictionary>(Dictionary::load(dict)),
                                           default_layout(), spatial, e.predictor);
}

std::vector<double> parse_thresholds(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw InvalidInput("bad threshold '" + tok + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidInput("no thresholds given");
  return out;
}

// --- subcommands ------------------------------------------------------------

void cmd_segment(const Globals& g, const std::string& trace) {
  const auto e = g.engine();
  const auto units = segment_trace(read_trace_file(trace), e.segmentation);
  if (g.json) {
    json arr = json::array();
    for (const auto& u : units) arr.push_back(unit_json(u));
    emit_json({{"trace", trace}, {"units", arr}});
    return;
  }
  std::printf("%4s %10s %10s %8s %7s %9s %s\n", "#", "start_ms", "end_ms", "dur_ms", "samples", "peak",
              "truncated");
  for (std::size_t i = 0; i < units.size(); ++i) {
    const auto& u = units[i];
    std::printf("%4zu %10.0f %10.0f %8.0f %7zu %9.2f %s\n", i, u.start_ms, u.end_ms, u.duration_ms(),
                u.samples.size(), u.peak_energy, u.truncated ? "yes" : "no");
  }
  std::printf("%zu unit(s)\n", units.size());
}

void cmd_recognize(const Globals& g, const std::string& trace, const std::string& templates,
                   const std::string& noise_model) {
  const auto e = g.engine();
  const auto set = load_templates(templates, e.recognizer);
  if (!set.ready()) throw NotReady("template set lacks a template for some gesture class");
  std::optional<NoiseClassifier> noise;
  if (!noise_model.empty()) noise = NoiseClassifier::load(noise_model);

  const auto units = segment_trace(read_trace_file(trace), e.segmentation);
  const auto results = classify_all(units, set);
  json arr = json::array();
  if (!g.json)
    std::printf("%4s %10s %10s %-16s %10s\n", "#", "start_ms", "end_ms", "gesture", "distance");
  for (std::size_t i = 0; i < units.size(); ++i) {
    const bool rejected =
        noise && noise->is_noise(noise_features(units[i], e.segmentation, e.prominence_frac));
    const auto name = rejected ? std::string("Noise") : std::string(gesture_name(results[i].cls));
    if (g.json) {
      auto j = unit_json(units[i]);
      j["gesture"] = name;
      if (!rejected) j["distance"] = results[i].distance;
      arr.push_back(j);
    } else if (rejected) {
      std::printf("%4zu %10.0f %10.0f %-16s %10s\n", i, units[i].start_ms, units[i].end_ms, "Noise", "-");
    } else {
      std::printf("%4zu %10.0f %10.0f %-16s %10.3f\n", i, units[i].start_ms, units[i].end_ms,
                  name.c_str(), results[i].distance);
    }
  }
  if (g.json) emit_json({{"trace", trace}, {"units", arr}});
}

void cmd_templates(const Globals& g, const std::string& traces, const std::string& out) {
  const auto e = g.engine();
  const auto set = build_templates(load_labelled_traces(traces), e.segmentation, e.recognizer);
  save_templates(out, set);
  std::array<std::size_t, kGestureCount> per{};
  for (const auto& t : set.entries()) ++per[gesture_index(t.cls)];
  if (g.json) {
    json counts = json::object();
    for (auto c : kAllGestures) counts[std::string(gesture_name(c))] = per[gesture_index(c)];
    emit_json({{"out", out}, {"templates", set.size()}, {"per_class", counts}, {"ready", set.ready()}});
    return;
  }
  for (auto c : kAllGestures)
    std::printf("%-16s %zu\n", std::string(gesture_name(c)).c_str(), per[gesture_index(c)]);
  std::printf("%zu template(s) written to %s%s\n", set.size(), out.c_str(),
              set.ready() ? "" : " (some classes missing)");
}

void cmd_train_noise(const Globals& g, const std::string& pos, const std::string& neg,
                     const std::string& out) {
  const auto e = g.engine();
  const auto noise_units = units_in(pos, e.segmentation);
  const auto gesture_units = units_in(neg, e.segmentation);
  const auto model = train_noise_classifier(gesture_units, noise_units, e.segmentation);
  model.save(out);

  std::size_t errors = 0;
  for (const auto& u : noise_units) errors += !is_noise(u, model, e.segmentation);
  for (const auto& u : gesture_units) errors += is_noise(u, model, e.segmentation);
  const auto total = noise_units.size() + gesture_units.size();
  const double acc = 1.0 - static_cast<double>(errors) / static_cast<double>(total);
  if (g.json) {
    emit_json({{"out", out}, {"noise_units", noise_units.size()}, {"gesture_units", gesture_units.size()},
               {"training_accuracy", acc}});
    return;
  }
  std::printf("noise units    %zu\ngesture units  %zu\ntrain accuracy %.4f\nmodel          %s\n",
              noise_units.size(), gesture_units.size(), acc, out.c_str());
}

void cmd_decode(const Globals& g, const std::string& gestures, const std::string& dict) {
  const auto e = g.engine();
  const Decoder decoder(make_predictor(dict, e, e.spatial));
  const auto stream = read_gestures(gestures);
  const auto r = decode_gesture_stream(stream, decoder);
  if (g.json) {
    emit_json({{"gestures", stream.size()},
               {"phrases", r.phrases},
               {"transcript", r.transcript},
               {"final_state", snapshot_json(r.final_state)}});
    return;
  }
  for (const auto& p : r.phrases) std::printf("%s\n", p.c_str());
  const auto open = r.final_state.phrase_text();
  if (!open.empty() || !r.final_state.pending.empty())
    std::printf("(uncommitted: \"%s\" + %zu pending block(s))\n", open.c_str(),
                r.final_state.pending.size());
}

void cmd_simulate(const Globals& g, const std::string& phrases_path, const std::string& dict,
                  std::uint64_t seed, const std::string& confusion, bool baseline, bool show_phrases) {
  const auto e = g.engine();
  const auto spatial = baseline ? SpatialModel::indicator() : e.spatial;
  const Decoder decoder(make_predictor(dict, e, spatial));
  TypistModel typist;
  typist.confusion = confusion.empty() ? default_confusion(default_layout(), e.spatial)
                                       : load_confusion(confusion);
  const auto phrases = load_phrases(phrases_path);
  const auto r = simulate_typist(phrases, typist, decoder, seed);
  const auto& m = r.metrics;
  if (g.json) {
    json rows = json::array();
    for (const auto& p : r.phrases)
      rows.push_back({{"target", p.target},
                      {"transcript", p.transcript},
                      {"gestures", p.gestures},
                      {"words_recovered", p.words_recovered},
                      {"fixed_chars", p.fixed_chars}});
    emit_json({{"seed", seed},
               {"baseline", baseline},
               {"metrics",
                {{"wpm", m.wpm},
                 {"uer", m.uer},
                 {"ter", m.ter},
                 {"auto_complete_rate", m.auto_complete_rate},
                 {"word_recovery_rate", m.word_recovery_rate},
                 {"phrase_count", m.phrase_count},
                 {"gesture_count", m.gesture_count},
                 {"word_count", m.word_count}}},
               {"phrases", rows}});
    return;
  }
  if (show_phrases) {
    for (const auto& p : r.phrases)
      std::printf("%-40s | %s\n", p.target.c_str(), p.transcript.c_str());
    std::printf("\n");
  }
  std::printf("phrases             %zu\n", m.phrase_count);
  std::printf("gestures            %zu\n", m.gesture_count);
  std::printf("wpm                 %.2f\n", m.wpm);
  std::printf("uer                 %.4f\n", m.uer);
  std::printf("ter                 %.4f\n", m.ter);
  std::printf("auto-complete rate  %.4f\n", m.auto_complete_rate);
  std::printf("word recovery rate  %.4f (%zu/%zu)\n", m.word_recovery_rate, m.words_recovered,
              m.word_count);
}

void cmd_sweep(const Globals& g, const std::string& traces_dir, const std::string& thresholds,
               const std::string& templates) {
  const auto e = g.engine();
  const auto traces = load_labelled_traces(traces_dir);
  const auto set = templates.empty() ? build_templates(traces, e.segmentation, e.recognizer)
                                     : load_templates(templates, e.recognizer);
  const auto grid = parse_thresholds(thresholds);
  const auto rows = sweep_threshold(traces, grid, set, e.segmentation);
  if (g.json) {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"threshold", r.threshold},
                     {"accuracy", r.accuracy},
                     {"mean_lasting_ms", r.mean_lasting_ms},
                     {"labels", r.labels},
                     {"units", r.units},
                     {"correct", r.correct},
                     {"no_detection", r.no_detection}});
    emit_json({{"traces", traces.size()}, {"rows", arr}});
    return;
  }
  std::printf("%9s %9s %14s %7s %7s\n", "threshold", "accuracy", "mean_lasting", "labels", "units");
  for (const auto& r : rows) {
    std::printf("%9g %8.2f%% %12.1fms %7zu %7zu%s\n", r.threshold, 100.0 * r.accuracy,
                r.mean_lasting_ms, r.labels, r.units, r.no_detection ? "  (no detection)" : "");
  }
}

void cmd_synth(const Globals& g, const std::string& script_path, const std::string& out,
               std::string labels_out) {
  const auto e = g.engine();
  const auto r = synth_trace(load_script(script_path), e.segmentation);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  if (out.empty()) {
    write_trace(std::cout, r.samples);
    return;
  }
  write_trace_file(out, r.samples);
  if (labels_out.empty()) labels_out = fs::path(out).replace_extension(".labels").string();
  write_labels_file(labels_out, r.labels);
  if (g.json) {
    emit_json({{"trace", out},
               {"labels", labels_out},
               {"samples", r.samples.size()},
               {"gestures", r.labels.size()},
               {"warnings", r.warnings}});
    return;
  }
  std::printf("%zu samples, %zu gesture(s) -> %s, %s\n", r.samples.size(), r.labels.size(), out.c_str(),
              labels_out.c_str());
}

void cmd_replay(const Globals& g, const std::string& log_path, const std::string& assets,
                const std::string& dict) {
  json open = {{"cmd", "open"}};
  if (!dict.empty()) open["dict"] = dict;
  const Session session(session_config_from_open(open, assets, g.engine()));
  std::ifstream in(log_path);
  if (!in) throw InvalidInput("cannot open " + log_path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  const auto state = session.replay(lines);
  if (g.json) {
    emit_json(snapshot_json(state));
    return;
  }
  std::cout << snapshot_json(state).dump() << '\n';
}

GatewayServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

void cmd_serve(const Globals& g, ServerOptions opts) {
  opts.engine = g.engine();
  GatewayServer server(opts);
  server.start();
  std::cerr << "listening on ws://" << opts.address << ':' << server.ws_port() << "/session";
  if (opts.tcp_port) std::cerr << " and tcp " << opts.address << ':' << server.tcp_port();
  std::cerr << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.run();
  g_server = nullptr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Head-gesture text entry engine: segmentation, recognition, decoding and evaluation."};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json, "Print a machine-readable JSON report");
  app.add_option("--config", g.config, "key = value file overriding engine constants")
      ->check(CLI::ExistingFile);

  std::string trace, templates, noise_model, dir, out, dict, gestures, phrases, confusion, script,
      labels, thresholds = "10,20,30,40,50", log_path, assets = ".";
  std::string pos_dir, neg_dir;
  std::uint64_t seed = 1;
  bool baseline = false, show_phrases = false;
  ServerOptions serve;
  unsigned short tcp_port = 0;

  auto* segment = app.add_subcommand("segment", "Split a trace into gesture units");
  segment->add_option("trace", trace, "Trace CSV (t_ms,gx,gy,gz)")->required()->check(CLI::ExistingFile);

  auto* recognize = app.add_subcommand("recognize", "Segment a trace and classify each unit");
  recognize->add_option("trace", trace, "Trace CSV")->required()->check(CLI::ExistingFile);
  recognize->add_option("--templates", templates, "Template directory")->required();
  recognize->add_option("--noise-model", noise_model, "Reject units this model calls noise")
      ->check(CLI::ExistingFile);

  auto* build = app.add_subcommand("templates", "Build a template directory from labelled traces");
  build->add_option("--traces", dir, "Directory of <name>.csv + <name>.labels")->required();
  build->add_option("--out", out, "Output directory")->required();

  auto* train = app.add_subcommand("train-noise", "Train the noise rejector");
  train->add_option("POS_DIR", pos_dir, "Traces of noise movements (positive class)")->required();
  train->add_option("NEG_DIR", neg_dir, "Traces of real gestures")->required();
  train->add_option("--out", out, "Model file")->default_val("noise_model.txt");

  auto* decode = app.add_subcommand("decode", "Run a gesture sequence through the text decoder");
  decode->add_option("--gestures", gestures, "Gesture names, whitespace separated")
      ->required()
      ->check(CLI::ExistingFile);
  decode->add_option("--dict", dict, "Dictionary (word<TAB>count)")->required()->check(CLI::ExistingFile);

  auto* simulate = app.add_subcommand("simulate", "Simulate a typist over a phrase set");
  simulate->add_option("--phrases", phrases, "One phrase per line")->required()->check(CLI::ExistingFile);
  simulate->add_option("--dict", dict, "Dictionary")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "Random seed")->default_val(1);
  simulate->add_option("--confusion", confusion, "7x7 confusion matrix (default: spatial structure)")
      ->check(CLI::ExistingFile);
  simulate->add_flag("--baseline", baseline, "Decode without auto-correction (indicator spatial model)");
  simulate->add_flag("--show-phrases", show_phrases, "List target and transcript per phrase");

  auto* sweep = app.add_subcommand("sweep", "Accuracy and lasting time across peak thresholds");
  sweep->add_option("--traces", dir, "Directory of labelled traces")->required();
  sweep->add_option("--thresholds", thresholds, "Comma-separated thresholds (deg/s)");
  sweep->add_option("--templates", templates, "Template directory (default: built from the traces)");

  auto* synth = app.add_subcommand("synth", "Render a gesture script as a trace");
  synth->add_option("--script", script, "Script file")->required()->check(CLI::ExistingFile);
  synth->add_option("--out", out, "Trace CSV to write (stdout when omitted)");
  synth->add_option("--labels", labels, "Labels file (default: <out>.labels)");

  auto* serve_cmd = app.add_subcommand("serve", "Run the local gateway");
  serve_cmd->add_option("--port", serve.ws_port, "HTTP/WebSocket port")->default_val(8765);
  serve_cmd->add_option("--tcp-port", tcp_port, "Also serve newline-delimited JSON on this port");
  serve_cmd->add_option("--assets", serve.assets_dir, "Asset directory")->default_val(".");
  serve_cmd->add_option("--address", serve.address, "Bind address")->default_val("127.0.0.1");
  serve_cmd->add_option("--log-dir", serve.log_dir, "Write one event log per session here");

  auto* replay = app.add_subcommand("replay", "Rebuild the final decoder state from an event log");
  replay->add_option("log", log_path, "Event log (one JSON object per line)")
      ->required()
      ->check(CLI::ExistingFile);
  replay->add_option("--assets", assets, "Asset directory")->default_val(".");
  replay->add_option("--dict", dict, "Dictionary (default: <assets>/dictionary.tsv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*segment) cmd_segment(g, trace);
    if (*recognize) cmd_recognize(g, trace, templates, noise_model);
    if (*build) cmd_templates(g, dir, out);
    if (*train) cmd_train_noise(g, pos_dir, neg_dir, out);
    if (*decode) cmd_decode(g, gestures, dict);
    if (*simulate) cmd_simulate(g, phrases, dict, seed, confusion, baseline, show_phrases);
    if (*sweep) cmd_sweep(g, dir, thresholds, templates);
    if (*synth) cmd_synth(g, script, out, labels);
    if (*replay) cmd_replay(g, log_path, assets, dict);
    if (*serve_cmd) {
      if (serve_cmd->count("--tcp-port")) serve.tcp_port = tcp_port;
      cmd_serve(g, serve);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

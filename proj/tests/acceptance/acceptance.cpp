// Acceptance run: one PASS/FAIL line per primary criterion. Exit status is
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "headkey/decoder.hpp"
#include "headkey/session.hpp"
#include "headkey/sweep.hpp"
#include "headkey/synth.hpp"
#include "headkey/typist.hpp"
#include "oracles.hpp"

using namespace headkey;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  std::printf("%s  %-28s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
  std::fflush(stdout);
  failures += !o.pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::shared_ptr<const Dictionary>& dictionary() {
  static const auto d = std::make_shared<const Dictionary>(Dictionary::load(fixtures::dictionary_path()));
  return d;
}

const oracle::ExhaustiveScorer& scorer() {
  static const oracle::ExhaustiveScorer s(fixtures::dictionary_path());
  return s;
}

Decoder make_decoder(SpatialModel spatial = {}) {
  return Decoder(std::make_shared<const Predictor>(dictionary(), default_layout(), spatial));
}

// ---------------------------------------------------------------------------

Outcome dtw_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> len(1, 6);
  std::uniform_int_distribution<int> ints(-20, 20);
  std::uniform_real_distribution<double> reals(-100.0, 100.0);
  int pairs = 0, bad = 0;
  double worst = 0.0;
  for (int variant = 0; variant < 4; ++variant) {
    const bool integer = variant % 2 == 0, three_d = variant >= 2;
    for (int i = 0; i < 300; ++i) {
      auto series = [&] {
        GestureSeries s;
        for (std::size_t k = len(rng); k > 0; --k) {
          Vec3 p{};
          for (int a = 0; a < (three_d ? 3 : 1); ++a) p[a] = integer ? ints(rng) : reals(rng);
          s.points.push_back(p);
        }
        return s;
      };
      const auto a = series(), b = series();
      const double got = dtw_distance(a, b);
      const double want = oracle::dtw_by_paths({a.points.begin(), a.points.end()},
                                               {b.points.begin(), b.points.end()});
      const double rel = std::abs(got - want) / std::max(1.0, std::abs(want));
      worst = std::max(worst, rel);
      bad += integer ? got != want : rel > 1e-9;
      ++pairs;
    }
  }
  const double secs = seconds_since(t0);
  return {bad == 0 && pairs >= 1000 && secs < 10.0,
          fmt("%d pairs (1-D and 3-D), %d mismatches, max rel err %.1e", pairs, bad, worst)};
}

Outcome segmentation() {
  using fixtures::pulses;
  const SegmentationConfig cfg;  // 30 deg/s, 200/200/300 ms, 100 Hz
  const double tol = cfg.sample_period_ms();
  auto near = [&](double a, double b) { return std::abs(a - b) <= tol; };
  std::vector<std::string> problems;

  if (!segment_trace(pulses({{5000, 0.0}}), cfg).empty()) problems.push_back("zero stream");

  auto one = segment_trace(pulses({{2000, 0.0}, {500, 60.0}, {2000, 0.0}}), cfg);
  if (one.size() != 1 || !near(one[0].start_ms, 1800) || !near(one[0].end_ms, 2700))
    problems.push_back("single pulse");

  auto dip = segment_trace(pulses({{1000, 0.0}, {300, 60.0}, {200, 0.0}, {300, 60.0}, {2000, 0.0}}), cfg);
  if (dip.size() != 1 || !near(dip[0].start_ms, 800) || !near(dip[0].end_ms, 2000))
    problems.push_back("sub-tolerance dip");

  auto gap = segment_trace(pulses({{1000, 0.0}, {300, 60.0}, {1000, 0.0}, {300, 60.0}, {2000, 0.0}}), cfg);
  if (gap.size() != 2 || !near(gap[0].start_ms, 800) || !near(gap[0].end_ms, 1500) ||
      !near(gap[1].start_ms, 2100) || !near(gap[1].end_ms, 2800))
    problems.push_back("super-tolerance gap");

  std::mt19937_64 rng(77);
  int equal = 0;
  for (int t = 0; t < 100; ++t) {
    GestureScript script = fixtures::script_of(fixtures::random_gestures(6, rng()), 50.0 + 10.0 * (t % 6), 350.0 + 40.0 * (t % 10));
    script.noise_sigma = 4.0;
    script.seed = rng();
    const auto trace = synth_trace(script, cfg).samples;
    Segmenter seg(cfg);
    std::vector<GestureUnit> streamed;
    for (const auto& s : trace)
      if (auto u = seg.feed(s)) streamed.push_back(*u);
    if (auto u = seg.flush()) streamed.push_back(*u);
    equal += streamed == segment_trace(trace, cfg);
  }
  if (equal != 100) problems.push_back(fmt("batch/stream %d/100", equal));

  std::string detail = "4 scenarios exact, batch==stream on 100 random traces";
  if (!problems.empty()) {
    detail = "failed:";
    for (const auto& p : problems) detail += " [" + p + "]";
  }
  return {problems.empty(), detail};
}

Outcome spatial_normalization() {
  const SpatialModel m;  // 0.94 / 0.025 / 0.01
  const double ulp = std::nextafter(1.0, 2.0) - 1.0;
  double worst = 0.0;
  for (Block intended : kAllBlocks) {
    double sum = 0.0;
    for (Block observed : kAllBlocks) sum += spatial_prob(observed, intended, m);
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  const bool constants = m.p_same == 0.94 && m.p_adjacent == 0.025 && m.p_diagonal == 0.01;
  return {constants && worst <= ulp, fmt("max |row sum - 1| = %.3g (1 ulp = %.3g)", worst, ulp)};
}

Outcome decoder_oracle() {
  const auto t0 = Clock::now();
  const Predictor predictor(dictionary(), default_layout());
  (void)scorer();
  std::mt19937_64 rng(500);
  std::uniform_int_distribution<int> len(1, 10), blk(0, 3);
  int order_mismatch = 0, score_mismatch = 0, tied_swaps = 0;
  double worst = 0.0;
  for (int q = 0; q < 500; ++q) {
    std::vector<int> raw;
    std::vector<Block> pending;
    for (int i = len(rng); i > 0; --i) {
      raw.push_back(blk(rng));
      pending.push_back(kAllBlocks[static_cast<std::size_t>(raw.back())]);
    }
    const auto got = predictor.top_candidates(pending);
    const auto ranked = scorer().rank(raw);
    const auto want = std::vector<oracle::Scored>(ranked.begin(),
                                                  ranked.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(3, ranked.size())));
    if (got.size() != want.size()) {
      ++order_mismatch;
      continue;
    }
    for (std::size_t i = 0; i < got.size(); ++i) {
      const double ref = static_cast<double>(want[i].log_score);
      const double rel = std::abs(got[i].log_score - ref) / std::max(1e-300, std::abs(ref));
      worst = std::max(worst, rel);
      score_mismatch += rel > 1e-12;
      if (got[i].word == want[i].word) continue;
      // Only a tie within tolerance may reorder words.
      const auto other = std::find_if(ranked.begin(), ranked.end(),
                                      [&](const auto& s) { return s.word == got[i].word; });
      if (other != ranked.end() &&
          std::abs(static_cast<double>(other->log_score) - ref) <= 1e-12 * std::abs(ref))
        ++tied_swaps;
      else
        ++order_mismatch;
    }
  }
  const double secs = seconds_since(t0);
  return {order_mismatch == 0 && score_mismatch == 0 && secs < 30.0,
          fmt("500 queries on %zu words: %d order / %d score mismatches, %d tied swaps, max rel err %.1e",
              dictionary()->size(), order_mismatch, score_mismatch, tied_swaps, worst)};
}

Outcome exact_recovery() {
  const auto dec = make_decoder();
  const auto& layout = default_layout();
  const auto& entries = dictionary()->entries();
  std::mt19937_64 rng(1000);
  std::uniform_int_distribution<std::size_t> pick(0, entries.size() - 1);
  int eligible = 0, recovered = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto& w = entries[pick(rng)].word;
    std::vector<int> raw;
    std::vector<GestureClass> g;
    for (Block b : layout.blocks_of(w)) {
      raw.push_back(static_cast<int>(block_index(b)));
      g.push_back(layout.gesture_for(b));
    }
    const auto top = scorer().top(raw, 3);
    const auto it = std::find_if(top.begin(), top.end(), [&](const auto& s) { return s.word == w; });
    if (it == top.end()) continue;
    ++eligible;
    for (auto r = it - top.begin(); r >= 0; --r) g.push_back(GestureClass::SingleDownTap);
    g.push_back(GestureClass::RightSlide);
    recovered += decode_gesture_stream(g, dec).transcript == w;
  }
  return {eligible > 0 && recovered == eligible,
          fmt("1000 words sampled, %d ranked top-3 by the oracle, %d recovered", eligible, recovered)};
}

Outcome end_to_end() {
  const auto templates = std::make_shared<const TemplateSet>(fixtures::generator_templates());
  const auto noise = std::make_shared<const NoiseClassifier>(fixtures::generator_noise_model());
  const auto gestures = fixtures::random_gestures(50, 5050);
  const auto trace = synth_trace(fixtures::script_of(gestures)).samples;

  const auto units = segment_trace(trace);
  const auto classified = classify_all(units, *templates);
  std::size_t correct = 0;
  std::vector<GestureClass> batch;
  for (std::size_t i = 0; i < classified.size(); ++i) {
    batch.push_back(classified[i].cls);
    correct += i < gestures.size() && classified[i].cls == gestures[i];
  }
  const auto dec = make_decoder();
  const auto offline = decode_gesture_stream(batch, dec);

  SessionConfig cfg;
  cfg.mode = SessionMode::RawSamples;
  cfg.dictionary = dictionary();
  cfg.templates = templates;
  cfg.noise_model = noise;
  Session live(cfg);
  for (const auto& s : trace) live.push_sample(s);

  const bool same = live.state() == offline.final_state;
  return {units.size() == 50 && correct == 50 && same,
          fmt("%zu units, %zu/50 classified correctly, streaming %s batch", units.size(), correct,
              same ? "==" : "!=")};
}

Outcome auto_correct_benefit() {
  const auto phrases = load_phrases(fixtures::phrases_path());
  TypistModel typist;
  typist.confusion = default_confusion(default_layout());
  const std::uint64_t seed = 20220101;
  const auto bayes = simulate_typist(phrases, typist, make_decoder(), seed).metrics;
  const auto base = simulate_typist(phrases, typist, make_decoder(SpatialModel::indicator()), seed).metrics;
  return {phrases.size() == 40 && bayes.word_recovery_rate >= base.word_recovery_rate,
          fmt("%zu phrases, word recovery %.4f (Bayesian) vs %.4f (indicator baseline)", phrases.size(),
              bayes.word_recovery_rate, base.word_recovery_rate)};
}

Outcome noise_rejection() {
  // Part 1: hand-built feature corpus, separable only through peak count.
  std::mt19937_64 rng(4646);
  std::uniform_real_distribution<double> dur(400, 1600), mean(15, 45);
  std::vector<std::pair<NoiseFeatures, bool>> corpus;
  for (int i = 0; i < 60; ++i) {
    const double m1 = mean(rng), m2 = mean(rng);
    corpus.push_back({{static_cast<std::size_t>(1 + i % 2), dur(rng), m1, 2.0 * m1}, false});
    corpus.push_back({{static_cast<std::size_t>(5 + i % 4), dur(rng), m2, 2.0 * m2}, true});
  }
  std::shuffle(corpus.begin(), corpus.end(), rng);
  auto split_eval = [](const std::vector<std::pair<NoiseFeatures, bool>>& items, std::size_t train_n) {
    std::vector<NoiseFeatures> g, n;
    for (std::size_t i = 0; i < train_n; ++i) (items[i].second ? n : g).push_back(items[i].first);
    const auto model = train_noise_classifier(g, n);
    std::size_t wrong = 0;
    for (std::size_t i = train_n; i < items.size(); ++i) wrong += model.is_noise(items[i].first) != items[i].second;
    return wrong;
  };
  const auto held = corpus.size() - corpus.size() * 4 / 5;
  const auto wrong_features = split_eval(corpus, corpus.size() * 4 / 5);

  // Part 2: 102 synthesized units, 81 for training and 21 held out.
  const SegmentationConfig cfg;
  std::vector<std::pair<NoiseFeatures, bool>> units;
  std::uniform_real_distribution<double> amp(55, 120), stroke(160, 260);
  std::uniform_int_distribution<std::size_t> which(0, kGestureCount - 1);
  while (units.size() < 102) {
    const bool is_noise_sample = units.size() % 2 == 1;
    GestureScript s;
    s.amplitude = amp(rng);
    s.stroke_ms = stroke(rng);
    s.noise_sigma = 2.0;
    s.seed = rng();
    s.steps = {{is_noise_sample ? GestureClass::Noise : kAllGestures[which(rng)], 1000}};
    const auto found = segment_trace(synth_trace(s, cfg).samples, cfg);
    if (found.size() != 1) continue;  // a sample is one unit
    units.push_back({noise_features(found[0], cfg), is_noise_sample});
  }
  std::shuffle(units.begin(), units.end(), rng);
  const auto wrong_units = split_eval(units, 81);

  return {wrong_features == 0 && wrong_units == 0,
          fmt("feature corpus: %zu/%zu held-out errors; synthetic 81+21 split: %zu/21 errors", wrong_features,
              held, wrong_units)};
}

Outcome determinism() {
  int sessions = 0, identical = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SessionConfig cfg;
    cfg.dictionary = dictionary();
    Session s(cfg);
    std::mt19937_64 rng(seed);
    for (auto g : fixtures::random_gestures(200, seed)) {
      if (rng() % 40 == 0) s.reset();
      if (rng() % 50 == 0) s.handle({{"cmd", "nonsense"}});
      s.push_gesture(g);
    }
    std::vector<std::string> log;
    for (const auto& e : s.log()) log.push_back(e.to_line());
    const auto replayed = s.replay(log);
    ++sessions;
    identical += snapshot_json(replayed).dump() == s.last_state_event().payload["state"].dump() &&
                 replayed == s.state();
  }
  {
    SessionConfig cfg;
    cfg.mode = SessionMode::RawSamples;
    cfg.dictionary = dictionary();
    cfg.templates = std::make_shared<const TemplateSet>(fixtures::generator_templates());
    cfg.noise_model = std::make_shared<const NoiseClassifier>(fixtures::generator_noise_model());
    Session s(cfg);
    auto gestures = fixtures::random_gestures(30, 99);
    gestures.insert(gestures.begin() + 10, GestureClass::Noise);
    for (const auto& smp : synth_trace(fixtures::script_of(gestures)).samples) s.push_sample(smp);
    std::vector<std::string> log;
    for (const auto& e : s.log()) log.push_back(e.to_line());
    ++sessions;
    identical += snapshot_json(s.replay(log)).dump() == s.last_state_event().payload["state"].dump();
  }
  return {identical == sessions,
          fmt("%d/%d replayed logs give a byte-identical final snapshot", identical, sessions)};
}

Outcome sweep_plumbing() {
  std::vector<std::string> problems;
  for (double amplitude : {90.0, 45.0}) {
    // templates recorded at the corpus amplitude, as a calibration would
    const std::vector<GestureClass> all(kAllGestures.begin(), kAllGestures.end());
    const std::vector<LabelledTrace> calib{fixtures::labelled(fixtures::script_of(all, amplitude), "calib")};
    const auto templates = build_templates(calib);
    std::vector<LabelledTrace> corpus;
    for (std::uint64_t seed = 1; seed <= 4; ++seed)
      corpus.push_back(fixtures::labelled(fixtures::script_of(fixtures::random_gestures(14, seed * 31), amplitude),
                                          "s" + std::to_string(seed)));
    const auto rows = sweep_threshold(corpus, kDefaultThresholds, templates);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (amplitude > rows[i].threshold && rows[i].accuracy != 1.0)
        problems.push_back(fmt("amp %.0f thr %.0f acc %.3f", amplitude, rows[i].threshold, rows[i].accuracy));
      if (i > 0 && rows[i].mean_lasting_ms > rows[i - 1].mean_lasting_ms)
        problems.push_back(fmt("amp %.0f lasting rises at thr %.0f", amplitude, rows[i].threshold));
    }
  }
  std::string detail = "thresholds {10..50}, amplitudes 90 and 45: accuracy 100% above threshold, lasting non-increasing";
  if (!problems.empty()) {
    detail = "failed:";
    for (const auto& p : problems) detail += " [" + p + "]";
  }
  return {problems.empty(), detail};
}

}  // namespace

int main() {
  report("dtw_oracle_equivalence", dtw_oracle);
  report("segmentation_scenarios", segmentation);
  report("spatial_normalization", spatial_normalization);
  report("decoder_oracle_equivalence", decoder_oracle);
  report("exact_match_recovery", exact_recovery);
  report("end_to_end_pipeline", end_to_end);
  report("auto_correct_benefit", auto_correct_benefit);
  report("noise_rejection", noise_rejection);
  report("replay_determinism", determinism);
  report("threshold_sweep", sweep_plumbing);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

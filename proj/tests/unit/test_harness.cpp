#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "headkey/config.hpp"
#include "headkey/errors.hpp"
#include "headkey/metrics.hpp"
#include "headkey/sweep.hpp"
#include "headkey/synth.hpp"
#include "headkey/typist.hpp"
#include "oracles.hpp"

using namespace headkey;
using enum GestureClass;

namespace {

const std::shared_ptr<const Dictionary>& big_dict() {
  static const auto d = std::make_shared<const Dictionary>(Dictionary::load(fixtures::dictionary_path()));
  return d;
}

Decoder decoder(SpatialModel sp = {}, PredictorConfig cfg = {}) {
  return Decoder(std::make_shared<const Predictor>(big_dict(), default_layout(), sp, cfg));
}

const std::vector<std::string>& phrases() {
  static const auto p = load_phrases(fixtures::phrases_path());
  return p;
}

bool reachable(const oracle::ExhaustiveScorer& scorer, const std::string& w) {
  std::vector<int> raw;
  for (char c : w) raw.push_back(oracle::block_of_letter(c));
  for (const auto& s : scorer.top(raw, 3))
    if (s.word == w) return true;
  return false;
}

}  // namespace

// --- synthesis ---------------------------------------------------------------

TEST(Synth, SingleTapYieldsOneUnit) {
  const auto r = synth_trace(fixtures::script_of({SingleLeftTap}));
  EXPECT_EQ(segment_trace(r.samples).size(), 1u);
  ASSERT_EQ(r.labels.size(), 1u);
  EXPECT_EQ(r.labels[0].cls, SingleLeftTap);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Synth, EmptyScriptEmptyTrace) { EXPECT_TRUE(synth_trace({}).samples.empty()); }

TEST(Synth, EveryGestureSegmentsAndClassifies) {
  const auto set = fixtures::generator_templates();
  const auto gestures = fixtures::random_gestures(40, 99);
  const auto r = synth_trace(fixtures::script_of(gestures, 70.0));
  const auto units = segment_trace(r.samples);
  ASSERT_EQ(units.size(), gestures.size());
  for (std::size_t i = 0; i < units.size(); ++i) EXPECT_EQ(classify(units[i], set).cls, gestures[i]);
}

TEST(Synth, ShapesFollowTheVocabulary) {
  const auto left = synth_trace(fixtures::script_of({SingleLeftTap})).samples;
  const auto right = synth_trace(fixtures::script_of({SingleRightTap})).samples;
  ASSERT_EQ(left.size(), right.size());
  double first_left = 0;
  for (std::size_t i = 0; i < left.size(); ++i) {
    EXPECT_EQ(left[i].gz, -right[i].gz);
    EXPECT_EQ(left[i].gx, 0.0);
    if (first_left == 0 && left[i].gz != 0) first_left = left[i].gz;
  }
  EXPECT_GT(first_left, 0.0);  // left turn first
  const auto down = synth_trace(fixtures::script_of({SingleDownTap})).samples;
  for (const auto& s : down) EXPECT_EQ(s.gz, 0.0);
}

TEST(Synth, WeakAmplitudeWarns) {
  const auto r = synth_trace(fixtures::script_of({SingleLeftTap}, 25.0));
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Synth, NoiseIsSeeded) {
  auto s = fixtures::script_of({LeftSlide, DoubleLeftTap});
  s.noise_sigma = 3.0;
  EXPECT_EQ(synth_trace(s).samples, synth_trace(s).samples);
  auto other = s;
  other.seed = 2;
  EXPECT_NE(synth_trace(s).samples, synth_trace(other).samples);
}

TEST(Synth, ScriptParsing) {
  std::stringstream ss("# demo\namplitude = 70\nseed=5\nSingleLeftTap\nRightSlide 400\n\n");
  const auto s = parse_script(ss);
  EXPECT_EQ(s.amplitude, 70.0);
  EXPECT_EQ(s.seed, 5u);
  ASSERT_EQ(s.steps.size(), 2u);
  EXPECT_EQ(s.steps[1].gesture, RightSlide);
  EXPECT_EQ(s.steps[1].gap_ms, 400.0);
  std::stringstream bad("SingleLeftTap\nWobble\n");
  EXPECT_THROW(parse_script(bad), InvalidInput);
  std::stringstream negative("SingleLeftTap -5\n");
  EXPECT_THROW(parse_script(negative), InvalidInput);
}

// --- metrics -----------------------------------------------------------------

TEST(Metrics, Wpm) {
  EXPECT_DOUBLE_EQ(wpm("hello world", 60), 2.2);
  EXPECT_EQ(wpm("", 60), 0.0);
  EXPECT_DOUBLE_EQ(wpm(std::string(25, 'x'), 30), 10.0);
  EXPECT_THROW(wpm("x", 0), InvalidInput);
  EXPECT_DOUBLE_EQ(wpm(std::string(50, 'x'), 30), 2 * wpm(std::string(25, 'x'), 30));
}

TEST(Metrics, ErrorRates) {
  auto r = error_rates("cat", "cat", 0);
  EXPECT_EQ(r.uer, 0.0);
  EXPECT_EQ(r.ter, 0.0);
  r = error_rates("cat", "car", 0);
  EXPECT_DOUBLE_EQ(r.uer, 1.0 / 3);
  EXPECT_DOUBLE_EQ(r.ter, 1.0 / 3);
  r = error_rates("cat", "cat", 3);
  EXPECT_EQ(r.uer, 0.0);
  EXPECT_DOUBLE_EQ(r.ter, 0.5);
  for (const char* t : {"", "a", "the quick brown fox"}) EXPECT_EQ(error_rates(t, t, 0).ter, 0.0);
}

TEST(Metrics, ErrorRatesFromDecoderEvents) {
  const std::vector<DecoderEvent> events = {
      {DecoderEventKind::WordDeleted, LeftSlide, "cat", 3},
      {DecoderEventKind::PendingChanged, SingleLeftTap, "", 0},
  };
  EXPECT_DOUBLE_EQ(error_rates("cat", "cat", events).ter, 0.5);
}

TEST(Metrics, Msd) {
  EXPECT_EQ(msd("kitten", "sitting"), 3u);
  EXPECT_EQ(msd("", "abc"), 3u);
  EXPECT_EQ(msd("abc", "abc"), 0u);
}

TEST(Metrics, AutoCompleteRate) {
  EXPECT_DOUBLE_EQ(auto_complete_rate("hello", 3), 0.4);
  EXPECT_EQ(auto_complete_rate("hello", 5), 0.0);
  EXPECT_EQ(auto_complete_rate("a", 1), 0.0);
  EXPECT_THROW(auto_complete_rate("hello", 6), InvalidInput);
  EXPECT_THROW(auto_complete_rate("hello", 0), InvalidInput);
}

// --- typist simulation -------------------------------------------------------

TEST(Confusion, DefaultMirrorsSpatialModel) {
  const auto m = default_confusion(default_layout());
  EXPECT_NO_THROW(validate_confusion(m));
  EXPECT_EQ(m[gesture_index(SingleLeftTap)][gesture_index(SingleLeftTap)], 0.94);
  EXPECT_EQ(m[gesture_index(SingleLeftTap)][gesture_index(SingleRightTap)], 0.025);
  EXPECT_EQ(m[gesture_index(SingleLeftTap)][gesture_index(DoubleRightTap)], 0.01);
  EXPECT_EQ(m[gesture_index(SingleLeftTap)][gesture_index(LeftSlide)], 0.0);
  EXPECT_EQ(m[gesture_index(RightSlide)][gesture_index(RightSlide)], 1.0);
}

TEST(Confusion, ParseAndValidate) {
  std::stringstream ss;
  for (const auto& row : identity_confusion()) {
    for (double p : row) ss << p << ' ';
    ss << '\n';
  }
  EXPECT_EQ(parse_confusion(ss), identity_confusion());
  auto bad = identity_confusion();
  bad[2][2] = 0.9;
  EXPECT_THROW(validate_confusion(bad), InvalidInput);
  std::stringstream short_rows("1 0 0 0 0 0 0\n");
  EXPECT_THROW(parse_confusion(short_rows), InvalidInput);
}

TEST(Typist, EmptyPhraseListGivesZeroMetrics) {
  const auto r = simulate_typist({}, TypistModel{}, decoder(), 1);
  EXPECT_EQ(r.metrics, SessionMetrics{});
}

TEST(Typist, OutOfVocabularyWordIsNamed) {
  const std::vector<std::string> p = {"my watch qqqzx"};
  try {
    simulate_typist(p, TypistModel{}, decoder(), 1);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("qqqzx"), std::string::npos);
  }
}

TEST(Typist, IdentityConfusionRecoversEveryReachableWord) {
  const oracle::ExhaustiveScorer scorer(fixtures::dictionary_path());
  std::vector<std::string> clean;
  std::size_t reachable_words = 0;
  for (const auto& p : phrases()) {
    std::istringstream in(p);
    bool all = true;
    for (std::string w; in >> w;) {
      const bool ok = reachable(scorer, w);
      reachable_words += ok;
      all = all && ok;
    }
    if (all) clean.push_back(p);
  }
  ASSERT_GE(clean.size(), 10u);

  const auto dec = decoder();
  const auto r = simulate_typist(clean, TypistModel{}, dec, 5);
  EXPECT_EQ(r.metrics.uer, 0.0);
  EXPECT_EQ(r.metrics.ter, 0.0);
  EXPECT_EQ(r.metrics.word_recovery_rate, 1.0);
  for (const auto& p : r.phrases) EXPECT_EQ(p.transcript, p.target);

  const auto all = simulate_typist(phrases(), TypistModel{}, dec, 5);
  EXPECT_GE(all.metrics.words_recovered, reachable_words);
}

TEST(Typist, ReproducibleAndThreadIndependent) {
  const auto dec = decoder();
  TypistModel t;
  t.confusion = default_confusion(default_layout());
  const auto a = simulate_typist(phrases(), t, dec, 20220101);
  EXPECT_EQ(a, simulate_typist(phrases(), t, dec, 20220101));
  EXPECT_EQ(a, simulate_typist_serial(phrases(), t, dec, 20220101));
  EXPECT_NE(a, simulate_typist(phrases(), t, dec, 20220102));
}

TEST(Typist, MetricsStayInRange) {
  const auto dec = decoder();
  TypistModel t;
  t.confusion = default_confusion(default_layout());
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto m = simulate_typist(phrases(), t, dec, seed).metrics;
    EXPECT_GE(m.wpm, 0.0);
    EXPECT_LE(0.0, m.uer);
    EXPECT_LE(m.uer, m.ter);
    EXPECT_LE(m.ter, 1.0);
    EXPECT_GE(m.auto_complete_rate, 0.0);
    EXPECT_LT(m.auto_complete_rate, 1.0);
    EXPECT_EQ(m.phrase_count, phrases().size());
  }
}

TEST(Typist, AutoCorrectAtLeastMatchesBaseline) {
  TypistModel t;
  t.confusion = default_confusion(default_layout());
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    const auto bayes = simulate_typist(phrases(), t, decoder(), seed).metrics;
    const auto base = simulate_typist(phrases(), t, decoder(SpatialModel::indicator()), seed).metrics;
    EXPECT_GE(bayes.word_recovery_rate, base.word_recovery_rate) << "seed " << seed;
  }
}

TEST(Typist, AutoCompleteRisesWithTopK) {
  double prev = -1.0;
  for (std::size_t k = 1; k <= 5; ++k) {
    PredictorConfig cfg;
    cfg.top_k = k;
    const auto m = simulate_typist(phrases(), TypistModel{}, decoder({}, cfg), 3).metrics;
    EXPECT_GE(m.auto_complete_rate, prev) << "top_k " << k;
    prev = m.auto_complete_rate;
  }
}

// --- threshold sweep ---------------------------------------------------------

TEST(Sweep, NoiseFreeCorpusIsPerfectWhereAmplitudeExceedsThreshold) {
  std::vector<LabelledTrace> corpus;
  for (std::uint64_t seed = 1; seed <= 3; ++seed)
    corpus.push_back(fixtures::labelled(fixtures::script_of(fixtures::random_gestures(14, seed), 90.0),
                                        "c" + std::to_string(seed)));
  const auto rows = sweep_threshold(corpus, kDefaultThresholds, fixtures::generator_templates());
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].accuracy, 1.0) << rows[i].threshold;
    EXPECT_EQ(rows[i].labels, 42u);
    if (i > 0) { EXPECT_LE(rows[i].mean_lasting_ms, rows[i - 1].mean_lasting_ms); }
  }
}

TEST(Sweep, ThresholdAboveEverythingDetectsNothing) {
  const std::vector<LabelledTrace> corpus = {
      fixtures::labelled(fixtures::script_of({SingleLeftTap, RightSlide}, 60.0))};
  const std::vector<double> grid = {500};
  const auto rows = sweep_threshold(corpus, grid, fixtures::generator_templates());
  EXPECT_TRUE(rows[0].no_detection);
  EXPECT_EQ(rows[0].accuracy, 0.0);
  EXPECT_EQ(rows[0].units, 0u);
}

TEST(Sweep, LastingTimeNonIncreasingOnSteppedPulses) {
  // Staircase pulses: every threshold step removes whole plateaus.
  LabelledTrace tr;
  tr.name = "steps";
  tr.samples = fixtures::pulses({{1000, 0}, {100, 15}, {100, 25}, {100, 35}, {100, 45}, {100, 60},
                                 {100, 45}, {100, 35}, {100, 25}, {100, 15}, {1500, 0}});
  tr.labels = {{SingleDownTap, 1000, 1900}};
  const auto rows = sweep_threshold(std::vector<LabelledTrace>{tr}, kDefaultThresholds,
                                    fixtures::generator_templates());
  for (std::size_t i = 1; i < rows.size(); ++i)
    EXPECT_LT(rows[i].mean_lasting_ms, rows[i - 1].mean_lasting_ms);
}

TEST(Sweep, UnlabelledTraceRejected) {
  const std::vector<LabelledTrace> corpus = {{"bare", fixtures::pulses({{100, 0}}), {}}};
  EXPECT_THROW(sweep_threshold(corpus, kDefaultThresholds, fixtures::generator_templates()), InvalidInput);
}

// --- configuration -----------------------------------------------------------

TEST(Config, ParsesEveryKey) {
  std::stringstream ss(
      "# tuned\npeak_threshold = 25\nleft_buffer_ms=150\nright_buffer_ms = 100\ntolerance_ms = 250\n"
      "sample_rate_hz = 50\nmax_unit_ms = 4000\nk = 3\nz_normalize = true\nprominence_frac = 0.3\n"
      "p_same = 0.9\np_adjacent = 0.04\np_diagonal = 0.02\nalpha = 0.5\nmax_extra_letters = 4\n"
      "top_k = 5\n");
  const auto c = parse_config(ss);
  EXPECT_EQ(c.segmentation.peak_threshold, 25.0);
  EXPECT_EQ(c.segmentation.sample_rate_hz, 50.0);
  EXPECT_EQ(c.recognizer.k, 3u);
  EXPECT_TRUE(c.recognizer.z_normalize);
  EXPECT_EQ(c.spatial.p_diagonal, 0.02);
  EXPECT_EQ(c.predictor.top_k, 5u);
  EXPECT_EQ(c.predictor.max_extra_letters, 4u);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, Errors) {
  std::stringstream unknown("peak_threshold = 30\nbogus = 1\n");
  try {
    parse_config(unknown);
    FAIL();
  } catch (const InvalidInput& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::stringstream bad_number("alpha = lots\n");
  EXPECT_THROW(parse_config(bad_number), InvalidInput);
  std::stringstream bad_model("p_same = 0.5\n");
  EXPECT_THROW(parse_config(bad_model).validate(), InvalidInput);
}

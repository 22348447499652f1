// Serial reference vs OpenMP for the three parallel kernels.
// Run: headkey_bench [--benchmark_filter=...]; thread count from OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>

#include "fixtures.hpp"
#include "headkey/decoder.hpp"
#include "headkey/recognizer.hpp"
#include "headkey/typist.hpp"

using namespace headkey;

namespace {

// A template bank about the size of a few calibration rounds.
const TemplateSet& bank() {
  static const TemplateSet set = [] {
    TemplateSet s;
    const auto base = fixtures::generator_templates();
    std::mt19937_64 rng(3);
    std::normal_distribution<double> jitter(0.0, 3.0);
    for (int copy = 0; copy < 20; ++copy)
      for (const auto& t : base.entries()) {
        auto series = t.series;
        for (auto& p : series.points)
          for (auto& v : p) v += jitter(rng);
        s.add(std::move(series), t.cls);
      }
    return s;
  }();
  return set;
}

const GestureSeries& query() { return bank().entries()[5].prepared; }

void BM_TemplateDistancesSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(template_distances_serial(query(), bank()));
}
void BM_TemplateDistances(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(template_distances(query(), bank()));
}

const Predictor& predictor() {
  static const Predictor p(std::make_shared<const Dictionary>(Dictionary::load(fixtures::dictionary_path())),
                           default_layout());
  return p;
}

const std::vector<Block> kPending = {Block::TR, Block::TL, Block::BR, Block::TL, Block::BL};

void BM_TopCandidatesSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(predictor().top_candidates_serial(kPending));
}
void BM_TopCandidates(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(predictor().top_candidates(kPending));
}

struct TypistFixture {
  std::vector<std::string> phrases = load_phrases(fixtures::phrases_path());
  TypistModel model;
  Decoder decoder{std::make_shared<const Predictor>(predictor())};
  TypistFixture() { model.confusion = default_confusion(default_layout()); }
};

const TypistFixture& typist() {
  static const TypistFixture f;
  return f;
}

void BM_SimulateTypistSerial(benchmark::State& st) {
  const auto& f = typist();
  for (auto _ : st) benchmark::DoNotOptimize(simulate_typist_serial(f.phrases, f.model, f.decoder, 7));
}
void BM_SimulateTypist(benchmark::State& st) {
  const auto& f = typist();
  for (auto _ : st) benchmark::DoNotOptimize(simulate_typist(f.phrases, f.model, f.decoder, 7));
}

}  // namespace

BENCHMARK(BM_TemplateDistancesSerial);
BENCHMARK(BM_TemplateDistances);
BENCHMARK(BM_TopCandidatesSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TopCandidates)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SimulateTypistSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateTypist)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

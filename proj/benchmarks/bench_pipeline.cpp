#include <benchmark/benchmark.h>

#include "crasplab/align.hpp"
#include "crasplab/datagen.hpp"
#include "crasplab/glitch.hpp"
#include "crasplab/rng.hpp"
#include "crasplab/textgen.hpp"

using namespace crasplab;

static std::vector<std::string> tokens_of_length(int n, int alphabet, Rng& rng) {
  std::vector<std::string> out(n);
  for (auto& t : out) t = "w" + std::to_string(rng.below(alphabet));
  return out;
}

static void BM_Align(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng = substream(1, {1});
  auto src = tokens_of_length(n, 70, rng);
  auto out = src;
  // A few copy-style corruptions.
  for (int k = 0; k < n / 50 + 1; ++k) {
    out.insert(out.begin() + rng.below(out.size()), "w999");
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(align(src, out));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_Align)->Arg(100)->Arg(500)->Unit(benchmark::kMicrosecond);

static void BM_AnalyzePair(benchmark::State& state) {
  Rng rng = substream(1, {2});
  auto src = tokens_of_length(500, 70, rng);
  auto out = src;
  out.insert(out.begin() + 200, {"w999", "w998", "w997"});
  for (auto _ : state) {
    benchmark::DoNotOptimize(analyze(src, out));
  }
}
BENCHMARK(BM_AnalyzePair)->Unit(benchmark::kMillisecond);

static void BM_GenRetrieval(benchmark::State& state) {
  GenSpec spec;
  spec.task = TaskKind::NRLast;
  spec.lengths = {50};
  spec.count = 100;
  spec.seed = 3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_retrieval(spec, 1));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_GenRetrieval)->Unit(benchmark::kMillisecond);

static void BM_GenLorem(benchmark::State& state) {
  LoremSpec spec;
  spec.count = 10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen_lorem(spec, 1));
  }
  state.SetItemsProcessed(state.iterations() * 10);
}
BENCHMARK(BM_GenLorem)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

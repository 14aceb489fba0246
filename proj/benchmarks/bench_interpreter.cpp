#include <benchmark/benchmark.h>

#include "crasplab/datagen.hpp"
#include "crasplab/interpreter.hpp"
#include "crasplab/reference.hpp"
#include "crasplab/rng.hpp"

using namespace crasplab;

// Single next-token decision for a retrieval construction over the default
// 62-symbol alphabet, the unit of work in construction verification.
static void BM_RetrievalNextToken(benchmark::State& state) {
  const int length = static_cast<int>(state.range(0));
  Program program = build_reference_program(TaskKind::UR);
  Rng rng = substream(3, {1});
  RetrievalInstance inst =
      sample_retrieval_instance(true, length, default_alphabet(), false, rng);
  auto input = retrieval_program_input(inst);
  Runtime rt(program);
  for (auto _ : state) {
    rt.reset();
    for (const Symbol& s : input) rt.push(s);
    benchmark::DoNotOptimize(rt.decide());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(input.size()));
}
BENCHMARK(BM_RetrievalNextToken)->Arg(50)->Arg(200)->Arg(500);

// Full autoregressive copy: the program size grows quadratically with the
// alphabet, so this dominates the acceptance run.
static void BM_CopyGenerate(benchmark::State& state) {
  const int length = static_cast<int>(state.range(0));
  auto alphabet = synthetic_alphabet(length);
  Program program = build_reference_program(TaskKind::UF, alphabet);
  Rng rng = substream(3, {2});
  CopyInstance inst = sample_copy_instance(true, length, alphabet, rng);
  auto prefix = copy_program_prefix(inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate(program, prefix, length + 2));
  }
  state.SetItemsProcessed(state.iterations() * (2 * length + 3));
}
BENCHMARK(BM_CopyGenerate)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_ReferenceEvaluate(benchmark::State& state) {
  Program program = build_reference_program(TaskKind::UR);
  Rng rng = substream(3, {3});
  RetrievalInstance inst = sample_retrieval_instance(true, 50, default_alphabet(), false, rng);
  auto input = retrieval_program_input(inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(program, input));
  }
}
BENCHMARK(BM_ReferenceEvaluate)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

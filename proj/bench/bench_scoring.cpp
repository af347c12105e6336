#include "isde/mirror_kde.hpp"
#include "isde/scoring.hpp"
#include "support.hpp"

#include <benchmark/benchmark.h>

using namespace isde;

namespace {

void
score_table(benchmark::State& state, bool parallel)
{
  const int d = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  const auto train = testing::uniform_matrix(1000, d, 1);
  const auto holdout = testing::uniform_matrix(1000, d, 2);
  for (auto _ : state) {
    auto built = parallel ? build_score_table(train, holdout, k, {}, Kernel())
                          : build_score_table_serial(train, holdout, k, {}, Kernel());
    benchmark::DoNotOptimize(built.table);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(count_subsets(d, k)));
}

void
BM_ScoreTableParallel(benchmark::State& state)
{
  score_table(state, true);
}

void
BM_ScoreTableSerial(benchmark::State& state)
{
  score_table(state, false);
}

void
evaluation(benchmark::State& state, bool pruned)
{
  const int p = static_cast<int>(state.range(0));
  const auto data = testing::uniform_matrix(5000, p, 3);
  const auto model = fit(data, FeatureSubset((1u << p) - 1, p), {}, Kernel());
  const auto points = testing::uniform_matrix(256, p, 4);
  std::size_t i = 0;
  for (auto _ : state) {
    const auto x = points.row(i++ % points.rows());
    benchmark::DoNotOptimize(pruned ? model.evaluate(x) : model.evaluate_reference(x));
  }
}

void
BM_EvaluatePruned(benchmark::State& state)
{
  evaluation(state, true);
}

void
BM_EvaluateReference(benchmark::State& state)
{
  evaluation(state, false);
}

} // namespace

BENCHMARK(BM_ScoreTableParallel)->Args({ 6, 2 })->Args({ 8, 3 })->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScoreTableSerial)->Args({ 6, 2 })->Args({ 8, 3 })->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvaluatePruned)->DenseRange(1, 3);
BENCHMARK(BM_EvaluateReference)->DenseRange(1, 3);

BENCHMARK_MAIN();

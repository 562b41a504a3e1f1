#include <benchmark/benchmark.h>

#include "dfcnn/model.hpp"
#include "dfcnn/network.hpp"
#include "dfcnn/partition.hpp"
#include "dfcnn/random.hpp"
#include "dfcnn/series.hpp"
#include "test_support.hpp"

namespace {

using namespace dfcnn;

void BM_Fit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto series = TimeSeries::from_values(testing::trend_sine(n));
  for (auto _ : state) benchmark::DoNotOptimize(fit(series, ModelConfig{}));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Fit)->RangeMultiplier(2)->Range(100, 800)->Unit(benchmark::kMillisecond)->Complexity();

void BM_TokenizeBatch(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = difference(testing::trend_sine(n));
  const auto grid = build_grid(d.diffs);
  const auto windows = sliding_windows(d.diffs, 2);
  for (auto _ : state) benchmark::DoNotOptimize(tokenize_batch(windows, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(windows.count()));
}
BENCHMARK(BM_TokenizeBatch)->Arg(200)->Arg(2000);

void BM_ForwardBackward(benchmark::State& state) {
  const auto batch = static_cast<std::size_t>(state.range(0));
  const std::size_t lookback = 4;
  SplitMix64 rng(11);
  Tensor3 tokens(batch, lookback, 3);
  for (double& x : tokens.data()) x = testing::uniform(rng, -2.0, 2.0);
  std::vector<double> target(batch, 0.5);
  Network net(init_params(lookback, 4, 3407));
  for (auto _ : state) {
    const auto loss = mse_loss(net.forward(tokens), target);
    benchmark::DoNotOptimize(net.backward(loss.grad));
  }
}
BENCHMARK(BM_ForwardBackward)->Arg(64)->Arg(512);

}  // namespace
BENCHMARK_MAIN();

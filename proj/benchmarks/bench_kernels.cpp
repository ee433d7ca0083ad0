#include <benchmark/benchmark.h>

#include <Eigen/Dense>
#include <vector>

#include "emrsense/detector.hpp"
#include "emrsense/montecarlo.hpp"
#include "emrsense/numerics.hpp"
#include "emrsense/quantizer.hpp"
#include "emrsense/rng.hpp"
#include "emrsense/signal.hpp"

namespace {

void BM_PhiloxWords(benchmark::State& state) {
  emrsense::RngStream rng(1, 0);
  std::vector<std::uint64_t> buffer(4096);
  for (auto _ : state) {
    rng.fill_bits(buffer);
    benchmark::DoNotOptimize(buffer.data());
  }
  state.SetBytesProcessed(state.iterations() * buffer.size() * sizeof(std::uint64_t));
}
BENCHMARK(BM_PhiloxWords);

void BM_GaussianFill(benchmark::State& state) {
  emrsense::RngStream rng(1, 0);
  std::vector<double> buffer(state.range(0));
  for (auto _ : state) {
    rng.fill_gaussian(buffer);
    benchmark::DoNotOptimize(buffer.data());
  }
  state.SetItemsProcessed(state.iterations() * buffer.size());
}
BENCHMARK(BM_GaussianFill)->Arg(1 << 12)->Arg(1 << 16);

void BM_FrameGeneration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = n / 2;
  const emrsense::FrameGenerator generator(
      emrsense::ScenarioConfig::single_pu(m, n, -6.0, -1.0471975511965976));
  emrsense::ComplexFrame frame, scratch;
  std::uint64_t trial = 0;
  for (auto _ : state) {
    emrsense::RngStream rng(7, trial++);
    generator.generate(rng, frame, scratch);
    benchmark::DoNotOptimize(frame.data());
  }
}
BENCHMARK(BM_FrameGeneration)->Arg(64)->Arg(256);

void BM_QuantizeAndOneBitStatistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = n / 2;
  const emrsense::FrameGenerator generator(emrsense::ScenarioConfig::noise_only(m, n));
  emrsense::RngStream rng(3, 0);
  const emrsense::ComplexFrame frame = generator.generate(rng);
  emrsense::SignFrame signs;
  for (auto _ : state) {
    emrsense::one_bit_quantize(frame, signs);
    benchmark::DoNotOptimize(emrsense::emr_one_bit(signs));
  }
}
BENCHMARK(BM_QuantizeAndOneBitStatistic)->Arg(128)->Arg(512);

void BM_FullResStatistic(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = n / 2;
  const emrsense::FrameGenerator generator(emrsense::ScenarioConfig::noise_only(m, n));
  emrsense::RngStream rng(4, 0);
  const emrsense::ComplexFrame frame = generator.generate(rng);
  Eigen::MatrixXcd phi(m, m);
  for (auto _ : state) {
    phi.setZero();
    phi.selfadjointView<Eigen::Lower>().rankUpdate(frame, 1.0 / n);
    benchmark::DoNotOptimize(phi.data());
  }
  state.SetItemsProcessed(state.iterations() * 4ll * m * m * n);
}
BENCHMARK(BM_FullResStatistic)->Arg(128)->Arg(512);

void BM_H0SignTrial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = n / 2;
  const auto config = emrsense::ScenarioConfig::noise_only(m, n);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const auto batch = emrsense::run_trials(config, {.one_bit = true}, 8, seed++,
                                            emrsense::EngineOptions{.workers = 1});
    benchmark::DoNotOptimize(batch.one_bit.data());
  }
  state.SetItemsProcessed(state.iterations() * 8);
}
BENCHMARK(BM_H0SignTrial)->Arg(128)->Arg(512);

void BM_ChiSquareQuantile(benchmark::State& state) {
  double p = 0.5;
  for (auto _ : state) {
    p = 0.5 + 0.49 * std::sin(p);
    benchmark::DoNotOptimize(emrsense::chi_square_quantile(p, 2016));
  }
}
BENCHMARK(BM_ChiSquareQuantile);

}  // namespace

BENCHMARK_MAIN();

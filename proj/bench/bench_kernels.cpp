#include "leosb/campaign.hpp"
#include "leosb/numerics.hpp"
#include "leosb/rng.hpp"

#include <benchmark/benchmark.h>

using namespace leosb;

namespace {

ComplexMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  RandomStream rng(seed);
  ComplexMatrix m(r, c);
  for (auto& v : m.values()) v = rng.complex_normal(1.0);
  return m;
}

void BM_MatmulSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, n, 1), b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::matmul(a, b));
}

void BM_MatmulParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_matrix(n, n, 1), b = random_matrix(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b));
}

void BM_RightPinv(benchmark::State& state) {
  const auto a = random_matrix(10, 100, 3);
  for (auto _ : state) benchmark::DoNotOptimize(right_pinv(a));
}

SystemConfig small_campaign() {
  SystemConfig cfg;
  cfg.trials = 8;
  return cfg;
}

void BM_CampaignSerial(benchmark::State& state) {
  const auto cfg = small_campaign();
  const auto e = static_cast<Experiment>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_campaign_serial(cfg, e, {20.0}));
}

void BM_CampaignParallel(benchmark::State& state) {
  const auto cfg = small_campaign();
  const auto e = static_cast<Experiment>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_campaign(cfg, e, {20.0}));
}

}  // namespace

BENCHMARK(BM_MatmulSerial)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_MatmulParallel)->Arg(64)->Arg(128)->Arg(256);
BENCHMARK(BM_RightPinv);
BENCHMARK(BM_CampaignSerial)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CampaignParallel)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

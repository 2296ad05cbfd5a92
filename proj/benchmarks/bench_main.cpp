#include <benchmark/benchmark.h>

#include "covertnet/analytic.hpp"
#include "covertnet/game.hpp"
#include "covertnet/montecarlo.hpp"
#include "covertnet/stable.hpp"

namespace {

using namespace covertnet;

const NetworkParams kParams{};
const PowerPair kPowers{0.0316, 0.1};  // 15 dBm / -10 dBW

void BM_InterferenceCdf(benchmark::State& state) {
  const StableScale scale = adversary_scale(kParams, kPowers);
  double t = 1e-10;
  for (auto _ : state) {
    benchmark::DoNotOptimize(interference_cdf(t, scale));
    t *= 1.0000001;
  }
}
BENCHMARK(BM_InterferenceCdf);

void BM_InterferenceCdfBromwich(benchmark::State& state) {
  StableScale scale = adversary_scale(kParams, kPowers);
  scale.alpha = 3.5;
  // Natural scale of the law, i.e. the bulk of the distribution; far tails
  // short-circuit and would not exercise the oscillatory sum.
  const double t = std::pow(scale.iota, 0.5 * scale.alpha);
  for (auto _ : state) {
    benchmark::DoNotOptimize(interference_cdf_bromwich(t, scale));
  }
}
BENCHMARK(BM_InterferenceCdfBromwich);

void BM_MissDetection(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(md_probability(kPowers, 1e-9, kParams));
  }
}
BENCHMARK(BM_MissDetection);

void BM_ErgodicRate(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ergodic_rate(kPowers, kParams, true));
  }
}
BENCHMARK(BM_ErgodicRate);

void BM_BestResponseTau(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_response_tau(kPowers, kParams));
  }
}
BENCHMARK(BM_BestResponseTau);

void BM_MonteCarloD2dSuccess(benchmark::State& state) {
  SimConfig sim;
  sim.n_trials = state.range(0);
  sim.seed = 7;
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_d2d_success(kPowers, kParams, sim));
  }
}
BENCHMARK(BM_MonteCarloD2dSuccess)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();

// Microbenchmarks for the hot paths: the waterfill kernel, the online
// algorithms end to end, and the offline benchmark solver.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "nashstream/generators.hpp"
#include "nashstream/metrics.hpp"
#include "nashstream/offline_eg.hpp"
#include "nashstream/online.hpp"
#include "nashstream/waterfill.hpp"

namespace {

using namespace nashstream;

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo,
                                  double hi) {
  std::mt19937_64 rng(seed);
  std::vector<double> out(n);
  for (double& x : out) x = lo + (hi - lo) * unit_from_bits(rng());
  return out;
}

void bm_waterfill(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> utils = random_vector(n, 1, 0.5, 4.0);
  std::vector<double> values = random_vector(n, 2, 0.0, 1.0);
  for (auto _ : state) {
    WaterfillResult r = waterfill(utils, values, 1.0);
    benchmark::DoNotOptimize(r.amounts.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(n));
}
BENCHMARK(bm_waterfill)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

void bm_myopic(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  Instance inst = gen_random_balanced(n, 200, 4.0, 7);
  for (auto _ : state) {
    RunTrace t = run_myopic_greedy(inst, TraceDetail::summary);
    benchmark::DoNotOptimize(t.final_utilities.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 200);
}
BENCHMARK(bm_myopic)->Arg(4)->Arg(16)->Arg(64);

void bm_half_and_half(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  Instance inst = gen_random_balanced(n, 200, 4.0, 7);
  for (auto _ : state) {
    RunTrace t = run_half_and_half(inst, 4.0, TraceDetail::summary);
    benchmark::DoNotOptimize(t.final_utilities.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 200);
}
BENCHMARK(bm_half_and_half)->Arg(4)->Arg(16)->Arg(64);

void bm_rounded(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  double mu = static_cast<double>(state.range(1));
  Instance inst = gen_random_balanced(n, 200, 4.0, 7);
  for (auto _ : state) {
    RunTrace t = run_rounded_greedy(inst, mu, TraceDetail::summary);
    benchmark::DoNotOptimize(t.final_utilities.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 200);
}
BENCHMARK(bm_rounded)->Args({4, 16})->Args({16, 16})->Args({16, 1024});

void bm_solve_eg(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  Instance inst = gen_random_balanced(n, 40, 4.0, 7);
  for (auto _ : state) {
    EGSolution sol = solve_eg(inst);
    benchmark::DoNotOptimize(sol.utilities.data());
  }
}
BENCHMARK(bm_solve_eg)->Arg(2)->Arg(4)->Arg(8);

void bm_nash_welfare(benchmark::State& state) {
  std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> utils = random_vector(n, 3, 0.1, 100.0);
  for (auto _ : state) {
    double nw = nash_welfare(utils);
    benchmark::DoNotOptimize(nw);
  }
}
BENCHMARK(bm_nash_welfare)->Arg(16)->Arg(256);

}  // namespace

BENCHMARK_MAIN();

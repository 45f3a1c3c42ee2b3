#include <benchmark/benchmark.h>

#include <random>

#include "seriate/born_machine.hpp"
#include "seriate/dataset.hpp"
#include "seriate/mi_graph.hpp"
#include "seriate/seriation.hpp"
#include "seriate/symmetric_eigen.hpp"

using namespace seriate;

namespace {

WeightMatrix random_weights(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  WeightMatrix w(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) w.set(i, j, u(rng));
  return w;
}

void BM_JacobiLaplacian(benchmark::State& state) {
  const auto l = laplacian(random_weights(static_cast<std::size_t>(state.range(0)), 1));
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigen(l));
}
BENCHMARK(BM_JacobiLaplacian)->Arg(12)->Arg(20)->Arg(64);

void BM_EmpiricalMi(benchmark::State& state) {
  const auto ds = gen_markov_chain(static_cast<std::size_t>(state.range(0)), 0.2,
                                   static_cast<std::size_t>(state.range(1)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(empirical_pairwise_mi(ds));
  state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_EmpiricalMi)->Args({12, 1000})->Args({12, 100000})->Args({20, 100000});

void BM_FiedlerOrder(benchmark::State& state) {
  const auto w = random_weights(static_cast<std::size_t>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(fiedler_order(w));
}
BENCHMARK(BM_FiedlerOrder)->Arg(12)->Arg(20);

void BM_BruteForceOrder(benchmark::State& state) {
  const auto w = random_weights(static_cast<std::size_t>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_order(w));
}
BENCHMARK(BM_BruteForceOrder)->Arg(7)->Arg(8)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_NllGradient(benchmark::State& state) {
  const auto ds = gen_bas(4, 3);
  const auto m = init_random_mps(12, static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) benchmark::DoNotOptimize(nll_gradient(m, ds));
}
BENCHMARK(BM_NllGradient)->Arg(2)->Arg(8)->Arg(16);

void BM_Sample(benchmark::State& state) {
  const auto m = init_random_mps(12, static_cast<std::size_t>(state.range(0)), 6);
  for (auto _ : state) benchmark::DoNotOptimize(sample(m, 1000, 7));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Sample)->Arg(4)->Arg(16);

void BM_ExactDistribution(benchmark::State& state) {
  const auto m = init_random_mps(static_cast<std::size_t>(state.range(0)), 8, 8);
  for (auto _ : state) benchmark::DoNotOptimize(exact_distribution(m));
}
BENCHMARK(BM_ExactDistribution)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

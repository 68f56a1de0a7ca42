#include <benchmark/benchmark.h>

#include <random>

#include "modbench/approx.hpp"
#include "modbench/axioms.hpp"
#include "modbench/lemmas.hpp"

using namespace modbench;

namespace {

std::vector<std::size_t> pattern(int index) {
  static const std::vector<std::vector<std::size_t>> patterns{{2}, {3}, {2, 2}, {2, 3}, {3, 3}};
  return patterns.at(static_cast<std::size_t>(index));
}

void BM_HermEig(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (auto& z : a.entries()) z = {g(rng), g(rng)};
  const CMatrix h = (a + a.adjoint()) * Complex(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(herm_eig(h));
}
BENCHMARK(BM_HermEig)->Arg(4)->Arg(9)->Arg(13)->Arg(18);

void BM_BuildModular(benchmark::State& state) {
  const auto space = random_space(pattern(static_cast<int>(state.range(0))), 3, 0.02);
  for (auto _ : state) benchmark::DoNotOptimize(build_modular(space));
}
BENCHMARK(BM_BuildModular)->DenseRange(0, 4);

void BM_BuildRvd(benchmark::State& state) {
  const auto space = random_space(pattern(static_cast<int>(state.range(0))), 3, 0.02);
  for (auto _ : state) benchmark::DoNotOptimize(build_rvd(space));
}
BENCHMARK(BM_BuildRvd)->DenseRange(0, 4);

void BM_FitPowerIt(benchmark::State& state) {
  const double target = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_power_it_target(1.0, target, {0.2, 1.8}));
}
BENCHMARK(BM_FitPowerIt)->Arg(10)->Arg(50)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ApproximateDeltaIt(benchmark::State& state) {
  const Instance inst(random_space({2, 3}, 5, 0.02));
  const int mn = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(approximate_delta_it(inst.rvd(), 1.0, mn, mn));
}
BENCHMARK(BM_ApproximateDeltaIt)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_LemmaSuite(benchmark::State& state) {
  const Instance inst(random_space(pattern(static_cast<int>(state.range(0))), 7, 0.02));
  LemmaConfig config;
  config.trials = 100;
  for (auto _ : state) benchmark::DoNotOptimize(run_lemma_suite(inst, config));
}
BENCHMARK(BM_LemmaSuite)->Arg(0)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_CheckTheory(benchmark::State& state) {
  const Instance inst(random_space({2, 3}, 9, 0.02));
  const auto theory = state.range(0) == 0 ? Theory::wstar : Theory::wstar_mod;
  EvalConfig config;
  config.samples = 100;
  for (auto _ : state) benchmark::DoNotOptimize(check_theory(inst, theory, {}, config));
}
BENCHMARK(BM_CheckTheory)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

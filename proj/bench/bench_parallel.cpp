// Serial reference vs OpenMP kernels: flat-metric grid search and the numeric
// equivariance check over many sample points.

#include <benchmark/benchmark.h>

#include <random>

#include "rigidgeo/lie.hpp"
#include "rigidgeo/modular.hpp"

using namespace rigidgeo;

namespace {

const std::vector<long> kValues = {0, 1, -1, 2};  // 4^6 = 4096 candidates

void BM_FlatSearchSerial(benchmark::State& state) {
  const auto alg = lie::builtin("heisenberg3").algebra;
  for (auto _ : state) benchmark::DoNotOptimize(lie::flat_metric_search_serial(alg, kValues));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(lie::flat_search_candidate_count(3, kValues.size())));
}

void BM_FlatSearchParallel(benchmark::State& state) {
  const auto alg = lie::builtin("heisenberg3").algebra;
  for (auto _ : state) benchmark::DoNotOptimize(lie::flat_metric_search_parallel(alg, kValues));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(lie::flat_search_candidate_count(3, kValues.size())));
}

std::vector<modular::cd> points(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> re(-1, 1), im(0.3, 3);
  std::vector<modular::cd> out;
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(re(rng), im(rng));
  return out;
}

void BM_NumericCheckSerial(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  const auto g = GroupElement::make(2, 1, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(modular::numeric_equivariance_check_serial(1.0, 3.0, g, pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_NumericCheckParallel(benchmark::State& state) {
  const auto pts = points(static_cast<std::size_t>(state.range(0)));
  const auto g = GroupElement::make(2, 1, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(modular::numeric_equivariance_check_parallel(1.0, 3.0, g, pts));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_FlatSearchSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_FlatSearchParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NumericCheckSerial)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_NumericCheckParallel)->Arg(256)->Arg(4096)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

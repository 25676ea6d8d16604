#include "mitk/kernels.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

// The I_2 Monte Carlo integrand in its bounded form.
double weight(std::span<const double> u) {
  const double y1 = std::pow(u[0], -2.0);
  const double y2 = std::pow(u[1], -2.0);
  const double s = y1 + y2;
  return 4.0 * y1 * y2 / (u[0] * u[1] * s * s * s);
}

void BM_mc_serial(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mitk::kernels::mc_integrate_serial(weight, 2, n, 7));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

void BM_mc_parallel(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mitk::kernels::mc_integrate_parallel(weight, 2, n, 7));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}

double heavy(std::size_t i) {
  double acc = 0.0;
  for (int k = 1; k < 20000; ++k) acc += std::sin(static_cast<double>(i + k)) / k;
  return acc;
}

void BM_map_serial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(mitk::kernels::map_serial<double>(static_cast<std::size_t>(state.range(0)), heavy));
  }
}

void BM_map_parallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(mitk::kernels::map_parallel<double>(static_cast<std::size_t>(state.range(0)), heavy));
  }
}

}  // namespace

BENCHMARK(BM_mc_serial)->Arg(1 << 20)->Arg(1 << 23)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_parallel)->Arg(1 << 20)->Arg(1 << 23)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_map_serial)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_map_parallel)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

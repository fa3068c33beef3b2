// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include "ptodist/datagen.hpp"
#include "ptodist/ground_cost.hpp"
#include "ptodist/transfer.hpp"

using namespace ptodist;

namespace {

struct GridPair {
  PtODataset source, target;
};

GridPair grid_pair(std::size_t n) {
  datagen::GridGenOptions a, b;
  a.class_cost_seed = 1;
  b.class_cost_seed = 2;
  a.map_seed = b.map_seed = 3;
  a.n_instances = b.n_instances = n;
  return {datagen::gen_grid(a), datagen::gen_grid(b)};
}

struct SweepSetup {
  std::vector<PtODataset> sources;
  PtODataset target;
  std::vector<double> response;
};

const SweepSetup& sweep_setup() {
  static const SweepSetup s = [] {
    SweepSetup out;
    out.target = datagen::gen_topk(0.65, 25, 40, 1, 3);
    for (std::size_t i = 0; i < 6; ++i) {
      out.sources.push_back(datagen::gen_topk(0.25 * static_cast<double>(i), 25, 40, 1, 100 + i));
      out.response.push_back(-static_cast<double>(i));
    }
    return out;
  }();
  return s;
}

void BM_ComponentMatrices(benchmark::State& state) {
  const auto p = grid_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(component_matrices(p.source, p.target, CostMode::as_written));
  }
}

void BM_ComponentMatricesSerial(benchmark::State& state) {
  const auto p = grid_pair(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(component_matrices_serial(p.source, p.target, CostMode::as_written));
  }
}

void BM_WeightSweep(benchmark::State& state) {
  const auto& s = sweep_setup();
  const auto r = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        weight_sweep(s.sources, s.target, s.response, r, SolverSpec::exact(), CostMode::as_written));
  }
}

void BM_WeightSweepSerial(benchmark::State& state) {
  const auto& s = sweep_setup();
  const auto r = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(weight_sweep_serial(s.sources, s.target, s.response, r, SolverSpec::exact(),
                                                 CostMode::as_written));
  }
}

}  // namespace

BENCHMARK(BM_ComponentMatrices)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ComponentMatricesSerial)->Arg(25)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightSweep)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WeightSweepSerial)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

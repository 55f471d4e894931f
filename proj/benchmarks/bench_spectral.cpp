#include "sagnacsim/presets.hpp"
#include "sagnacsim/spectral.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace sagnacsim;

const SourcePreset& telecom() {
  static const SourcePreset p =
      telecom_preset(load_sellmeier_file(SAGNACSIM_BENCH_DATA_FILE));
  return p;
}

void BM_ComputeJsa(benchmark::State& state) {
  const auto& p = telecom();
  const auto grid =
      SpectralGrid::centered(1584.0, 6.0, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(compute_jsa(p.crystal, p.pump, grid));
  }
}
BENCHMARK(BM_ComputeJsa)->Arg(64)->Arg(128)->Arg(256);

void BM_Schmidt(benchmark::State& state) {
  const auto& p = telecom();
  const auto grid =
      SpectralGrid::centered(1584.0, 6.0, static_cast<int>(state.range(0)));
  const auto jsa = compute_jsa(p.crystal, p.pump, grid);
  for (auto _ : state) {
    benchmark::DoNotOptimize(schmidt(jsa));
  }
}
BENCHMARK(BM_Schmidt)->Arg(64)->Arg(128)->Arg(256)->Arg(512);

void BM_PurityScan(benchmark::State& state) {
  const auto& p = telecom();
  const auto grid = SpectralGrid::centered(1584.0, 6.0, 128);
  for (auto _ : state) {
    benchmark::DoNotOptimize(purity_scan(p.crystal, p.pump, 0.2, 0.7,
                                         static_cast<int>(state.range(0)), grid));
  }
}
BENCHMARK(BM_PurityScan)->Arg(5)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_RefractiveIndex(benchmark::State& state) {
  const auto& set = telecom().crystal.sellmeier_z;
  double lam = 1.55;
  for (auto _ : state) {
    benchmark::DoNotOptimize(refractive_index(set, lam));
    lam = lam < 1.62 ? lam + 1e-6 : 1.55;
  }
}
BENCHMARK(BM_RefractiveIndex);

}  // namespace

BENCHMARK_MAIN();

#include "sagnacsim/counting.hpp"
#include "sagnacsim/presets.hpp"
#include "sagnacsim/tomography.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace sagnacsim;

const SourcePreset& telecom() {
  static const SourcePreset p =
      telecom_preset(load_sellmeier_file(SAGNACSIM_BENCH_DATA_FILE));
  return p;
}

void BM_SourceState(benchmark::State& state) {
  const auto& p = telecom();
  for (auto _ : state) {
    benchmark::DoNotOptimize(make_source_state(p, BellTarget::PsiMinus, 10.0));
  }
}
BENCHMARK(BM_SourceState);

void BM_ChshPipeline(benchmark::State& state) {
  const auto& p = telecom();
  const auto rho = make_source_state(p, BellTarget::PsiMinus, 10.0);
  const auto settings = chsh_settings();
  const RateModel m = rates_at_power(p, 10.0);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const auto records = simulate_counts(rho, settings, m, state.range(0), seed++);
    benchmark::DoNotOptimize(chsh_from_records(records));
  }
}
BENCHMARK(BM_ChshPipeline)->Arg(1)->Arg(100);

void BM_MleReconstruct(benchmark::State& state) {
  const auto& p = telecom();
  const auto rho = make_source_state(p, BellTarget::PsiMinus, 10.0);
  const auto records = simulate_tomo_counts(rho, rates_at_power(p, 10.0),
                                            static_cast<double>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mle_reconstruct(records, bell_psi_minus()));
  }
}
BENCHMARK(BM_MleReconstruct)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_Poisson(benchmark::State& state) {
  Rng rng(42);
  const double mu = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rng.poisson(mu));
  }
}
BENCHMARK(BM_Poisson)->Arg(5)->Arg(10000)->Arg(2000000);

}  // namespace

#include <benchmark/benchmark.h>

#include "pathid/estimation.hpp"
#include "pathid/interferometer.hpp"
#include "pathid/pipeline.hpp"
#include "pathid/scan.hpp"
#include "pathid/tables.hpp"
#include "pathid/werner.hpp"

namespace {

using namespace pathid;

InterferometerConfig lossy_rho4() {
  InterferometerConfig c = reference_config(GeneralizedWernerParams(0.7, 1.0, 0.5), 0.25, 0.35);
  c.theta = 0.4;
  c.delta = 1.1;
  return c;
}

void BM_BuildState(benchmark::State& st) {
  const GeneralizedWernerParams p(0.6, 0.8, 0.3, 0.2);
  for (auto _ : st) benchmark::DoNotOptimize(build_state(p));
}
BENCHMARK(BM_BuildState);

void BM_WoottersConcurrence(benchmark::State& st) {
  const DensityMatrix rho = build_state(GeneralizedWernerParams(0.6, 0.8, 0.3, 0.2));
  for (auto _ : st) benchmark::DoNotOptimize(concurrence_wootters_numeric(rho));
}
BENCHMARK(BM_WoottersConcurrence);

void BM_SignalState(benchmark::State& st) {
  const InterferometerConfig c = lossy_rho4();
  for (auto _ : st) benchmark::DoNotOptimize(signal_state(c));
}
BENCHMARK(BM_SignalState);

void BM_FitFringe(benchmark::State& st) {
  const PhaseScanRecord scan =
      simulate_scan(lossy_rho4(), Polarization::kD, static_cast<int>(st.range(0)), std::int64_t{1'000'000}, 3);
  for (auto _ : st) benchmark::DoNotOptimize(fit_fringe(scan));
}
BENCHMARK(BM_FitFringe)->Arg(24)->Arg(1024);

void BM_RunPipeline(benchmark::State& st) {
  const InterferometerConfig c = lossy_rho4();
  ScanPlan plan;
  if (st.range(0) > 0) plan.shots = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(run_pipeline(c, plan));
}
BENCHMARK(BM_RunPipeline)->Arg(0)->Arg(1'000'000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

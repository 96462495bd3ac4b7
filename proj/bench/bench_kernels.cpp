// SPDX-License-Identifier: Apache-2.0
// Serial reference vs parallel kernel. Thread count is the benchmark argument.
#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "sofar/deploy.hpp"
#include "sofar/dynamics.hpp"
#include "sofar/field.hpp"
#include "sofar/ray.hpp"
#include "sofar/shadow.hpp"
#include "sofar/ssp.hpp"

using namespace sofar;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

const ssp::SoundSpeedProfile& munk() {
  static const auto p = ssp::munk_profile(1500.0, 2100.0, 1300.0, 0.00737, 4000.0);
  return p;
}

ray::TraceConfig deep_cfg() {
  ray::TraceConfig cfg;
  cfg.max_range = 32000.0;
  return cfg;
}

const std::vector<double>& fan_angles() {
  static const auto a = ray::linspace(-4.0 * kDeg, 4.0 * kDeg, 201);
  return a;
}

const std::vector<ray::RayPath>& deep_fan() {
  static const auto f = ray::trace_fan_serial(munk(), 200.0, fan_angles(), deep_cfg());
  return f;
}

const field::GridSpec kGrid{0.0, 32000.0, 320, 0.0, 4000.0, 200};
const field::Region kWindow{20000.0, 30000.0, 200.0, 4000.0};

std::vector<double> h_samples() {
  std::vector<double> h;
  for (double z = 10.0; z < 2100.0; z += 10.0) h.push_back(z);
  return h;
}

dynamics::TrajectorySpec rotation_walk() {
  dynamics::TrajectorySpec s;
  s.beta = {0.05 * kDeg, 5.0 * kDeg};
  return s;
}

ris::RisArray plane20() {
  ris::RisArray a;
  a.n_units = 20;
  a.square = true;
  return a;
}

const dynamics::GyroModel kGyro{0.001, 0.01 * kDeg, 0.005 * kDeg, 1};

void BM_trace_fan_serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(ray::trace_fan_serial(munk(), 200.0, fan_angles(), deep_cfg()));
}
void BM_trace_fan(benchmark::State& st) {
  const Parallelism par{static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(ray::trace_fan(munk(), 200.0, fan_angles(), deep_cfg(), par));
}

void BM_compute_field_serial(benchmark::State& st) {
  (void)deep_fan();
  for (auto _ : st) benchmark::DoNotOptimize(field::compute_field_serial(deep_fan(), kGrid, 10e3));
}
void BM_compute_field(benchmark::State& st) {
  (void)deep_fan();
  const Parallelism par{static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(field::compute_field(deep_fan(), kGrid, 10e3, par));
}

void BM_shadow_report_serial(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(shadow::deep_shadow_report_serial(munk(), 200.0, {0.0, 4.0 * kDeg}, kWindow, 10.0));
}
void BM_shadow_report(benchmark::State& st) {
  const Parallelism par{static_cast<int>(st.range(0))};
  for (auto _ : st)
    benchmark::DoNotOptimize(shadow::deep_shadow_report(munk(), 200.0, {0.0, 4.0 * kDeg}, kWindow, 10.0, par));
}

void BM_theorem_sweep_serial(benchmark::State& st) {
  const auto h = h_samples();
  for (auto _ : st) benchmark::DoNotOptimize(deploy::verify_theorem1_serial(munk(), h));
}
void BM_theorem_sweep(benchmark::State& st) {
  const auto h = h_samples();
  const Parallelism par{static_cast<int>(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(deploy::verify_theorem1(munk(), h, par));
}

void BM_ensemble_serial(benchmark::State& st) {
  for (auto _ : st)
    benchmark::DoNotOptimize(
        dynamics::run_ensemble_serial(rotation_walk(), kGyro, plane20(), 45 * kDeg, 45 * kDeg, {}, 200, 1));
}
void BM_ensemble(benchmark::State& st) {
  const Parallelism par{static_cast<int>(st.range(0))};
  for (auto _ : st)
    benchmark::DoNotOptimize(
        dynamics::run_ensemble(rotation_walk(), kGyro, plane20(), 45 * kDeg, 45 * kDeg, {}, 200, 1, par));
}

}  // namespace

BENCHMARK(BM_trace_fan_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_trace_fan)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_compute_field_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_compute_field)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_shadow_report_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_shadow_report)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_theorem_sweep_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_theorem_sweep)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ensemble_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ensemble)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK_MAIN();

// Copyright 2026 The donorspin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include <benchmark/benchmark.h>

#include "donorspin/drive.hpp"
#include "donorspin/eigensystem.hpp"
#include "donorspin/lindblad.hpp"
#include "donorspin/spectra.hpp"
#include "donorspin/units.hpp"

using namespace donorspin;

namespace {

void BM_Eigensystem(benchmark::State& state) {
  SpinSystem bi = si_bi();
  double field = 0.0;
  for (auto _ : state) {
    field = field < 6.0 ? field + 0.01 : 0.0;
    benchmark::DoNotOptimize(Eigensystem(bi, field));
  }
}
BENCHMARK(BM_Eigensystem);

void BM_TransitionTable(benchmark::State& state) {
  Eigensystem es(si_bi(), 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(transition_table(es, KindFilter::all()));
}
BENCHMARK(BM_TransitionTable);

void BM_ResonanceFields(benchmark::State& state) {
  SpinSystem bi = si_bi();
  for (auto _ : state) benchmark::DoNotOptimize(resonance_fields(bi, 9.7, 0.0, 1.0));
}
BENCHMARK(BM_ResonanceFields)->Unit(benchmark::kMillisecond);

void BM_BuildGenerator(benchmark::State& state) {
  Eigensystem es(si_bi(), 0.188);
  NoiseAxis axis = state.range(0) == 0 ? NoiseAxis::z : NoiseAxis::x;
  for (auto _ : state) benchmark::DoNotOptimize(build_generator(es, {NoiseSpec::diabatic(axis, 1.0)}));
}
BENCHMARK(BM_BuildGenerator)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_EvolveMaster(benchmark::State& state) {
  Eigensystem es(si_bi(), 0.188);
  NoiseAxis axis = state.range(0) == 0 ? NoiseAxis::z : NoiseAxis::x;
  Liouvillian L = build_generator(es, {NoiseSpec::diabatic(axis, 1.0)});
  Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(20, 20);
  rho0(11, 11) = 1.0;
  std::vector<double> t(200);
  for (int i = 0; i < 200; ++i) t[i] = 0.05 * i;
  for (auto _ : state) benchmark::DoNotOptimize(evolve_master(L, rho0, t));
}
BENCHMARK(BM_EvolveMaster)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& state) {
  Eigensystem es(si_bi(), 0.22);
  PulseSpec p{mhz_to_angular(100.0), std::abs(es.level(12).energy - es.level(11).energy), DriveAxis::x,
              Polarization::rh, 0.0, 0.0};
  p.duration = reduce_two_level(es, 12, 11, p).pi_time;
  for (auto _ : state) benchmark::DoNotOptimize(propagate(es, p, label_state(es, 12), {p.duration}));
}
BENCHMARK(BM_Propagate)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

// Copyright 2026 The tnorm Authors
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

// Serial references against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "tnorm/exact.hpp"
#include "tnorm/game.hpp"
#include "tnorm/rng.hpp"
#include "tnorm/rounding.hpp"

using namespace tnorm;

namespace {

const Game& bench_game() {
  static const Game g = random_game(1, Dims{9, 9, 4, 4});
  return g;
}

const BellFunctional& bench_bell() {
  static const BellFunctional g = random_bell(2, Dims{7, 7, 2, 2});
  return g;
}

const CovarianceModel& bench_model() {
  static const CovarianceModel c = [] {
    Rng rng(3);
    Eigen::MatrixXd u(4, 8), v(4, 8);
    for (Eigen::Index i = 0; i < u.size(); ++i) u.data()[i] = rng.normal();
    for (Eigen::Index i = 0; i < v.size(); ++i) v.data()[i] = rng.normal();
    u.colwise().normalize();
    v.colwise().normalize();
    return krivine_covariance(u.transpose() * u, u.transpose() * v, v.transpose() * v);
  }();
  return c;
}

void BM_ClassicalValueParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(classical_value(bench_game()).value);
}
void BM_ClassicalValueSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(serial::classical_value(bench_game()).value);
}
void BM_InjectiveNormParallel(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(injective_norm(bench_bell()).value);
}
void BM_InjectiveNormSerial(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(serial::injective_norm(bench_bell()).value);
}
void BM_SampleSignsParallel(benchmark::State& s) {
  for (auto _ : s)
    benchmark::DoNotOptimize(sample_signs(bench_model(), static_cast<std::size_t>(s.range(0)), 1));
  s.SetItemsProcessed(s.iterations() * s.range(0));
}
void BM_SampleSignsSerial(benchmark::State& s) {
  for (auto _ : s)
    benchmark::DoNotOptimize(
        serial::sample_signs(bench_model(), static_cast<std::size_t>(s.range(0)), 1));
  s.SetItemsProcessed(s.iterations() * s.range(0));
}

}  // namespace

BENCHMARK(BM_ClassicalValueParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClassicalValueSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InjectiveNormParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InjectiveNormSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleSignsParallel)->Arg(1 << 18)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampleSignsSerial)->Arg(1 << 18)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

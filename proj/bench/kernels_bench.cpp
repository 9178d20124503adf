// Copyright 2026 The qficd Authors
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

// Serial reference kernels against their OpenMP counterparts on the shapes
// used by training.

#include <benchmark/benchmark.h>

#include "qficd/kernels.hpp"
#include "qficd/magnus.hpp"
#include "qficd/metrics.hpp"
#include "qficd/models.hpp"

namespace {

using namespace qficd;

struct Fixture {
  BasisPtr basis;
  TimeGrid grid;
  WindowPlan plan;
  RMatrix rows;
  std::vector<CMatrix> dense;
};

Fixture make_fixture(int q, int k) {
  ModelSpec m;
  m.q = q;
  Fixture f{build_basis(q, k), TimeGrid(256, 1.0), WindowPlan(256, 16), {}, {}};
  const Protocol p = reference_protocol(m, f.basis, f.grid, initial_state(InitialState::PlusProduct, m, f.basis, f.grid));
  f.rows = p.total_rows(m.omega);
  f.dense = kernels::dense_rows(f.rows, *f.basis);
  return f;
}

const Fixture& fixture(int q) {
  static const Fixture f2 = make_fixture(2, 2);
  static const Fixture f4 = make_fixture(4, 2);
  return q == 2 ? f2 : f4;
}

void BM_OmegaParallel(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::window_omegas(f.dense, f.plan, f.grid.dt(), 3));
}

void BM_OmegaSerial(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::window_omegas(f.dense, f.plan, f.grid.dt(), 3));
}

void BM_ExpmParallel(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  const auto om = kernels::window_omegas(f.dense, f.plan, f.grid.dt(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::window_exponentials(om));
}

void BM_ExpmSerial(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  const auto om = kernels::window_omegas(f.dense, f.plan, f.grid.dt(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::window_exponentials(om));
}

void BM_CommutatorRowsParallel(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::commutator_rows(f.rows, f.rows, *f.basis));
}

void BM_CommutatorRowsSerial(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::commutator_rows(f.rows, f.rows, *f.basis));
}

void BM_DenseRowsParallel(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dense_rows(f.rows, *f.basis));
}

void BM_DenseRowsSerial(benchmark::State& state) {
  const auto& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::dense_rows(f.rows, *f.basis));
}

}  // namespace

BENCHMARK(BM_OmegaParallel)->Arg(2)->Arg(4);
BENCHMARK(BM_OmegaSerial)->Arg(2)->Arg(4);
BENCHMARK(BM_ExpmParallel)->Arg(2)->Arg(4);
BENCHMARK(BM_ExpmSerial)->Arg(2)->Arg(4);
BENCHMARK(BM_CommutatorRowsParallel)->Arg(2)->Arg(4);
BENCHMARK(BM_CommutatorRowsSerial)->Arg(2)->Arg(4);
BENCHMARK(BM_DenseRowsParallel)->Arg(2)->Arg(4);
BENCHMARK(BM_DenseRowsSerial)->Arg(2)->Arg(4);

BENCHMARK_MAIN();

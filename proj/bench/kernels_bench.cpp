// Copyright 2026 The qcbm-molgan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "qmg/common/rng.hpp"
#include "qmg/kernels/gemm.hpp"
#include "qmg/qcbm/circuit.hpp"

namespace {

using namespace qmg;

std::vector<double> random_matrix(std::size_t n, Rng& rng) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

// Shapes: args are (m, k, n).
template <void (*Gemm)(const double*, const double*, double*, std::size_t, std::size_t, std::size_t)>
void BM_Gemm(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto k = static_cast<std::size_t>(state.range(1));
  const auto n = static_cast<std::size_t>(state.range(2));
  Rng rng(1);
  const auto a = random_matrix(m * k, rng);
  const auto b = random_matrix(k * n, rng);
  std::vector<double> c(m * n);
  for (auto _ : state) {
    Gemm(a.data(), b.data(), c.data(), m, k, n);
    benchmark::DoNotOptimize(c.data());
  }
  state.counters["GFLOP/s"] = benchmark::Counter(2.0 * m * k * n, benchmark::Counter::kIsIterationInvariantRate,
                                                 benchmark::Counter::kIs1000);
  state.counters["threads"] = omp_get_max_threads();
}

void gemm_shapes(benchmark::internal::Benchmark* b) {
  b->Args({288, 5, 64})        // first graph convolution over a 32-molecule batch
      ->Args({32, 256, 450})   // generator output layer
      ->Args({288, 37, 128})   // readout gate
      ->Args({512, 512, 512});
}

BENCHMARK(BM_Gemm<kernels::serial::gemm>)->Name("gemm/serial")->Apply(gemm_shapes);
BENCHMARK(BM_Gemm<kernels::parallel::gemm>)->Name("gemm/parallel")->Apply(gemm_shapes);

template <qcbm::StateVector (*Build)(const qcbm::QcbmParameters&)>
void BM_BuildState(benchmark::State& state) {
  Rng rng(2);
  const auto params = qcbm::QcbmParameters::random(static_cast<std::size_t>(state.range(0)), 2, rng);
  for (auto _ : state) {
    auto s = Build(params);
    benchmark::DoNotOptimize(s.amplitudes.data());
  }
  state.counters["threads"] = omp_get_max_threads();
}

BENCHMARK(BM_BuildState<qcbm::reference::build_state>)->Name("statevector/serial")->DenseRange(8, 16, 4)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildState<qcbm::parallel::build_state>)->Name("statevector/parallel")->DenseRange(8, 16, 4)
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

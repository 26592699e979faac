// Copyright 2026 The purity-vqa Authors
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

// Microbenchmarks for the evaluation paths that dominate experiment runs:
// trace products, cost evaluations (exact and sampled), spectral powers and
// a full single-qubit descent.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "pvqa/ansatz.hpp"
#include "pvqa/bpl.hpp"
#include "pvqa/cost.hpp"
#include "pvqa/density_matrix.hpp"
#include "pvqa/optimizer.hpp"
#include "pvqa/rng.hpp"
#include "pvqa/swap_test.hpp"

namespace {

pvqa::DensityMatrix dense_state(Eigen::Index dim, std::uint64_t seed) {
  pvqa::CounterRng rng(seed);
  return pvqa::random_mixed_state(dim, rng);
}

void BM_TraceProduct(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  std::vector<pvqa::DensityMatrix> ms;
  for (int i = 0; i < k; ++i) ms.push_back(dense_state(4, 100 + static_cast<std::uint64_t>(i)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(pvqa::trace_product_exact(ms));
  }
}
BENCHMARK(BM_TraceProduct)->Arg(2)->Arg(3)->Arg(4);

void BM_GlobalCostExact(benchmark::State& state) {
  const Eigen::Index dim = state.range(0);
  const pvqa::DensityMatrix rho = dense_state(dim, 7);
  const pvqa::DensityMatrix eta = dense_state(dim, 8);
  pvqa::CostSpec spec;
  spec.power = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pvqa::global_cost(rho, eta, spec).value);
  }
}
BENCHMARK(BM_GlobalCostExact)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

void BM_GlobalCostSampled(benchmark::State& state) {
  const pvqa::DensityMatrix rho = dense_state(4, 7);
  const pvqa::DensityMatrix eta = dense_state(4, 8);
  pvqa::CostSpec spec;
  spec.power = 1;
  spec.shots = pvqa::ShotPlan{state.range(0), 21};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pvqa::global_cost(rho, eta, spec).value);
  }
}
BENCHMARK(BM_GlobalCostSampled)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_MatrixPower(benchmark::State& state) {
  const pvqa::DensityMatrix rho = dense_state(state.range(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pvqa::matrix_power(rho, -0.25));
  }
}
BENCHMARK(BM_MatrixPower)->Arg(4)->Arg(16)->Arg(64);

void BM_DiagonalQubitDescent(benchmark::State& state) {
  const pvqa::DensityMatrix rho = pvqa::DensityMatrix::diagonal(Eigen::Vector2d(0.75, 0.25));
  const pvqa::AnsatzFamily family = pvqa::diagonal_qubit_family();
  pvqa::CostSpec spec;
  const pvqa::CostFn cost = [&](const Eigen::VectorXd& theta) {
    return pvqa::global_cost(rho, family.evaluate(theta), spec).value;
  };
  pvqa::OptimizerConfig config;
  config.max_iters = 2000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pvqa::descend(cost, Eigen::VectorXd::Constant(1, 1.5), config).cost_star);
  }
}
BENCHMARK(BM_DiagonalQubitDescent);

void BM_GradientScan(benchmark::State& state) {
  const pvqa::SpectrumPair spec{0.75, 0.25};
  const auto landscape = [&](const Eigen::VectorXd& theta) {
    return pvqa::product_cost_closed_form(spec, 1, theta);
  };
  const std::vector<pvqa::Interval> measure(4, pvqa::Interval{-0.05, 0.05});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        pvqa::mc_gradient_scan(landscape, 4, 200, measure, 77).mean_abs_grad);
  }
}
BENCHMARK(BM_GradientScan);

}  // namespace

BENCHMARK_MAIN();

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "pvqa/cost.hpp"
#include "support.hpp"

using namespace pvqa;

namespace {

DensityMatrix qubit_diag(double w0, double w1) {
  return DensityMatrix::diagonal(Eigen::Vector2d(w0, w1));
}

DensityMatrix oracle_optimum(const DensityMatrix& rho, int k) {
  return matrix_power(rho, -1.0 / (2.0 * k)).normalized();
}

}  // namespace

TEST_CASE("global cost on pinned inputs") {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  CHECK(global_cost(mixed, mixed, CostSpec{}).value == doctest::Approx(0.5).epsilon(1e-12));

  // tr[(eta rho eta)^2] = 0.75^2 0.4^4 + 0.25^2 0.6^4 = 0.0225 and
  // tr(rho eta^2)^2 = (0.75 0.16 + 0.25 0.36)^2 = 0.0441, so the ratio is 25/49.
  const CostEvaluation c = global_cost(qubit_diag(0.75, 0.25), qubit_diag(0.4, 0.6), CostSpec{});
  CHECK(c.value == doctest::Approx(25.0 / 49.0).epsilon(1e-12));
  CHECK(c.numerator == doctest::Approx(0.0225).epsilon(1e-12));
  CHECK(c.denominator == doctest::Approx(0.21).epsilon(1e-12));
  CHECK(c.std_error == 0.0);
}

TEST_CASE("global cost rejects degenerate inputs") {
  CHECK(thrown_code([] {
          global_cost(qubit_diag(1.0, 0.0), DensityMatrix::maximally_mixed(2), CostSpec{});
        }) == ErrorCode::RankTooLow);

  Eigen::VectorXd low(4), high(4);
  low << 0.5, 0.5, 0.0, 0.0;
  high << 0.0, 0.0, 0.5, 0.5;
  CHECK(thrown_code([&] {
          global_cost(DensityMatrix::diagonal(low), DensityMatrix::diagonal(high), CostSpec{});
        }) == ErrorCode::DegenerateDenominator);
}

TEST_CASE("cost is bounded below by one over the rank") {
  for (Eigen::Index dim : {2, 4, 8}) {
    for (Eigen::Index rank = 2; rank <= dim; rank *= 2) {
      for (int k : {1, 2}) {
        CounterRng rng(2200 + 31 * dim + 7 * rank + k);
        const DensityMatrix rho = random_mixed_state(dim, rank, rng);
        const DensityMatrix eta = random_full_rank(dim, 2300 + 31 * dim + 7 * rank + k);
        CostSpec spec;
        spec.power = k;
        CHECK(global_cost(rho, eta, spec).value >= 1.0 / static_cast<double>(rank) - 1e-9);
      }
    }
  }
}

TEST_CASE("oracle optimum attains one over the dimension") {
  for (Eigen::Index dim : {2, 4, 8}) {
    for (int k : {1, 2, 3}) {
      for (int i = 0; i < 4; ++i) {
        const DensityMatrix rho = random_full_rank(dim, 2500 + 100 * dim + 10 * k + i);
        CostSpec spec;
        spec.power = k;
        CHECK(global_cost(rho, oracle_optimum(rho, k), spec).value ==
              doctest::Approx(1.0 / static_cast<double>(dim)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("normalization_factor recovers the inverse-root trace") {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  CHECK(normalization_factor(mixed, mixed, 0.5, 1) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));

  const DensityMatrix rho = qubit_diag(0.75, 0.25);
  const DensityMatrix eta = oracle_optimum(rho, 1);
  const double c_star = global_cost(rho, eta, CostSpec{}).value;
  CHECK(normalization_factor(rho, eta, c_star, 1) ==
        doctest::Approx(3.1547005383792515).epsilon(1e-10));

  int cases = 0;
  for (Eigen::Index dim : {2, 4, 8}) {
    for (int k : {1, 2, 3}) {
      for (int i = 0; i < 6; ++i) {
        const DensityMatrix m = random_full_rank(dim, 3100 + 100 * dim + 10 * k + i);
        const DensityMatrix star = oracle_optimum(m, k);
        CostSpec spec;
        spec.power = k;
        const double cost_star = global_cost(m, star, spec).value;
        const double expected = matrix_power(m, -1.0 / (2.0 * k)).trace();
        CHECK(std::abs(normalization_factor(m, star, cost_star, k) - expected) <=
              1e-8 * expected);
        ++cases;
      }
    }
  }
  CHECK(cases >= 50);
}

TEST_CASE("cost equals purity of the sandwiched state") {
  // The chain tr[(eta^k rho eta^k)^2]/tr(rho eta^2k)^2 = purity(sigma) and
  // purity(sigma) - 1/d = tr[(sigma - I/d)^2] ties the cost to the
  // Hilbert-Schmidt distance from the maximally mixed state.
  for (Eigen::Index dim : {2, 4, 8}) {
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(dim);
    for (int k : {1, 2}) {
      for (int i = 0; i < 10; ++i) {
        const DensityMatrix rho = random_full_rank(dim, 4000 + 100 * dim + 10 * k + i);
        const DensityMatrix eta = random_full_rank(dim, 4001 + 100 * dim + 10 * k + i);
        CostSpec spec;
        spec.power = k;
        const double cost = global_cost(rho, eta, spec).value;
        const DensityMatrix sigma = cost_output_state(rho, eta, k);
        CHECK(std::abs(cost - purity(sigma)) <= 1e-9);
        CHECK(std::abs(hs_distance_sq(sigma, mixed) -
                       (cost - 1.0 / static_cast<double>(dim))) <= 1e-9);
      }
    }
  }
}

TEST_CASE("local cost averages subsystem costs") {
  const DensityMatrix rho1 = qubit_diag(0.75, 0.25);
  const DensityMatrix eta1 = random_diagonal(2, 5100);
  CHECK(local_cost(rho1, eta1, 1, {2}) ==
        doctest::Approx(global_cost(rho1, eta1, CostSpec{}).value).epsilon(1e-12));

  const DensityMatrix rho2 = tensor_product(rho1, rho1);
  const DensityMatrix star2 = tensor_product(oracle_optimum(rho1, 1), oracle_optimum(rho1, 1));
  CHECK(local_cost(rho2, star2, 1, {2, 2}) == doctest::Approx(0.5).epsilon(1e-9));

  const DensityMatrix mixed4 = DensityMatrix::maximally_mixed(4);
  CHECK(local_cost(mixed4, mixed4, 1, {2, 2}) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("blended cost interpolates global and local") {
  const DensityMatrix rho = tensor_product(qubit_diag(0.75, 0.25), qubit_diag(0.6, 0.4));
  const DensityMatrix eta = tensor_product(random_diagonal(2, 5300), random_diagonal(2, 5301));
  const std::vector<Eigen::Index> dims = {2, 2};

  CostSpec spec;
  const double g = global_cost(rho, eta, spec).value;
  const double l = local_cost(rho, eta, 1, dims);

  BlendedEvaluation zero = blended_cost(rho, eta, spec, dims);
  CHECK(zero.value == doctest::Approx(g).epsilon(1e-12));
  CHECK(!zero.epsilon_at_boundary);

  spec.blend_epsilon = 0.1;
  BlendedEvaluation mid = blended_cost(rho, eta, spec, dims);
  CHECK(mid.value == doctest::Approx(0.9 * g + 0.1 * l).epsilon(1e-12));
  CHECK(mid.global_value == doctest::Approx(g).epsilon(1e-12));
  CHECK(mid.local_value == doctest::Approx(l).epsilon(1e-12));

  spec.blend_epsilon = 1.0;
  BlendedEvaluation edge = blended_cost(rho, eta, spec, dims);
  CHECK(edge.epsilon_at_boundary);
  CHECK(edge.value == doctest::Approx(l).epsilon(1e-12));
}

TEST_CASE("shot mode is seeded and reproducible") {
  const DensityMatrix rho = qubit_diag(0.75, 0.25);
  const DensityMatrix eta = qubit_diag(0.6, 0.4);
  CostSpec spec;
  spec.shots = ShotPlan{10000, 77};
  const CostEvaluation a = global_cost(rho, eta, spec);
  const CostEvaluation b = global_cost(rho, eta, spec);
  CHECK(a.value == b.value);
  CHECK(a.std_error > 0.0);
  spec.shots->seed = 78;
  CHECK(global_cost(rho, eta, spec).value != a.value);
}

TEST_CASE("shot error shrinks as the square root of the shot count") {
  const DensityMatrix rho = qubit_diag(0.75, 0.25);
  const DensityMatrix eta = qubit_diag(0.6, 0.4);
  const double exact = global_cost(rho, eta, CostSpec{}).value;

  const std::vector<long long> levels = {100, 1000, 10000, 100000};
  const int seeds = 60;
  std::vector<double> log_shots, log_err;
  for (long long shots : levels) {
    double mean_abs = 0.0;
    for (int s = 0; s < seeds; ++s) {
      CostSpec spec;
      spec.shots = ShotPlan{shots, derive_seed(606, static_cast<std::uint64_t>(shots + s))};
      mean_abs += std::abs(global_cost(rho, eta, spec).value - exact);
    }
    mean_abs /= seeds;
    log_shots.push_back(std::log(static_cast<double>(shots)));
    log_err.push_back(std::log(mean_abs));
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    sx += log_shots[i];
    sy += log_err[i];
    sxx += log_shots[i] * log_shots[i];
    sxy += log_shots[i] * log_err[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-0.5).epsilon(0.2));
}

TEST_CASE("reported std_error tracks the empirical error") {
  const DensityMatrix rho = qubit_diag(0.75, 0.25);
  const DensityMatrix eta = qubit_diag(0.6, 0.4);
  const double exact = global_cost(rho, eta, CostSpec{}).value;
  double rms = 0.0, mean_se = 0.0;
  const int seeds = 40;
  for (int s = 0; s < seeds; ++s) {
    CostSpec spec;
    spec.shots = ShotPlan{10000, derive_seed(707, static_cast<std::uint64_t>(s))};
    const CostEvaluation e = global_cost(rho, eta, spec);
    rms += (e.value - exact) * (e.value - exact);
    mean_se += e.std_error;
  }
  rms = std::sqrt(rms / seeds);
  mean_se /= seeds;
  CHECK(rms / mean_se > 0.4);
  CHECK(rms / mean_se < 2.5);
}

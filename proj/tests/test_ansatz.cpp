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

#include "pvqa/ansatz.hpp"
#include "pvqa/cost.hpp"
#include "support.hpp"

using namespace pvqa;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Angle whose single-qubit weights are (0.75, 0.25).
const double kThetaQuarter = 2.0 * std::atan(std::sqrt(1.0 / 3.0));

Eigen::VectorXd vec1(double a) {
  Eigen::VectorXd v(1);
  v << a;
  return v;
}

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_CASE("diagonal_qubit at pinned angles") {
  CHECK(diagonal_qubit(kPi / 2).diagonal_part()(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(diagonal_qubit(0.0).diagonal_part()(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(diagonal_qubit(0.0).diagonal_part()(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(diagonal_qubit(kThetaQuarter).diagonal_part()(0) ==
        doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("product_diagonal at pinned angles") {
  const DensityMatrix mixed = product_diagonal(kPi / 2, 2);
  CHECK(std::sqrt(std::max(0.0, hs_distance_sq(mixed, DensityMatrix::maximally_mixed(4)))) <=
        1e-12);

  const DensityMatrix pure = product_diagonal(0.0, 3);
  CHECK(pure.diagonal_part()(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(numerical_rank(pure) == 1);

  const Eigen::VectorXd w = product_diagonal(kThetaQuarter, 2).diagonal_part();
  CHECK(w(0) == doctest::Approx(0.5625).epsilon(1e-12));
  CHECK(w(1) == doctest::Approx(0.1875).epsilon(1e-12));
  CHECK(w(2) == doctest::Approx(0.1875).epsilon(1e-12));
  CHECK(w(3) == doctest::Approx(0.0625).epsilon(1e-12));
}

TEST_CASE("rotated_spectrum hits the cost optimum at zero angles") {
  for (int k : {1, 2}) {
    const DensityMatrix rho = random_full_rank(4, 100 + k);
    const DensityMatrix at_zero = rotated_spectrum(rho, k, Eigen::VectorXd::Zero(2));
    const DensityMatrix expected = matrix_power(rho, -1.0 / (2.0 * k)).normalized();
    CHECK(std::sqrt(std::max(0.0, hs_distance_sq(at_zero, expected))) <= 1e-9);
    CostSpec spec;
    spec.power = k;
    CHECK(global_cost(rho, at_zero, spec).value == doctest::Approx(0.25).epsilon(1e-9));
  }
}

TEST_CASE("rotated_spectrum at pi swaps the qubit basis") {
  const DensityMatrix rho = DensityMatrix::diagonal(Eigen::Vector2d(0.75, 0.25));
  const Eigen::VectorXd base = rotated_spectrum(rho, 1, vec1(0.0)).diagonal_part();
  const Eigen::VectorXd flipped = rotated_spectrum(rho, 1, vec1(kPi)).diagonal_part();
  CHECK(flipped(0) == doctest::Approx(base(1)).epsilon(1e-10));
  CHECK(flipped(1) == doctest::Approx(base(0)).epsilon(1e-10));
}

TEST_CASE("rotated_spectrum of the maximally mixed state is angle independent") {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(4);
  CounterRng rng(321);
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix out =
        rotated_spectrum(mixed, 1, vec2(rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi)));
    CHECK(std::sqrt(std::max(0.0, hs_distance_sq(out, mixed))) <= 1e-10);
  }
}

TEST_CASE("correlated_rotated_spectrum ties every angle together") {
  const DensityMatrix rho = random_full_rank(4, 410);
  for (double theta : {0.3, -1.2, 2.5}) {
    const DensityMatrix tied = correlated_rotated_spectrum(rho, 1, theta, 2);
    const DensityMatrix untied = rotated_spectrum(rho, 1, vec2(theta, theta));
    CHECK(std::sqrt(std::max(0.0, hs_distance_sq(tied, untied))) <= 1e-12);
  }
}

TEST_CASE("sphere_low_rank at pinned angles") {
  const Eigen::MatrixXcd basis2 = Eigen::MatrixXcd::Identity(2, 2);
  CHECK(sphere_low_rank(basis2, vec1(kPi / 2)).diagonal_part()(0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sphere_low_rank(basis2, vec1(0.0)).diagonal_part()(0) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const Eigen::MatrixXcd basis3 = Eigen::MatrixXcd::Identity(3, 3);
  const Eigen::VectorXd w = sphere_low_rank(basis3, vec2(kPi / 2, kPi / 2)).diagonal_part();
  CHECK(w(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(w(1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(w(2) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("sphere weights always sum to one") {
  const Eigen::MatrixXcd basis = Eigen::MatrixXcd::Identity(5, 5);
  CounterRng rng(555);
  for (int i = 0; i < 50; ++i) {
    Eigen::VectorXd theta(4);
    for (int j = 0; j < 4; ++j) theta(j) = rng.uniform(-kPi, kPi);
    const DensityMatrix s = sphere_low_rank(basis, theta);
    CHECK(s.trace() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.is_normalized());
  }
}

TEST_CASE("sphere_low_rank rejects a skewed basis") {
  Eigen::MatrixXcd skew(2, 2);
  skew << 1.0, 1.0, 0.0, 1.0;
  CHECK(thrown_code([&] { sphere_low_rank(skew, vec1(0.5)); }) ==
        ErrorCode::NonOrthonormalBasis);
}

TEST_CASE("rotated_fixed_spectrum at pinned angles") {
  const DensityMatrix sigma = rotated_fixed_spectrum(0.5, 2, vec2(0.0, 0.0));
  const Eigen::VectorXd evals = sigma.spectrum().eigenvalues;
  CHECK(evals(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(evals(1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(evals(2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(evals(3)) <= 1e-12);
  CHECK(sigma.diagonal_part()(0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sigma.diagonal_part()(3) == doctest::Approx(0.5).epsilon(1e-12));

  // A pi rotation moves each pole to the opposite basis state; the sign the
  // rotation picks up squares away in the density matrix.
  const DensityMatrix swapped = rotated_fixed_spectrum(0.3, 1, vec1(kPi));
  CHECK(swapped.diagonal_part()(0) == doctest::Approx(0.3).epsilon(1e-10));
  CHECK(swapped.diagonal_part()(1) == doctest::Approx(0.7).epsilon(1e-10));

  CHECK(thrown_code([] { rotated_fixed_spectrum(0.0, 1, vec1(0.0)); }) ==
        ErrorCode::MuOutOfRange);
  CHECK(thrown_code([] { rotated_fixed_spectrum(1.0, 1, vec1(0.0)); }) ==
        ErrorCode::MuOutOfRange);
}

TEST_CASE("family wrappers agree with their constructors and stay valid") {
  const DensityMatrix rho = random_full_rank(4, 777);
  const std::vector<AnsatzFamily> families = {
      diagonal_qubit_family(),
      product_diagonal_family(3),
      rotated_spectrum_family(rho, 2),
      correlated_rotated_spectrum_family(rho, 1, 2),
      sphere_family(Eigen::MatrixXcd::Identity(4, 4)),
      rotated_fixed_spectrum_family(0.4, 2),
      sphere_family_for_state(rho),
  };
  for (const AnsatzFamily& f : families) {
    REQUIRE(f.param_count() == static_cast<int>(f.domain.size()));
    REQUIRE(f.param_count() >= 1);
    CounterRng rng(808);
    for (int i = 0; i < 100; ++i) {
      Eigen::VectorXd theta(f.param_count());
      for (int j = 0; j < f.param_count(); ++j) {
        theta(j) = rng.uniform(f.domain[j].lo, f.domain[j].hi);
      }
      const DensityMatrix out = f.evaluate(theta);
      CHECK(out.trace() == doctest::Approx(1.0).epsilon(1e-10));
      const double p = purity(out);
      CHECK(p >= 1.0 / static_cast<double>(out.dim()) - 1e-10);
      CHECK(p <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("sphere family over a state's eigenbasis reaches the cost optimum") {
  // The optimum of a full-rank qubit state lies inside the sphere family
  // built from its own eigenbasis.
  const DensityMatrix rho = DensityMatrix::diagonal(Eigen::Vector2d(0.75, 0.25));
  const AnsatzFamily f = sphere_family_for_state(rho);
  const DensityMatrix star = matrix_power(rho, -0.5).normalized();
  const double theta = 2.0 * std::acos(std::sqrt(star.diagonal_part()(0)));
  CHECK(global_cost(rho, f.evaluate(vec1(theta)), CostSpec{}).value ==
        doctest::Approx(0.5).epsilon(1e-9));
}

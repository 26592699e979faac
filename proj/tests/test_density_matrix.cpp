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

#include "pvqa/density_matrix.hpp"
#include "support.hpp"

using namespace pvqa;

namespace {

DensityMatrix qubit_diag(double w0, double w1) {
  return DensityMatrix::diagonal(Eigen::Vector2d(w0, w1));
}

}  // namespace

TEST_CASE("matrix_power on pinned diagonal states") {
  const DensityMatrix half = matrix_power(DensityMatrix::maximally_mixed(2), 1.0);
  CHECK(half.diagonal_part()(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(half.diagonal_part()(1) == doctest::Approx(0.5).epsilon(1e-14));

  const DensityMatrix pure_root = matrix_power(qubit_diag(1.0, 0.0), 0.5);
  CHECK(pure_root.diagonal_part()(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pure_root.diagonal_part()(1) == doctest::Approx(0.0).epsilon(1e-14));

  const DensityMatrix root = matrix_power(qubit_diag(0.75, 0.25), 0.5);
  CHECK(root.diagonal_part()(0) == doctest::Approx(0.8660254037844386).epsilon(1e-14));
  CHECK(root.diagonal_part()(1) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("matrix_power root then power recovers the state") {
  for (Eigen::Index dim : {2, 4, 8}) {
    for (int q : {2, 3, 4}) {
      const DensityMatrix m = random_full_rank(dim, 900 + static_cast<std::uint64_t>(dim) + q);
      const DensityMatrix back = matrix_power(matrix_power(m, 1.0 / q), static_cast<double>(q));
      CHECK(std::sqrt(std::max(0.0, hs_distance_sq(m, back))) <= 1e-8);
    }
  }
}

TEST_CASE("matrix_power negative exponent requires effective full rank") {
  CHECK(thrown_code([] { matrix_power(qubit_diag(1.0, 0.0), -0.5); }) ==
        ErrorCode::NonInvertible);
  // Inverting a weight below the relative cutoff would be numerically
  // meaningless, so negative powers reject it even on the diagonal path;
  // nonnegative powers keep it.
  const DensityMatrix near_pure = qubit_diag(1.0 - 1e-18, 1e-18);
  CHECK(thrown_code([&] { matrix_power(near_pure, -1.0); }) == ErrorCode::NonInvertible);
  CHECK(matrix_power(near_pure, 2.0).diagonal_part()(1) > 0.0);
  const DensityMatrix safe = qubit_diag(1.0 - 1e-6, 1e-6);
  CHECK(matrix_power(safe, -1.0).diagonal_part()(1) == doctest::Approx(1e6).epsilon(1e-9));
}

TEST_CASE("purity of pinned states and bounds") {
  CHECK(purity(qubit_diag(1.0, 0.0)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(purity(DensityMatrix::maximally_mixed(2)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(purity(qubit_diag(0.75, 0.25)) == doctest::Approx(0.625).epsilon(1e-14));

  CHECK(thrown_code([] { purity(qubit_diag(0.8, 0.1)); }) == ErrorCode::NotNormalized);

  for (Eigen::Index dim : {2, 4, 8}) {
    for (int i = 0; i < 50; ++i) {
      const double p = purity(random_full_rank(dim, 100 * dim + i));
      CHECK(p >= 1.0 / static_cast<double>(dim) - 1e-12);
      CHECK(p <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("trace_product_exact on pinned pairs") {
  const DensityMatrix p0 = qubit_diag(1.0, 0.0);
  const DensityMatrix p1 = qubit_diag(0.0, 1.0);
  CHECK(trace_product_exact({p0, p0}).real() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(trace_product_exact({p0, p1})) <= 1e-14);
  CHECK(trace_product_exact({qubit_diag(0.75, 0.25), DensityMatrix::maximally_mixed(2)}).real() ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("trace products are cyclically invariant") {
  for (Eigen::Index dim : {2, 4}) {
    for (int i = 0; i < 40; ++i) {
      const DensityMatrix a = random_full_rank(dim, 300 + 10 * dim + i);
      const DensityMatrix b = random_full_rank(dim, 301 + 10 * dim + i);
      const DensityMatrix c = random_full_rank(dim, 302 + 10 * dim + i);
      const cxd abc = trace_product_exact({a, b, c});
      CHECK(std::abs(abc - trace_product_exact({b, c, a})) <= 1e-12);
      CHECK(std::abs(abc - trace_product_exact({c, a, b})) <= 1e-12);
    }
  }
}

TEST_CASE("hs_distance_sq on pinned pairs") {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  CHECK(hs_distance_sq(mixed, mixed) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(hs_distance_sq(qubit_diag(1.0, 0.0), mixed) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(hs_distance_sq(qubit_diag(0.75, 0.25), mixed) == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("distance to the maximally mixed state equals purity minus 1/d") {
  // tr[(rho - I/d)^2] expands to tr(rho^2) - 1/d for any unit-trace rho.
  int cases = 0;
  for (Eigen::Index dim : {2, 4, 8}) {
    const DensityMatrix mixed = DensityMatrix::maximally_mixed(dim);
    for (int i = 0; i < 334; ++i) {
      const DensityMatrix m = random_full_rank(dim, 5000 + 400 * dim + i);
      const double lhs = hs_distance_sq(m, mixed);
      const double rhs = purity(m) - 1.0 / static_cast<double>(dim);
      CHECK(std::abs(lhs - rhs) <= 1e-10);
      ++cases;
    }
  }
  CHECK(cases >= 1000);
}

TEST_CASE("exact_oracles on pinned states") {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  const ExactOracles half = exact_oracles(mixed, mixed, 0.5);
  CHECK(half.rank == 2);
  CHECK(half.renyi == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(half.tsallis == doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
  CHECK(half.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(half.qfi_supported);

  const DensityMatrix p0 = qubit_diag(1.0, 0.0);
  CHECK(exact_oracles(p0, p0, 0.5).fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact_oracles(p0, mixed, 0.5).fidelity ==
        doctest::Approx(0.7071067811865476).epsilon(1e-12));
}

TEST_CASE("entropy orders outside the valid range are rejected") {
  const DensityMatrix mixed = DensityMatrix::maximally_mixed(2);
  CHECK(thrown_code([&] { renyi_entropy(mixed, 1.0); }) == ErrorCode::AlphaOutOfRange);
  CHECK(thrown_code([&] { renyi_entropy(mixed, 0.0); }) == ErrorCode::AlphaOutOfRange);
  CHECK(thrown_code([&] { tsallis_entropy(mixed, -0.5); }) == ErrorCode::AlphaOutOfRange);
  CHECK(thrown_code([&] { exact_oracles(mixed, mixed, 1.0); }) == ErrorCode::AlphaOutOfRange);
}

TEST_CASE("pinned entropies, fidelity and trace distance") {
  const DensityMatrix rho = qubit_diag(0.75, 0.25);
  CHECK(renyi_entropy(rho, 2.0) == doctest::Approx(-std::log(0.625)).epsilon(1e-12));
  CHECK(tsallis_entropy(rho, 0.5) == doctest::Approx(0.7320508075688772).epsilon(1e-12));
  CHECK(bures_fidelity(rho, qubit_diag(0.25, 0.75)) ==
        doctest::Approx(0.8660254037844386).epsilon(1e-12));
  CHECK(trace_distance(qubit_diag(1.0, 0.0), DensityMatrix::maximally_mixed(2)) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("numerical_rank treats diagonal weights as exact") {
  CHECK(numerical_rank(qubit_diag(0.75, 0.25)) == 2);
  CHECK(numerical_rank(qubit_diag(1.0, 0.0)) == 1);
  // A weight far below the dense noise floor still counts in diagonal form.
  CHECK(numerical_rank(qubit_diag(1.0 - 1e-20, 1e-20)) == 2);
  // The same spectrum reassembled in a rotated basis goes through the
  // eigensolver, where 1e-20 is indistinguishable from zero.
  Eigen::MatrixXcd hadamard(2, 2);
  hadamard << 1.0, 1.0, 1.0, -1.0;
  hadamard /= std::sqrt(2.0);
  const DensityMatrix dense =
      DensityMatrix::from_spectrum(Eigen::Vector2d(1.0 - 1e-20, 1e-20), hadamard);
  CHECK(numerical_rank(dense) == 1);
}

TEST_CASE("spectrum reconstructs the state") {
  for (Eigen::Index dim : {2, 4, 8}) {
    const DensityMatrix m = random_full_rank(dim, 7700 + dim);
    const Spectrum s = m.spectrum();
    const DensityMatrix back = DensityMatrix::from_spectrum(s.eigenvalues, s.eigenvectors);
    CHECK(std::sqrt(std::max(0.0, hs_distance_sq(m, back))) <= 1e-8);
    for (Eigen::Index i = 1; i < dim; ++i) {
      CHECK(s.eigenvalues(i) <= s.eigenvalues(i - 1) + 1e-14);
    }
  }
}

TEST_CASE("JSON round trip is bit-faithful") {
  for (const DensityMatrix& m :
       {random_full_rank(4, 8101), DensityMatrix::diagonal(Eigen::Vector3d(0.1, 0.2, 0.7))}) {
    const DensityMatrix back = density_matrix_from_json(to_json(m));
    REQUIRE(back.dim() == m.dim());
    const Eigen::MatrixXcd lhs = m.matrix();
    const Eigen::MatrixXcd rhs = back.matrix();
    for (Eigen::Index r = 0; r < m.dim(); ++r) {
      for (Eigen::Index c = 0; c < m.dim(); ++c) {
        CHECK(lhs(r, c).real() == rhs(r, c).real());
        CHECK(lhs(r, c).imag() == rhs(r, c).imag());
      }
    }
  }
}

TEST_CASE("mix and partial trace behave on product states") {
  const DensityMatrix a = qubit_diag(0.75, 0.25);
  const DensityMatrix b = qubit_diag(0.6, 0.4);
  const DensityMatrix even = mix(0.5, a, 0.5, b);
  CHECK(even.trace() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(even.diagonal_part()(0) == doctest::Approx(0.675).epsilon(1e-14));

  const DensityMatrix ab = tensor_product(a, b);
  const DensityMatrix left = partial_trace_keep(ab, {2, 2}, 0);
  const DensityMatrix right = partial_trace_keep(ab, {2, 2}, 1);
  CHECK(std::sqrt(std::max(0.0, hs_distance_sq(left, a))) <= 1e-12);
  CHECK(std::sqrt(std::max(0.0, hs_distance_sq(right, b))) <= 1e-12);
}

TEST_CASE("random states are valid and full rank") {
  for (Eigen::Index dim : {2, 4, 8}) {
    const DensityMatrix m = random_full_rank(dim, 9300 + dim);
    CHECK(m.is_normalized());
    CHECK(numerical_rank(m) == dim);
    CounterRng rng(9400 + static_cast<std::uint64_t>(dim));
    const DensityMatrix low = random_mixed_state(dim, 2, rng);
    CHECK(numerical_rank(low) == 2);
  }
}

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

#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pvqa/error.hpp"
#include "pvqa/rng.hpp"

#include "json.hpp"

namespace pvqa {

using cxd = std::complex<double>;

// eigenvalues below this count as zero when ranking a normalized state
inline constexpr double kRankCutoff = 1e-9;
// Hermiticity / positivity / trace tolerances for validated construction
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kNormalizedTol = 1e-10;

// Eigensystem of a Hermitian matrix, eigenvalues sorted descending and
// eigenvectors stored as matching orthonormal columns.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;
};

// Immutable d x d positive semidefinite matrix. States known to be diagonal in
// the computational basis keep only their diagonal; every operation that can
// stay in that representation does, which keeps n-qubit product sweeps at
// O(d) per evaluation instead of O(d^3).
class DensityMatrix {
 public:
  // Validates Hermiticity (1e-10), positive semidefiniteness (eigenvalues
  // >= -1e-10) and records whether the trace is within 1e-10 of one.
  explicit DensityMatrix(const Eigen::MatrixXcd& entries);

  // Diagonal state from nonnegative weights (validated, O(d)).
  static DensityMatrix diagonal(const Eigen::VectorXd& weights);

  // |psi><psi| for a state vector (normalized internally).
  static DensityMatrix pure(const Eigen::VectorXcd& amplitudes);

  static DensityMatrix maximally_mixed(Eigen::Index dim);

  // Reassembles sum_i evals(i) |evecs.col(i)><evecs.col(i)|. Eigenvalues must
  // be >= -1e-10; columns must be orthonormal to 1e-8.
  static DensityMatrix from_spectrum(const Eigen::VectorXd& evals,
                                     const Eigen::MatrixXcd& evecs);

  Eigen::Index dim() const { return dim_; }
  bool is_normalized() const { return normalized_; }
  bool is_diagonal_form() const { return diagonal_form_; }
  double trace() const;

  // Dense entries; materialized on demand for diagonal-form states.
  Eigen::MatrixXcd matrix() const;

  // Diagonal weights; requires is_diagonal_form().
  const Eigen::VectorXd& diagonal_weights() const;

  // Real diagonal, available in either representation.
  Eigen::VectorXd diagonal_part() const;

  // Full eigensystem, eigenvalues descending.
  Spectrum spectrum() const;

  // Copy scaled to unit trace.
  DensityMatrix normalized() const;

  // U m U^dagger for unitary U (trusted: positivity is preserved).
  DensityMatrix conjugated(const Eigen::MatrixXcd& unitary) const;

  DensityMatrix tensor(const DensityMatrix& other) const;

 private:
  struct Trusted {};
  DensityMatrix(Trusted, Eigen::MatrixXcd entries, bool normalized);
  DensityMatrix(Trusted, Eigen::VectorXd diag, bool normalized);

  Eigen::Index dim_ = 0;
  bool normalized_ = false;
  bool diagonal_form_ = false;
  Eigen::VectorXd diag_;    // valid when diagonal_form_
  Eigen::MatrixXcd dense_;  // valid otherwise

  friend DensityMatrix matrix_power(const DensityMatrix&, double);
  friend DensityMatrix partial_trace_keep(const DensityMatrix&,
                                          const std::vector<Eigen::Index>&,
                                          std::size_t);
  friend DensityMatrix mix(double, const DensityMatrix&, double, const DensityMatrix&);
};

// m^alpha through the spectral decomposition. Eigenvalues at or below the
// rank cutoff map to zero for alpha > 0 and raise NonInvertible for alpha < 0.
// The cutoff scales with the largest eigenvalue so unnormalized inputs behave.
DensityMatrix matrix_power(const DensityMatrix& m, double alpha);

// tr(m^2); requires trace within 1e-8 of one.
double purity(const DensityMatrix& m);

// Trace of the ordered product of matrices (complex in general).
cxd trace_product_exact(const std::vector<DensityMatrix>& ms);

// tr[(a-b)^2], the squared Hilbert-Schmidt distance between Hermitian a, b.
double hs_distance_sq(const DensityMatrix& a, const DensityMatrix& b);

// Count of eigenvalues above the cutoff.
int numerical_rank(const DensityMatrix& m, double cutoff = kRankCutoff);

// Order-alpha entropies in natural log units; alpha in (0,1) or (1,inf).
double renyi_entropy(const DensityMatrix& m, double alpha);
double tsallis_entropy(const DensityMatrix& m, double alpha);

// Uhlmann fidelity tr sqrt(sqrt(b) a sqrt(b)).
double bures_fidelity(const DensityMatrix& a, const DensityMatrix& b);

// (1/2) tr |a-b|.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// p*a + q*b for p, q >= 0 (convex mixtures and affine PSD combinations).
DensityMatrix mix(double p, const DensityMatrix& a, double q, const DensityMatrix& b);

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

// Reduced state of subsystem `keep` for a state on a tensor factorization
// with the given per-factor dimensions (product must equal m.dim()).
DensityMatrix partial_trace_keep(const DensityMatrix& m,
                                 const std::vector<Eigen::Index>& dims,
                                 std::size_t keep);

// Reference values computed directly from the spectrum of m. qfi_supported
// records whether a Bures-fidelity-based Fisher information evaluation is
// well defined against the companion state n (dimensions match, both have
// unit trace).
struct ExactOracles {
  int rank = 0;
  double renyi = 0.0;
  double tsallis = 0.0;
  double fidelity = 0.0;
  bool qfi_supported = false;
};

ExactOracles exact_oracles(const DensityMatrix& m, const DensityMatrix& n, double alpha);

// JSON form {"dim": d, "re": [...], "im": [...]}, entries row major. Finite
// doubles survive a round trip bit for bit.
nlohmann::json to_json(const DensityMatrix& m);
DensityMatrix density_matrix_from_json(const nlohmann::json& j);

// Full-rank mixed state: Ginibre d x d (a Haar-random pure state on a d x d
// bipartition traced over the ancilla half).
DensityMatrix random_mixed_state(Eigen::Index dim, CounterRng& rng);

// Rank-r mixed state: Ginibre d x r.
DensityMatrix random_mixed_state(Eigen::Index dim, Eigen::Index rank, CounterRng& rng);

}  // namespace pvqa

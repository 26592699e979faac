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

#ifndef PVQA_ANSATZ_HPP_
#define PVQA_ANSATZ_HPP_

#include <functional>
#include <string>
#include <vector>

#include "pvqa/density_matrix.hpp"

namespace pvqa {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// A parameterized family of normalized states. domain records the canonical
// range of each parameter, used for random starts and iterate clamping; the
// evaluation maps are periodic, so probing slightly outside the domain is
// well defined.
struct AnsatzFamily {
  std::string name;
  std::vector<Interval> domain;
  std::function<DensityMatrix(const Eigen::VectorXd&)> evaluate;

  int param_count() const { return static_cast<int>(domain.size()); }
};

// cos^2(theta/2)|0><0| + sin^2(theta/2)|1><1|.
DensityMatrix diagonal_qubit(double theta);

// n-fold tensor power of diagonal_qubit(theta), still a single parameter.
DensityMatrix product_diagonal(double theta, int n);

// R(theta) rho^(-1/2k)/tr(rho^(-1/2k)) R(theta)^dagger, where R is the
// tensor product of single-qubit y-rotations exp(-i theta_i sigma_y / 2).
// rho must be full rank and of dimension 2^n with n = theta.size().
DensityMatrix rotated_spectrum(const DensityMatrix& rho, int k, const Eigen::VectorXd& theta);

// rotated_spectrum with every rotation angle set to the same value.
DensityMatrix correlated_rotated_spectrum(const DensityMatrix& rho, int k, double theta, int n);

// Hypersphere-parameterized diagonal state in the basis given by the R
// orthonormal columns of eigvecs: weight j carries cos^2(theta_j/2) times
// the sin^2 factors of all earlier angles, and the last weight is the full
// product of sin^2 factors, so the weights sum to 1 identically.
DensityMatrix sphere_low_rank(const Eigen::MatrixXcd& eigvecs, const Eigen::VectorXd& theta);

// Rank-2 state (1-mu)|0..0><0..0| + mu|1..1><1..1| conjugated by the
// y-rotation product R(theta); mu must lie strictly inside (0, 1).
DensityMatrix rotated_fixed_spectrum(double mu, int n, const Eigen::VectorXd& theta);

// Family wrappers over the constructors above. Each caches whatever can be
// computed once (inverse powers, basis checks) so that per-evaluation work
// stays proportional to building the output state.
AnsatzFamily diagonal_qubit_family();
AnsatzFamily product_diagonal_family(int n);
AnsatzFamily rotated_spectrum_family(const DensityMatrix& rho, int k);
AnsatzFamily correlated_rotated_spectrum_family(const DensityMatrix& rho, int k, int n);
AnsatzFamily sphere_family(const Eigen::MatrixXcd& eigvecs);
AnsatzFamily rotated_fixed_spectrum_family(double mu, int n);

// Sphere family over the full eigenbasis of the given state, the default
// stand-in for the unspecified circuit ansatz in the estimation pipelines.
AnsatzFamily sphere_family_for_state(const DensityMatrix& state);

}  // namespace pvqa

#endif  // PVQA_ANSATZ_HPP_

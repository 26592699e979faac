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

#ifndef PVQA_BPL_HPP_
#define PVQA_BPL_HPP_

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pvqa/ansatz.hpp"
#include "pvqa/density_matrix.hpp"

// Closed-form purity-cost landscapes for product states with a two-point
// spectrum, expected-gradient-magnitude formulas on small parameter balls,
// and the Monte Carlo scans and fits that probe how those gradients decay
// with system size.

namespace pvqa {

// Single-qubit spectrum (lambda1, lambda2), repeated across n qubits.
struct SpectrumPair {
  double lambda1 = 0.5;
  double lambda2 = 0.5;
};

// Coefficients of the per-qubit factor of the product-state cost, written
// with u = cos^2(theta/2) and v = sin^2(theta/2) as
//   N(theta) = u^2 + b u v + a v^2,   D(theta) = (u + c v)^2.
// Both a and c are at least 1, with equality exactly at a degenerate
// spectrum, where N/D collapses to the constant 1.
struct FactorConstants {
  double a = 1.0;
  double b = 2.0;
  double c = 1.0;
};

// One Monte Carlo estimate of the mean absolute gradient component of a
// cost landscape at uniform-random parameters.
struct GradientScan {
  int n_or_R = 0;  // system size (qubits) or rank, whichever was scanned
  int samples = 0;
  double mean_abs_grad = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(samples)
  std::uint64_t seed = 0;
};

// Bound on the mean absolute gradient component under independent
// uniform angles: value = first_factor * base^n. base is exposed so decay
// rates can be asserted without the n-independent prefactor.
struct UncorrelatedBound {
  double value = 0.0;
  double first_factor = 0.0;  // mean |d(N/D)/dtheta| over [-delta, delta]
  double base = 0.5;          // 1/2 - delta^2 (l2/l1 + l1/l2) / 48
};

// Least-squares fit of f(x) = a x^c + b x^(c-1).
struct PowerLawFit {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double residual_norm = 0.0;
};

// The factor coefficients (a, b, c) of the given spectrum:
//   a = (l1^2/l2^2 + l2^2/l1^2) / 2
//   b = 2 (l2/l1 + l1/l2 - 1)
//   c = (l2/l1 + l1/l2) / 2
FactorConstants factor_constants(const SpectrumPair& spec);

// Purity cost of the rotated-spectrum ansatz against rho = diag(l1, l2)^(x n),
// evaluated in closed form: C(theta) = 2^(-n) prod_j N(theta_j) / D(theta_j).
// The ansatz base absorbs the cost power, so the value does not depend on k;
// k is validated for interface parity with the generic cost. The homogeneous
// (u, v) form has no pole at theta = +-pi.
double product_cost_closed_form(const SpectrumPair& spec, int k, const Eigen::VectorXd& theta);

// Mean absolute gradient of the one-parameter landscape C(theta) =
// 2^(-n) (N(theta)/D(theta))^n, all qubit angles tied to a single theta drawn
// uniformly from [-delta, delta]:
//   E|C'| = |b - 2c| n / (c (n+1) 2^n delta) * (1 - (1 + c delta^2 / 4)^(-(n+1))).
// Raises DeltaTooLarge when delta >= sqrt(l2/l1), where the small-angle
// expansion behind the formula breaks down.
double correlated_expected_grad(const SpectrumPair& spec, int n, double delta);

// Bound on E|dC/dtheta_1| when every angle is an independent uniform draw
// from [-delta, delta]: the first factor is computed by quadrature, the
// remaining n factors enter through base^n. Raises DeltaTooLarge when
// delta >= l2/l1.
UncorrelatedBound uncorrelated_local_bound(const SpectrumPair& spec, int n, double delta);

// Purity cost of the rank-2 state lambda |0..0><0..0| + (1-lambda) |1..1><1..1|
// against the rotated two-point ansatz with weights (1-mu, mu) and cost power
// k, in closed form. With a(theta) = prod_j cos^2(theta_j/2), b(theta) =
// prod_j sin^2(theta_j/2), x0 = (1-mu)^(2k), x1 = mu^(2k) and s = (-1)^n:
//   N = l^2 (x0 a + x1 b)^2 + 2 l (1-l) a b (x0 + s x1)^2 + (1-l)^2 (x0 b + x1 a)^2
//   D = (l (x0 a + x1 b) + (1-l) (x0 b + x1 a))^2
// The sign s is the interference of the two rotated poles across n qubits;
// it matches the generic cost for every n. The landscape never drops below
// 1/2, and equals 1/2 at theta = 0 when mu = l^(1/2k) / (l^(1/2k) + (1-l)^(1/2k)).
double low_rank_landscape(double lambda, double mu, int k, const Eigen::VectorXd& theta);

// Monte Carlo scan: draws `samples` parameter vectors uniformly from
// `measure` (one interval per dimension), computes the central-difference
// gradient of `landscape` at each, and averages (1/dim) sum_j |grad_j|.
GradientScan mc_gradient_scan(const std::function<double(const Eigen::VectorXd&)>& landscape,
                              int dim, int samples, const std::vector<Interval>& measure,
                              std::uint64_t seed, double fd_step = 0.005);

// Least-squares fit of f(x) = a x^c + b x^(c-1) to the given points. The
// exponent is located by a coarse scan over [-5, 2] refined by golden
// section, with (a, b) solved linearly at each candidate c. Requires at
// least four points with positive coordinates; raises FitDiverged when no
// candidate produces a finite fit.
PowerLawFit power_law_fit(const std::vector<std::pair<double, double>>& points);

// Leading-order model of the gradient near the optimum of
// low_rank_landscape: |dC/dtheta_1| ~ F |theta_1| prod_{j>=2} theta_j^2 / 4^(n-1).
// Evaluates the finite-difference gradient along scaled copies s * theta and
// fits the single constant F; raises NeighborhoodTooLarge when the model
// leaves more than 10% of the gradient signal unexplained, which signals
// that theta is outside the asymptotic regime.
double near_optimum_gradient_asymptotic(double lambda, double mu, int k, int n,
                                        const Eigen::VectorXd& theta);

}  // namespace pvqa

#endif  // PVQA_BPL_HPP_

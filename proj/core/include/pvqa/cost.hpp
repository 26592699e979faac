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

#ifndef PVQA_COST_HPP_
#define PVQA_COST_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "pvqa/density_matrix.hpp"
#include "pvqa/swap_test.hpp"

namespace pvqa {

// Shot-based estimation request: both traces entering the cost are measured
// with this many SWAP-test shots, on generators seeded from seed. Repeated
// evaluations with the same seed see the same noise, which keeps
// finite-difference probes coherent.
struct ShotPlan {
  long long count = 10000;
  std::uint64_t seed = 0;
};

// Configuration of the purity cost tr[(eta^k rho eta^k)^2] / tr(rho eta^2k)^2.
struct CostSpec {
  int power = 1;  // the exponent k applied to the ansatz state
  std::optional<ShotPlan> shots;
  double blend_epsilon = 0.0;  // weight of the local term in blended_cost
};

// One cost evaluation. numerator and denominator are the two measured
// traces; value = numerator / denominator^2. std_error propagates the two
// SWAP-test errors through that quotient to first order (zero in exact
// mode).
struct CostEvaluation {
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  double std_error = 0.0;
};

// Blended global/local evaluation. epsilon_at_boundary marks the epsilon=1
// corner case, where the global term no longer contributes at all.
struct BlendedEvaluation {
  double value = 0.0;
  double global_value = 0.0;
  double local_value = 0.0;
  bool epsilon_at_boundary = false;
};

// Purity cost of the sandwiched state eta^k rho eta^k, normalized by its
// trace. rho may be unnormalized but must have rank at least 2; eta must be
// a normalized state. In shot mode the two traces come from SWAP tests
// over [rho, eta x 2k, rho, eta x 2k] and [rho, eta x 2k].
CostEvaluation global_cost(const DensityMatrix& rho, const DensityMatrix& eta,
                           const CostSpec& spec);

// The normalized state eta^k rho eta^k / tr(rho eta^2k) whose purity the
// global cost measures.
DensityMatrix cost_output_state(const DensityMatrix& rho, const DensityMatrix& eta, int k);

// Recover tr(rho^(-1/2k)) from a converged minimization: the 2k-th root of
// 1 / [tr(rho eta_star^2k) * cost_at_star]. Exact at the true optimum and
// an approximation elsewhere.
double normalization_factor(const DensityMatrix& rho, const DensityMatrix& eta_star,
                            double cost_at_star, int k);

// Average of the single-subsystem purity costs over the reductions of rho
// and eta to each tensor factor in subsystem_dims.
double local_cost(const DensityMatrix& rho, const DensityMatrix& eta, int k,
                  const std::vector<Eigen::Index>& subsystem_dims);

// (1 - epsilon) * global + epsilon * local with epsilon from spec.
BlendedEvaluation blended_cost(const DensityMatrix& rho, const DensityMatrix& eta,
                               const CostSpec& spec,
                               const std::vector<Eigen::Index>& subsystem_dims);

}  // namespace pvqa

#endif  // PVQA_COST_HPP_

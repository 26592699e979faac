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

#ifndef PVQA_APPLICATIONS_HPP_
#define PVQA_APPLICATIONS_HPP_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pvqa/cost.hpp"
#include "pvqa/optimizer.hpp"

namespace pvqa {

// Rational exponent sign * (l + p/q) with 0 <= p <= q and gcd(p, q) = 1.
struct FractionSpec {
  int sign = 1;
  long long p = 0;
  long long q = 1;
  long long l = 0;

  double value() const {
    return sign * (static_cast<double>(l) + static_cast<double>(p) / static_cast<double>(q));
  }
};

// Best continued-fraction approximation of alpha whose fractional part has
// denominator at most max_denominator. The denominator cap keeps SWAP-test
// register counts bounded.
FractionSpec rational_approximation(double alpha, long long max_denominator = 12);

// Builds the ansatz family used to minimize the purity of one stage input.
// The default provider diagonalizes the input and spans a hypersphere over
// its eigenbasis, which always contains the stage optimum.
using StageFamilyProvider =
    std::function<AnsatzFamily(int stage, const DensityMatrix& input, int power)>;

StageFamilyProvider spectral_stage_families();
StageFamilyProvider product_diagonal_stage_families(int qubits);

struct PipelineConfig {
  OptimizerConfig optimizer;
  std::optional<ShotPlan> shots;  // per-stage shot plans derive their seeds from this one
  int starts = 1;
  int cost_power = 1;              // k of the single-stage costs (rank estimation)
  long long max_denominator = 12;  // cap for rational exponent approximation
  // When set, every stage also descends from this constant angle vector
  // (the figure experiments start at pi/2) and the best trace wins.
  std::optional<double> init_angle;
};

// Outcome of one pipeline: the estimate, the exact spectral oracle for the
// same quantity, their absolute gap, and per-stage optimization traces.
// constants holds the named normalization factors the estimate was
// assembled from.
struct PipelineReport {
  double estimate = 0.0;
  double oracle = 0.0;
  double abs_error = 0.0;
  bool converged = true;
  std::vector<OptimizationTrace> stage_traces;
  std::map<std::string, double> constants;
  // Filled by estimate_rank: the anytime bound 1/C(theta) at every iterate.
  std::vector<double> rank_lower_bounds;

  nlohmann::json to_json(bool include_iterates) const;
};

// rank(rho) estimated as 1/C(theta*) of a single purity minimization.
PipelineReport estimate_rank(const DensityMatrix& rho, const AnsatzFamily& family,
                             const PipelineConfig& config);

struct FractionalPowerResult {
  DensityMatrix state;
  PipelineReport report;
};

// Staged approximation of rho^alpha / tr(rho^alpha) for alpha = frac.value()
// in [-1, 1]. The report's estimate is the recovered normalization
// tr(rho^alpha); the state's trace distance from the spectral target is in
// constants["state_trace_distance"].
FractionalPowerResult fractional_power_state(const DensityMatrix& rho, const FractionSpec& frac,
                                             const StageFamilyProvider& families,
                                             const PipelineConfig& config);

struct LearnStateResult {
  DensityMatrix state;
  PipelineReport report;
};

// Two-stage reconstruction of rho itself; the report's estimate is the
// trace distance between the learned state and rho (oracle 0).
LearnStateResult learn_state(const DensityMatrix& rho, const StageFamilyProvider& families,
                             const PipelineConfig& config);

enum class EntropyKind { Renyi, Tsallis };

// Entropy of order alpha from tr(rho^alpha) ~ tr(rho^l eta*) tr(rho^(p/q)).
PipelineReport estimate_entropy(const DensityMatrix& rho, double alpha, EntropyKind kind,
                                const StageFamilyProvider& families,
                                const PipelineConfig& config);

// Two-stage Bures fidelity estimate K1 K2 tr(M nu*), clamped to [0, 1] with
// the raw value kept in constants["raw_estimate"].
PipelineReport estimate_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma,
                                 const StageFamilyProvider& families,
                                 const PipelineConfig& config);

// Quantum Fisher information at theta from the fidelity between rho(theta)
// and rho(theta + delta): 8 (1 - F) / delta^2. The oracle is the same
// finite difference on the exact fidelity; constants["richardson_bias"]
// estimates the delta^2 discretization error from a half-step oracle.
PipelineReport estimate_qfi(const std::function<DensityMatrix(double)>& rho_family, double theta,
                            double delta, const StageFamilyProvider& families,
                            const PipelineConfig& config);

}  // namespace pvqa

#endif  // PVQA_APPLICATIONS_HPP_

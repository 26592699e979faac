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

#ifndef PVQA_SWAP_TEST_HPP_
#define PVQA_SWAP_TEST_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "pvqa/density_matrix.hpp"

namespace pvqa {

// Resource plan for one generalized SWAP test over k registers of n qubits.
// A single ancilla controls the cyclic permutation of the registers, which
// decomposes into (k-1)*n controlled-SWAP gates.
struct SwapTestPlan {
  int registers = 2;           // k
  int qubits_per_register = 1; // n
  std::optional<long long> shots;  // empty means exact expectation
  std::uint64_t seed = 0;

  int ancilla_count() const { return 1; }
  long long total_qubits() const {
    return static_cast<long long>(registers) * qubits_per_register + 1;
  }
  long long cswap_count() const {
    return static_cast<long long>(registers - 1) * qubits_per_register;
  }
};

// Outcome of one SWAP test. The measured observable is the cyclic
// permutation; its expectation equals the trace of the ordered product of
// the register states, and the ancilla clicks "+" with probability
// (1 + expectation) / 2. std_error is the standard error of prob_plus
// (zero in exact mode); the standard error of expectation is twice that.
struct SwapTestResult {
  double expectation = 0.0;
  double prob_plus = 0.0;
  double std_error = 0.0;
  std::optional<long long> shots_used;  // empty means exact
};

// Expectation of the cyclic permutation over the given register states,
// i.e. the real part of tr(m_1 m_2 ... m_k). The single-ancilla circuit
// measures the real part only; an imaginary part above 1e-8 means the
// state sequence is not one the test applies to and raises
// ComplexTraceProduct.
double permutation_expectation(const std::vector<DensityMatrix>& ms);

// Run the SWAP test described by plan on the given states. Exact mode
// returns the analytic probabilities with zero standard error; shot mode
// draws plan.shots Bernoulli outcomes from a generator seeded with
// plan.seed and returns the frequency estimate.
SwapTestResult sample_swap_test(const SwapTestPlan& plan,
                                const std::vector<DensityMatrix>& ms);

// Qubit-count accounting for the estimation pipelines. The fractional
// parameters p, q and the integer exponent l are only read for the tasks
// that use them.
struct CircuitTask {
  enum class Kind { Rank, FracPower, StateLearning, Entropy, Fidelity };
  Kind kind = Kind::Rank;
  int p = 0;
  int q = 1;
  int l = 0;
};

// Width in qubits of the largest circuit a task needs at n data qubits.
long long circuit_size(const CircuitTask& task, int n);

// Smallest register size (in qubits) that holds a state of this dimension.
int qubits_for_dim(Eigen::Index dim);

}  // namespace pvqa

#endif  // PVQA_SWAP_TEST_HPP_

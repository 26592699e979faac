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

#include "pvqa/cost.hpp"

#include <cmath>
#include <string>

namespace pvqa {

namespace {

// The cost denominator is a trace of a product of states and shrinks
// exponentially with system size near legitimate optima, so no fixed
// magnitude separates "small" from "missed support". We only reject values
// that are nonpositive, non-finite, or so small that the quotient itself
// would overflow.
constexpr double kDenominatorFloor = 1e-280;

void check_spec(const CostSpec& spec) {
  if (spec.power < 1) {
    throw Error(ErrorCode::ParamOutOfRange,
                "cost power must be a positive integer, got " + std::to_string(spec.power));
  }
  if (!(spec.blend_epsilon >= 0.0 && spec.blend_epsilon <= 1.0)) {
    throw Error(ErrorCode::ParamOutOfRange, "blend epsilon must lie in [0, 1]");
  }
  if (spec.shots && spec.shots->count < 1) {
    throw Error(ErrorCode::InvalidShots, "shot count must be positive");
  }
}

void check_pair(const DensityMatrix& rho, const DensityMatrix& eta) {
  if (rho.dim() != eta.dim()) {
    throw Error(ErrorCode::DimMismatch, "state and ansatz have different dimensions");
  }
  if (std::abs(eta.trace() - 1.0) > 1e-8) {
    throw Error(ErrorCode::NotNormalized, "ansatz state must have unit trace");
  }
}

// rank(rho) >= 2 gate via the purity ratio tr(rho^2)/tr(rho)^2, which is 1
// exactly for rank-1 states. Avoids an eigensolve on the hot path.
void check_rank_at_least_two(const DensityMatrix& rho) {
  const double t = rho.trace();
  if (!(t > 0.0)) {
    throw Error(ErrorCode::RankTooLow, "input state has nonpositive trace");
  }
  double sq;
  if (rho.is_diagonal_form()) {
    sq = rho.diagonal_weights().squaredNorm();
  } else {
    sq = rho.matrix().squaredNorm();
  }
  if (1.0 - sq / (t * t) < 1e-9) {
    throw Error(ErrorCode::RankTooLow,
                "input state is numerically rank 1; the purity minimum would be trivial");
  }
}

double checked_quotient(double numerator, double denominator) {
  if (!std::isfinite(denominator) || denominator <= kDenominatorFloor) {
    throw Error(ErrorCode::DegenerateDenominator,
                "trace denominator " + std::to_string(denominator) +
                    " signals an ansatz with (numerically) no weight on the input support");
  }
  return (numerator / denominator) / denominator;
}

Eigen::MatrixXcd dense_integer_power(Eigen::MatrixXcd base, int exponent) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(base.rows(), base.cols());
  int e = exponent;
  while (e > 0) {
    if (e & 1) acc = acc * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return acc;
}

struct TracePair {
  double numerator = 0.0;    // tr(rho eta^2k rho eta^2k)
  double denominator = 0.0;  // tr(rho eta^2k)
};

TracePair exact_traces(const DensityMatrix& rho, const DensityMatrix& eta, int k) {
  TracePair t;
  if (rho.is_diagonal_form() && eta.is_diagonal_form()) {
    const Eigen::VectorXd& r = rho.diagonal_weights();
    const Eigen::VectorXd a = eta.diagonal_weights().array().pow(2 * k);
    t.denominator = r.dot(a);
    t.numerator = (r.array() * a.array()).matrix().squaredNorm();
    return t;
  }
  const Eigen::MatrixXcd a = dense_integer_power(eta.matrix(), 2 * k);
  const Eigen::MatrixXcd b = rho.matrix() * a;
  t.denominator = b.trace().real();
  t.numerator = (b.transpose().cwiseProduct(b)).sum().real();
  return t;
}

CostEvaluation global_cost_impl(const DensityMatrix& rho, const DensityMatrix& eta,
                                const CostSpec& spec, bool gate_rank) {
  check_spec(spec);
  check_pair(rho, eta);
  if (gate_rank) check_rank_at_least_two(rho);

  const int k = spec.power;
  CostEvaluation eval;
  if (!spec.shots) {
    const TracePair t = exact_traces(rho, eta, k);
    eval.numerator = t.numerator;
    eval.denominator = t.denominator;
    eval.value = checked_quotient(t.numerator, t.denominator);
    return eval;
  }

  // The support precondition is about the true trace, not its estimate;
  // gate on the exact value before drawing any shots.
  checked_quotient(1.0, exact_traces(rho, eta, k).denominator);

  // Registers are prepared as normalized states; the known trace of an
  // unnormalized input multiplies back in classically. The cost ratio is
  // scale invariant, so only the reported traces carry the factor.
  const double rho_trace = rho.trace();
  const DensityMatrix rho_state = rho.normalized();
  std::vector<DensityMatrix> numerator_regs;
  numerator_regs.reserve(2 + 4 * static_cast<std::size_t>(k));
  for (int rep = 0; rep < 2; ++rep) {
    numerator_regs.push_back(rho_state);
    for (int c = 0; c < 2 * k; ++c) numerator_regs.push_back(eta);
  }
  std::vector<DensityMatrix> denominator_regs;
  denominator_regs.reserve(1 + 2 * static_cast<std::size_t>(k));
  denominator_regs.push_back(rho_state);
  for (int c = 0; c < 2 * k; ++c) denominator_regs.push_back(eta);

  const int n = qubits_for_dim(rho.dim());
  SwapTestPlan num_plan{static_cast<int>(numerator_regs.size()), n, spec.shots->count,
                        derive_seed(spec.shots->seed, 1)};
  SwapTestPlan den_plan{static_cast<int>(denominator_regs.size()), n, spec.shots->count,
                        derive_seed(spec.shots->seed, 2)};
  const SwapTestResult num = sample_swap_test(num_plan, numerator_regs);
  const SwapTestResult den = sample_swap_test(den_plan, denominator_regs);

  eval.numerator = rho_trace * rho_trace * num.expectation;
  eval.denominator = rho_trace * den.expectation;
  eval.value = checked_quotient(num.expectation, den.expectation);
  const double sigma_n = 2.0 * num.std_error;
  const double sigma_d = 2.0 * den.std_error;
  const double d2 = den.expectation * den.expectation;
  const double dn = sigma_n / d2;
  const double dd = 2.0 * num.expectation * sigma_d / (d2 * den.expectation);
  eval.std_error = std::sqrt(dn * dn + dd * dd);
  return eval;
}

}  // namespace

CostEvaluation global_cost(const DensityMatrix& rho, const DensityMatrix& eta,
                           const CostSpec& spec) {
  return global_cost_impl(rho, eta, spec, true);
}

DensityMatrix cost_output_state(const DensityMatrix& rho, const DensityMatrix& eta, int k) {
  CostSpec spec;
  spec.power = k;
  check_spec(spec);
  check_pair(rho, eta);
  if (rho.is_diagonal_form() && eta.is_diagonal_form()) {
    const Eigen::VectorXd a = eta.diagonal_weights().array().pow(2 * k);
    Eigen::VectorXd w = rho.diagonal_weights().cwiseProduct(a);
    const double d = w.sum();
    checked_quotient(1.0, d);
    return DensityMatrix::diagonal(w / d);
  }
  const Eigen::MatrixXcd ek = dense_integer_power(eta.matrix(), k);
  Eigen::MatrixXcd s = ek * rho.matrix() * ek;
  const double d = s.trace().real();
  checked_quotient(1.0, d);
  return DensityMatrix(Eigen::MatrixXcd(s / d));
}

double normalization_factor(const DensityMatrix& rho, const DensityMatrix& eta_star,
                            double cost_at_star, int k) {
  if (k < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "cost power must be a positive integer");
  }
  if (!(cost_at_star > 0.0) || !std::isfinite(cost_at_star)) {
    throw Error(ErrorCode::ParamOutOfRange, "cost value at the optimum must be positive");
  }
  check_pair(rho, eta_star);
  const TracePair t = exact_traces(rho, eta_star, k);
  checked_quotient(1.0, t.denominator);
  return std::pow(t.denominator * cost_at_star, -1.0 / (2.0 * k));
}

double local_cost(const DensityMatrix& rho, const DensityMatrix& eta, int k,
                  const std::vector<Eigen::Index>& subsystem_dims) {
  CostSpec spec;
  spec.power = k;
  check_spec(spec);
  check_pair(rho, eta);
  if (subsystem_dims.empty()) {
    throw Error(ErrorCode::DimMismatch, "local cost needs at least one subsystem");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < subsystem_dims.size(); ++i) {
    const DensityMatrix rho_i = partial_trace_keep(rho, subsystem_dims, i);
    const DensityMatrix eta_i = partial_trace_keep(eta, subsystem_dims, i);
    try {
      total += global_cost_impl(rho_i, eta_i, spec, false).value;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateDenominator) {
        throw Error(ErrorCode::DegenerateDenominator,
                    "subsystem " + std::to_string(i) + ": " + std::string(e.what()));
      }
      throw;
    }
  }
  return total / static_cast<double>(subsystem_dims.size());
}

BlendedEvaluation blended_cost(const DensityMatrix& rho, const DensityMatrix& eta,
                               const CostSpec& spec,
                               const std::vector<Eigen::Index>& subsystem_dims) {
  check_spec(spec);
  BlendedEvaluation out;
  out.epsilon_at_boundary = spec.blend_epsilon == 1.0;
  out.global_value = global_cost(rho, eta, spec).value;
  out.local_value = local_cost(rho, eta, spec.power, subsystem_dims);
  out.value = (1.0 - spec.blend_epsilon) * out.global_value + spec.blend_epsilon * out.local_value;
  return out;
}

}  // namespace pvqa

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

#include "pvqa/applications.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace pvqa {

namespace {

FractionSpec reduced(FractionSpec f) {
  const long long g = std::gcd(f.p, f.q);
  if (g > 1) {
    f.p /= g;
    f.q /= g;
  }
  if (f.p == f.q) {
    f.l += 1;
    f.p = 0;
    f.q = 1;
  }
  return f;
}

void check_fraction(const FractionSpec& f) {
  if (f.q < 1 || f.p < 0 || f.p > f.q || f.l < 0 || (f.sign != 1 && f.sign != -1)) {
    throw Error(ErrorCode::InvalidFraction,
                "exponent must be sign * (l + p/q) with 0 <= p <= q and l >= 0");
  }
}

struct StageResult {
  OptimizationTrace trace;
  DensityMatrix eta_star;
  double norm = 0.0;  // tr(input^(-1/2k)) recovered from the converged cost
};

StageResult run_stage(const DensityMatrix& input, int power, const AnsatzFamily& family,
                      const PipelineConfig& config, int stage) {
  // The descent always runs on the exact cost; sampling during gradient
  // steps turns plain gradient descent into a random walk. Shots, when
  // requested, pay for the reported quantities at the converged angles.
  CostSpec exact_spec;
  exact_spec.power = power;
  const CostFn fn = [&input, &family, exact_spec](const Eigen::VectorXd& theta) {
    return global_cost(input, family.evaluate(theta), exact_spec).value;
  };

  OptimizerConfig oc = config.optimizer;
  oc.seed = derive_seed(config.optimizer.seed, 0x1000u + static_cast<std::uint64_t>(stage));

  std::optional<OptimizationTrace> best;
  if (config.init_angle) {
    const Eigen::VectorXd theta0 =
        Eigen::VectorXd::Constant(family.param_count(), *config.init_angle);
    best = descend(fn, theta0, oc, family.domain);
  }
  const int random_starts = config.starts - (config.init_angle ? 1 : 0);
  if (random_starts > 0 || !best) {
    const OptimizationTrace ms = multi_start(fn, family, std::max(1, random_starts), oc);
    if (!best || ms.cost_star < best->cost_star) best = ms;
  }

  DensityMatrix eta_star = family.evaluate(best->theta_star);
  StageResult out{std::move(*best), std::move(eta_star), 0.0};
  if (config.shots) {
    CostSpec measured_spec = exact_spec;
    measured_spec.shots =
        ShotPlan{config.shots->count,
                 derive_seed(config.shots->seed, 0x5741u + static_cast<std::uint64_t>(stage))};
    const double measured = global_cost(input, out.eta_star, measured_spec).value;
    if (!(measured > 0.0)) {
      throw Error(ErrorCode::InvalidShots,
                  "sampled cost at the optimum is not positive; increase the shot count");
    }
    out.trace.cost_star = measured;
  }
  out.norm = normalization_factor(input, out.eta_star, out.trace.cost_star, power);
  return out;
}

void absorb_stage(PipelineReport& report, StageResult&& s, const std::string& label) {
  report.converged = report.converged && s.trace.converged;
  report.constants[label + "_cost"] = s.trace.cost_star;
  report.stage_traces.push_back(std::move(s.trace));
}

// sigma eta rho eta sigma as an unnormalized state; Hermitian PSD by
// construction since it is A rho A^dagger with A = sigma eta.
DensityMatrix symmetric_sandwich(const DensityMatrix& sigma, const DensityMatrix& eta,
                                 const DensityMatrix& rho) {
  if (sigma.is_diagonal_form() && eta.is_diagonal_form() && rho.is_diagonal_form()) {
    Eigen::VectorXd w = sigma.diagonal_weights()
                            .cwiseProduct(eta.diagonal_weights())
                            .cwiseAbs2()
                            .cwiseProduct(rho.diagonal_weights());
    return DensityMatrix::diagonal(w);
  }
  const Eigen::MatrixXcd a = sigma.matrix() * eta.matrix();
  Eigen::MatrixXcd m = a * rho.matrix() * a.adjoint();
  return DensityMatrix(Eigen::MatrixXcd(0.5 * (m + m.adjoint())));
}

double final_trace_value(const std::vector<DensityMatrix>& registers,
                         const PipelineConfig& config, std::uint64_t stream) {
  if (!config.shots) return permutation_expectation(registers);
  SwapTestPlan plan{static_cast<int>(registers.size()), qubits_for_dim(registers.front().dim()),
                    config.shots->count, derive_seed(config.shots->seed, stream)};
  return sample_swap_test(plan, registers).expectation;
}

nlohmann::json trace_to_json(const OptimizationTrace& trace, bool include_iterates) {
  nlohmann::json j{{"cost_star", trace.cost_star},
                   {"converged", trace.converged},
                   {"stop_reason", trace.stop_reason},
                   {"iterations", trace.iterates.size()}};
  j["theta_star"] = std::vector<double>(trace.theta_star.data(),
                                        trace.theta_star.data() + trace.theta_star.size());
  if (include_iterates) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Iterate& it : trace.iterates) {
      arr.push_back({{"theta", std::vector<double>(it.theta.data(), it.theta.data() + it.theta.size())},
                     {"cost", it.cost}});
    }
    j["iterates"] = std::move(arr);
  }
  return j;
}

}  // namespace

FractionSpec rational_approximation(double alpha, long long max_denominator) {
  if (!std::isfinite(alpha)) {
    throw Error(ErrorCode::AlphaOutOfRange, "exponent must be finite");
  }
  if (max_denominator < 1) {
    throw Error(ErrorCode::InvalidFraction, "denominator cap must be at least 1");
  }
  FractionSpec out;
  out.sign = alpha < 0.0 ? -1 : 1;
  const double x = std::abs(alpha);
  out.l = static_cast<long long>(std::floor(x));
  double frac = x - static_cast<double>(out.l);

  // Continued-fraction convergents of the fractional part, capped at
  // max_denominator. Convergents are optimal among all fractions with a
  // denominator no larger than their own.
  long long p_prev = 1, q_prev = 0;  // convergent -1
  long long p_cur = 0, q_cur = 1;    // convergent 0 (value 0)
  double best_err = frac;
  out.p = 0;
  out.q = 1;
  double rem = frac;
  for (int step = 0; step < 64 && rem > 1e-15; ++step) {
    rem = 1.0 / rem;
    const double digit_real = std::floor(rem);
    if (digit_real > 1e18) break;
    const long long digit = static_cast<long long>(digit_real);
    rem -= digit_real;
    const long long p_next = digit * p_cur + p_prev;
    const long long q_next = digit * q_cur + q_prev;
    if (q_next > max_denominator) break;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    const double err = std::abs(frac - static_cast<double>(p_cur) / static_cast<double>(q_cur));
    if (err < best_err) {
      best_err = err;
      out.p = p_cur;
      out.q = q_cur;
    }
  }
  return reduced(out);
}

StageFamilyProvider spectral_stage_families() {
  return [](int, const DensityMatrix& input, int) { return sphere_family_for_state(input); };
}

StageFamilyProvider product_diagonal_stage_families(int qubits) {
  if (qubits < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "qubit count must be positive");
  }
  return [qubits](int, const DensityMatrix&, int) { return product_diagonal_family(qubits); };
}

nlohmann::json PipelineReport::to_json(bool include_iterates) const {
  nlohmann::json j{{"estimate", estimate},
                   {"oracle", oracle},
                   {"abs_error", abs_error},
                   {"converged", converged},
                   {"constants", constants}};
  nlohmann::json stages = nlohmann::json::array();
  for (const OptimizationTrace& t : stage_traces) {
    stages.push_back(trace_to_json(t, include_iterates));
  }
  j["stages"] = std::move(stages);
  if (!rank_lower_bounds.empty()) j["rank_lower_bounds"] = rank_lower_bounds;
  return j;
}

PipelineReport estimate_rank(const DensityMatrix& rho, const AnsatzFamily& family,
                             const PipelineConfig& config) {
  StageResult s = run_stage(rho, config.cost_power, family, config, 0);
  PipelineReport report;
  report.estimate = 1.0 / s.trace.cost_star;
  report.oracle = static_cast<double>(numerical_rank(rho));
  report.abs_error = std::abs(report.estimate - report.oracle);
  report.rank_lower_bounds.reserve(s.trace.iterates.size());
  for (const Iterate& it : s.trace.iterates) {
    report.rank_lower_bounds.push_back(1.0 / it.cost);
  }
  absorb_stage(report, std::move(s), "stage1");
  return report;
}

FractionalPowerResult fractional_power_state(const DensityMatrix& rho, const FractionSpec& frac,
                                             const StageFamilyProvider& families,
                                             const PipelineConfig& config) {
  check_fraction(frac);
  const FractionSpec f = reduced(frac);
  const double alpha = f.value();
  if (alpha < -1.0 || alpha > 1.0) {
    throw Error(ErrorCode::AlphaOutOfRange,
                "staged powers cover exponents in [-1, 1], got " + std::to_string(alpha));
  }

  PipelineReport report;
  const DensityMatrix rhon = rho.normalized();

  if (f.l == 0 && f.p == 0) {
    // Zero power: the target is exactly the maximally mixed state.
    DensityMatrix state = DensityMatrix::maximally_mixed(rho.dim());
    report.estimate = static_cast<double>(rho.dim());
    report.oracle = static_cast<double>(rho.dim());
    report.abs_error = 0.0;
    report.constants["state_trace_distance"] = 0.0;
    return {std::move(state), std::move(report)};
  }
  if (f.l == 1 && f.sign == 1) {
    // Unit power: the input itself is the answer.
    report.estimate = rhon.trace();
    report.oracle = rhon.trace();
    report.abs_error = 0.0;
    report.constants["state_trace_distance"] = 0.0;
    return {rhon, std::move(report)};
  }

  DensityMatrix oracle_power = matrix_power(rhon, alpha);
  report.oracle = oracle_power.trace();

  DensityMatrix state = rhon;
  if (f.l == 1) {
    // Full inversion: one minimization on rho^2 lands on rho^(-1)/tr(rho^(-1)).
    const DensityMatrix squared = matrix_power(rhon, 2.0);
    StageResult s1 = run_stage(squared, 1, families(0, squared, 1), config, 0);
    report.estimate = s1.norm;
    report.constants["inverse_norm"] = s1.norm;
    state = s1.eta_star;
    absorb_stage(report, std::move(s1), "stage1");
  } else {
    // Stage 1: eta* ~ rho^(-1/2q); its norm estimate is Z1 = tr(rho^(-1/2q)).
    StageResult s1 = run_stage(rhon, static_cast<int>(f.q), families(0, rhon, static_cast<int>(f.q)),
                               config, 0);
    const double z1 = s1.norm;
    report.constants["Z1"] = z1;
    // Stage 2 input eta*^4p ~ rho^(-2p/q) / Z1^4p.
    const DensityMatrix x = matrix_power(s1.eta_star, 4.0 * static_cast<double>(f.p));
    absorb_stage(report, std::move(s1), "stage1");
    StageResult s2 = run_stage(x, 1, families(1, x, 1), config, 1);
    const double w = s2.norm * std::pow(z1, -2.0 * static_cast<double>(f.p));
    report.constants["W"] = w;
    if (f.sign == 1) {
      report.estimate = w;
      state = s2.eta_star;
      absorb_stage(report, std::move(s2), "stage2");
    } else {
      // Stage 3 input mu*^2 ~ rho^(2p/q) / W^2 flips the exponent sign.
      const DensityMatrix y = matrix_power(s2.eta_star, 2.0);
      absorb_stage(report, std::move(s2), "stage2");
      StageResult s3 = run_stage(y, 1, families(2, y, 1), config, 2);
      const double v = s3.norm / w;
      report.constants["V"] = v;
      report.estimate = v;
      state = s3.eta_star;
      absorb_stage(report, std::move(s3), "stage3");
    }
  }

  report.abs_error = std::abs(report.estimate - report.oracle);
  report.constants["state_trace_distance"] = trace_distance(state, oracle_power.normalized());
  return {std::move(state), std::move(report)};
}

LearnStateResult learn_state(const DensityMatrix& rho, const StageFamilyProvider& families,
                             const PipelineConfig& config) {
  PipelineReport report;
  const DensityMatrix rhon = rho.normalized();

  const DensityMatrix squared = matrix_power(rhon, 2.0);
  StageResult s1 = run_stage(squared, 1, families(0, squared, 1), config, 0);
  report.constants["inverse_norm"] = s1.norm;

  const DensityMatrix y = matrix_power(s1.eta_star, 2.0);
  absorb_stage(report, std::move(s1), "stage1");
  StageResult s2 = run_stage(y, 1, families(1, y, 1), config, 1);
  DensityMatrix state = s2.eta_star;
  absorb_stage(report, std::move(s2), "stage2");

  report.estimate = trace_distance(state, rhon);
  report.oracle = 0.0;
  report.abs_error = report.estimate;
  return {std::move(state), std::move(report)};
}

PipelineReport estimate_entropy(const DensityMatrix& rho, double alpha, EntropyKind kind,
                                const StageFamilyProvider& families,
                                const PipelineConfig& config) {
  if (!(alpha > 0.0) || std::abs(alpha - 1.0) < 1e-12) {
    throw Error(ErrorCode::AlphaOutOfRange,
                "entropy order must lie in (0,1) or (1,inf), got " + std::to_string(alpha));
  }
  const DensityMatrix rhon = rho.normalized();
  const FractionSpec f = rational_approximation(alpha, config.max_denominator);

  PipelineReport report;
  report.constants["l"] = static_cast<double>(f.l);
  report.constants["p"] = static_cast<double>(f.p);
  report.constants["q"] = static_cast<double>(f.q);

  double trace_alpha;
  if (f.p == 0 && f.l == 0) {
    // The denominator cap rounded the order down to zero; tr(rho^0) is the
    // dimension and needs no circuit at all.
    trace_alpha = static_cast<double>(rhon.dim());
  } else if (f.p == 0) {
    // Integer order: a single permutation test over l copies, no stages.
    const std::vector<DensityMatrix> regs(static_cast<std::size_t>(f.l), rhon);
    trace_alpha = final_trace_value(regs, config, 0x7A01);
    report.constants["swap_value"] = trace_alpha;
  } else {
    FractionSpec positive = f;
    positive.sign = 1;
    positive.l = 0;
    FractionalPowerResult power = fractional_power_state(rhon, positive, families, config);
    report.stage_traces = std::move(power.report.stage_traces);
    report.converged = power.report.converged;
    for (const auto& [key, value] : power.report.constants) {
      report.constants[key] = value;
    }
    const double w = power.report.estimate;

    std::vector<DensityMatrix> regs(static_cast<std::size_t>(f.l), rhon);
    regs.push_back(power.state);
    const double swap_value = final_trace_value(regs, config, 0x7A02);
    report.constants["swap_value"] = swap_value;
    trace_alpha = swap_value * w;
  }
  report.constants["trace_alpha"] = trace_alpha;

  if (kind == EntropyKind::Renyi) {
    report.estimate = std::log(trace_alpha) / (1.0 - alpha);
    report.oracle = renyi_entropy(rhon, alpha);
  } else {
    report.estimate = (trace_alpha - 1.0) / (1.0 - alpha);
    report.oracle = tsallis_entropy(rhon, alpha);
  }
  report.abs_error = std::abs(report.estimate - report.oracle);
  return report;
}

PipelineReport estimate_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma,
                                 const StageFamilyProvider& families,
                                 const PipelineConfig& config) {
  PipelineReport report;
  report.oracle = bures_fidelity(rho, sigma);

  StageResult s1 = run_stage(sigma, 1, families(0, sigma, 1), config, 0);
  const double k1 = s1.norm;
  report.constants["K1"] = k1;

  const DensityMatrix m = symmetric_sandwich(sigma, s1.eta_star, rho);
  const DensityMatrix eta1 = s1.eta_star;
  absorb_stage(report, std::move(s1), "stage1");

  StageResult s2 = run_stage(m, 1, families(1, m, 1), config, 1);
  const double k2 = s2.norm;
  report.constants["K2"] = k2;

  const std::vector<DensityMatrix> regs{sigma, eta1, rho, eta1, sigma, s2.eta_star};
  const double swap_value = final_trace_value(regs, config, 0x7A03);
  absorb_stage(report, std::move(s2), "stage2");
  report.constants["swap_value"] = swap_value;

  const double raw = k1 * k2 * swap_value;
  report.constants["raw_estimate"] = raw;
  report.estimate = std::clamp(raw, 0.0, 1.0);
  report.abs_error = std::abs(report.estimate - report.oracle);
  return report;
}

PipelineReport estimate_qfi(const std::function<DensityMatrix(double)>& rho_family, double theta,
                            double delta, const StageFamilyProvider& families,
                            const PipelineConfig& config) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw Error(ErrorCode::ParamOutOfRange, "delta must be positive");
  }
  const DensityMatrix at = rho_family(theta);
  const DensityMatrix shifted = rho_family(theta + delta);
  const DensityMatrix half_shifted = rho_family(theta + 0.5 * delta);

  PipelineReport fid = estimate_fidelity(at, shifted, families, config);

  PipelineReport report;
  report.estimate = 8.0 * (1.0 - fid.estimate) / (delta * delta);
  report.oracle = 8.0 * (1.0 - fid.oracle) / (delta * delta);
  report.abs_error = std::abs(report.estimate - report.oracle);
  report.converged = fid.converged;
  report.stage_traces = std::move(fid.stage_traces);
  report.constants = std::move(fid.constants);
  report.constants["fidelity_estimate"] = fid.estimate;
  report.constants["fidelity_oracle"] = fid.oracle;

  const double f_half = bures_fidelity(at, half_shifted);
  const double qfi_half = 32.0 * (1.0 - f_half) / (delta * delta);
  report.constants["half_delta_oracle"] = qfi_half;
  report.constants["richardson_bias"] = (4.0 / 3.0) * (report.oracle - qfi_half);
  return report;
}

}  // namespace pvqa

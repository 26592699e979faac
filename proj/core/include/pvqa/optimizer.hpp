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

#ifndef PVQA_OPTIMIZER_HPP_
#define PVQA_OPTIMIZER_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "pvqa/ansatz.hpp"

namespace pvqa {

using CostFn = std::function<double(const Eigen::VectorXd&)>;

// Plain gradient descent with central finite differences. grad_tol and
// cost_tol stop the descent when the gradient norm or the cost change
// drops strictly below them; either can be set to 0 to disable that test.
struct OptimizerConfig {
  double fd_step = 0.005;
  double learning_rate = 0.05;
  long long max_iters = 5000;
  double grad_tol = 1e-5;
  double cost_tol = 1e-8;
  std::uint64_t seed = 0;
};

struct Iterate {
  Eigen::VectorXd theta;
  double cost = 0.0;
};

struct OptimizationTrace {
  std::vector<Iterate> iterates;
  bool converged = false;
  Eigen::VectorXd theta_star;
  double cost_star = 0.0;
  std::string stop_reason;  // "grad_tol", "cost_tol" or "max_iters"
};

// Central-difference gradient. A component whose probes raise an Error is
// reported as failed with a zero entry instead of aborting the whole
// gradient; any other exception propagates.
struct FdGradient {
  Eigen::VectorXd gradient;
  std::vector<std::uint8_t> failed;

  bool any_failed() const;
  bool all_failed() const;
};

FdGradient fd_gradient(const CostFn& cost, const Eigen::VectorXd& theta, double fd_step);

// Gradient descent from theta0. Iterates are clamped to domain when one is
// given (pass an empty vector for unconstrained parameters). Raises
// AllProbesFailed when a whole gradient evaluation fails.
OptimizationTrace descend(const CostFn& cost, const Eigen::VectorXd& theta0,
                          const OptimizerConfig& config,
                          const std::vector<Interval>& domain = {});

// Runs descend from `starts` uniform-random points of the family's domain,
// with per-start seeds derived from config.seed, and returns the best
// trace (ties broken by start index). Starts run concurrently; a start
// that raises an Error is skipped unless every start fails.
OptimizationTrace multi_start(const CostFn& cost, const AnsatzFamily& family, int starts,
                              const OptimizerConfig& config);

}  // namespace pvqa

#endif  // PVQA_OPTIMIZER_HPP_

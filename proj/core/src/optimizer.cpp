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

#include "pvqa/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "pvqa/error.hpp"
#include "pvqa/rng.hpp"
#include "parallel.hpp"

namespace pvqa {

namespace {

void check_config(const OptimizerConfig& config) {
  if (!(config.fd_step > 0.0)) {
    throw Error(ErrorCode::ParamOutOfRange, "fd_step must be positive");
  }
  if (!(config.learning_rate > 0.0)) {
    throw Error(ErrorCode::ParamOutOfRange, "learning_rate must be positive");
  }
  if (config.max_iters < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "max_iters must be at least 1");
  }
  if (config.grad_tol < 0.0 || config.cost_tol < 0.0) {
    throw Error(ErrorCode::ParamOutOfRange, "tolerances must be nonnegative");
  }
}

Eigen::VectorXd clamped(Eigen::VectorXd theta, const std::vector<Interval>& domain) {
  if (domain.empty()) return theta;
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    const Interval& iv = domain[static_cast<std::size_t>(j)];
    theta(j) = std::clamp(theta(j), iv.lo, iv.hi);
  }
  return theta;
}

void finalize(OptimizationTrace& trace) {
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < trace.iterates.size(); ++i) {
    if (trace.iterates[i].cost < best) {
      best = trace.iterates[i].cost;
      best_idx = i;
    }
  }
  trace.theta_star = trace.iterates[best_idx].theta;
  trace.cost_star = best;
}

}  // namespace

bool FdGradient::any_failed() const {
  return std::any_of(failed.begin(), failed.end(), [](std::uint8_t f) { return f != 0; });
}

bool FdGradient::all_failed() const {
  return !failed.empty() &&
         std::all_of(failed.begin(), failed.end(), [](std::uint8_t f) { return f != 0; });
}

FdGradient fd_gradient(const CostFn& cost, const Eigen::VectorXd& theta, double fd_step) {
  if (!(fd_step > 0.0)) {
    throw Error(ErrorCode::ParamOutOfRange, "fd_step must be positive");
  }
  FdGradient out;
  out.gradient = Eigen::VectorXd::Zero(theta.size());
  out.failed.assign(static_cast<std::size_t>(theta.size()), 0);
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    Eigen::VectorXd probe = theta;
    try {
      probe(j) = theta(j) + fd_step;
      const double up = cost(probe);
      probe(j) = theta(j) - fd_step;
      const double down = cost(probe);
      out.gradient(j) = (up - down) / (2.0 * fd_step);
    } catch (const Error&) {
      out.failed[static_cast<std::size_t>(j)] = 1;
      out.gradient(j) = 0.0;
    }
  }
  return out;
}

OptimizationTrace descend(const CostFn& cost, const Eigen::VectorXd& theta0,
                          const OptimizerConfig& config, const std::vector<Interval>& domain) {
  check_config(config);
  if (!domain.empty() && static_cast<Eigen::Index>(domain.size()) != theta0.size()) {
    throw Error(ErrorCode::DimMismatch, "domain size does not match parameter count");
  }

  OptimizationTrace trace;
  Eigen::VectorXd theta = theta0;
  double value = cost(theta);
  trace.iterates.push_back({theta, value});

  for (long long iter = 0; iter < config.max_iters; ++iter) {
    const FdGradient grad = fd_gradient(cost, theta, config.fd_step);
    if (grad.all_failed()) {
      throw Error(ErrorCode::AllProbesFailed,
                  "every finite-difference probe failed at iteration " + std::to_string(iter));
    }
    if (config.grad_tol > 0.0 && grad.gradient.norm() < config.grad_tol) {
      trace.converged = true;
      trace.stop_reason = "grad_tol";
      break;
    }
    theta = clamped(theta - config.learning_rate * grad.gradient, domain);
    const double next = cost(theta);
    trace.iterates.push_back({theta, next});
    if (config.cost_tol > 0.0 && std::abs(next - value) < config.cost_tol) {
      value = next;
      trace.converged = true;
      trace.stop_reason = "cost_tol";
      break;
    }
    value = next;
  }
  if (!trace.converged) trace.stop_reason = "max_iters";
  finalize(trace);
  return trace;
}

OptimizationTrace multi_start(const CostFn& cost, const AnsatzFamily& family, int starts,
                              const OptimizerConfig& config) {
  check_config(config);
  if (starts < 1) {
    throw Error(ErrorCode::ParamOutOfRange, "starts must be at least 1");
  }
  const std::size_t count = static_cast<std::size_t>(starts);
  std::vector<std::optional<OptimizationTrace>> traces(count);
  std::vector<std::optional<Error>> failures(count);

  internal::parallel_for(starts, [&](long long s) {
    CounterRng rng(derive_seed(config.seed, static_cast<std::uint64_t>(s)));
    Eigen::VectorXd theta0(family.param_count());
    for (int j = 0; j < family.param_count(); ++j) {
      const Interval& iv = family.domain[static_cast<std::size_t>(j)];
      theta0(j) = rng.uniform(iv.lo, iv.hi);
    }
    try {
      traces[static_cast<std::size_t>(s)] = descend(cost, theta0, config, family.domain);
    } catch (const Error& e) {
      failures[static_cast<std::size_t>(s)] = e;
    }
  });

  std::optional<OptimizationTrace> best;
  for (const auto& t : traces) {
    if (t && (!best || t->cost_star < best->cost_star)) best = t;
  }
  if (!best) {
    for (const auto& f : failures) {
      if (f) {
        throw Error(f->code(), "every start failed; first failure: " + std::string(f->what()));
      }
    }
    throw Error(ErrorCode::AllProbesFailed, "every start failed");
  }
  return *best;
}

}  // namespace pvqa

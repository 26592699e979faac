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

#ifndef PVQA_TESTS_SUPPORT_HPP_
#define PVQA_TESTS_SUPPORT_HPP_

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "pvqa/density_matrix.hpp"
#include "pvqa/error.hpp"
#include "pvqa/rng.hpp"

// Checks that fn() raises pvqa::Error with the given code. doctest's
// CHECK_THROWS_AS cannot inspect the code, so this returns it for a CHECK.
inline pvqa::ErrorCode thrown_code(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const pvqa::Error& e) {
    return e.code();
  }
  // An out-of-band value; no throw means the comparison below fails loudly.
  return static_cast<pvqa::ErrorCode>(-1);
}

inline pvqa::DensityMatrix random_full_rank(Eigen::Index dim, std::uint64_t seed) {
  pvqa::CounterRng rng(seed);
  return pvqa::random_mixed_state(dim, rng);
}

// Diagonal state with strictly positive random weights.
inline pvqa::DensityMatrix random_diagonal(Eigen::Index dim, std::uint64_t seed) {
  pvqa::CounterRng rng(seed);
  Eigen::VectorXd w(dim);
  double total = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    w(i) = 0.05 + rng.uniform();
    total += w(i);
  }
  return pvqa::DensityMatrix::diagonal(w / total);
}

#endif  // PVQA_TESTS_SUPPORT_HPP_

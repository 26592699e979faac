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

#ifndef PVQA_SRC_PARALLEL_HPP_
#define PVQA_SRC_PARALLEL_HPP_

#include <algorithm>
#include <exception>
#include <thread>
#include <vector>

namespace pvqa::internal {

// Runs fn(i) for every i in [0, count) across worker threads, each thread
// owning one contiguous block. Callers keep determinism by writing only to
// slot i inside fn and reducing the slots serially afterwards. If several
// workers throw, the exception from the lowest block index wins.
template <typename Fn>
void parallel_for(long long count, const Fn& fn) {
  if (count <= 0) return;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const long long workers = std::min<long long>(hw, count);
  if (workers == 1) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (long long w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const long long lo = w * count / workers;
      const long long hi = (w + 1) * count / workers;
      try {
        for (long long i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace pvqa::internal

#endif  // PVQA_SRC_PARALLEL_HPP_

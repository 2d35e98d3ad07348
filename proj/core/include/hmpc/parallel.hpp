// Copyright 2026 The hmpc Authors
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

#ifndef HMPC_PARALLEL_HPP_
#define HMPC_PARALLEL_HPP_

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace hmpc {

/**
 * @brief Runs body(i) for i in [0, count) on up to `jobs` threads.
 *
 * Indices are statically interleaved across workers, so callers that write results to
 * slot i get the same output for any job count. The first exception thrown by any worker
 * is rethrown after all workers join.
 */
inline void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)> & body)
{
  const std::size_t workers =
    std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) {
          body(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto & t : threads) {
    t.join();
  }
  for (auto & e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

}  // namespace hmpc

#endif  // HMPC_PARALLEL_HPP_

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

#ifndef HMPC_SAMPLING_HPP_
#define HMPC_SAMPLING_HPP_

#include <cstdint>
#include <vector>

#include "hmpc/types.hpp"

namespace hmpc {

/// Deterministic sampling of (x, u, alpha) used by the homogeneity checks.
struct SamplingPlan
{
  double alpha_min = 0x1p-10;
  double alpha_max = 1.0;
  int alpha_points = 16;
  int samples = 256;
  /// States and controls are drawn from [-box, box]^{n+m}.
  double box = 1.0;
  std::uint64_t seed = 20200101;
};

/// Log-spaced grid from alpha_min to alpha_max (inclusive).
std::vector<double> alpha_grid(const SamplingPlan & plan);

std::vector<double> log_space(double lo, double hi, int count);
std::vector<double> lin_space(double lo, double hi, int count);

/**
 * @brief Sobol points in [0, 1)^dim with a seeded Cranley-Patterson rotation.
 *
 * Each row is one point. The same (dim, count, seed) always yields the same matrix.
 */
Matrix scrambled_sobol(int dim, int count, std::uint64_t seed);

}  // namespace hmpc

#endif  // HMPC_SAMPLING_HPP_

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

#ifndef HMPC_OCP_HPP_
#define HMPC_OCP_HPP_

/**
 * @file
 * @brief Finite-horizon optimal control by direct single shooting.
 *
 * The control is piecewise constant on `segments` equal intervals of [0, horizon]; the
 * state follows by RK4 with `substeps` steps per interval. The objective
 *   J(u) = int_0^T l(x(s), u(s)) ds
 * is minimized with BFGS on central finite-difference gradients. There is no terminal
 * cost and no terminal constraint.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "hmpc/cost.hpp"
#include "hmpc/optimizer.hpp"
#include "hmpc/systems.hpp"

namespace hmpc {

struct OcpSpec
{
  ControlSystem sys;
  StageCost cost;
  double horizon = 1.0;
  int segments = 16;
  int substeps = 4;
  std::optional<BoxBounds> bounds;

  void validate() const;
  double segment_length() const { return horizon / segments; }
};

struct SolverOptions
{
  int max_iterations = 500;
  double gtol_factor = 1e-7;
  /// Central-difference step max(fd_absolute, fd_relative * |u_i|).
  double fd_absolute = 1e-6;
  double fd_relative = 1e-6;
  double blowup = 1e8;
  std::uint64_t seed = 1;
  /// Worker threads for independent candidates.
  int jobs = 1;
};

struct OcpSolution
{
  ControlSignal u_star;
  Trajectory trajectory;
  double objective = kInfinity;
  double gradient_norm = kInfinity;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
  /// 0 for the supplied initial guess, k >= 1 for the k-th random restart.
  int best_candidate = 0;
};

/**
 * @brief Minimizes the discretized objective from x0.
 *
 * Candidate 0 starts from `init` (zero when absent; resampled when its grid differs).
 * Each of the `restarts` extra candidates starts from controls drawn uniformly from
 * [-c_j, c_j] with c_j = l*(x0)^{1/e_j}, where e_j is the growth exponent of the cost in
 * u_j. The best candidate is returned; ties go to the lower index. Candidates whose
 * trajectory escapes score +inf.
 */
OcpSolution solve(
  const OcpSpec & spec, const Vector & x0, const std::optional<ControlSignal> & init = std::nullopt,
  int restarts = 0, const SolverOptions & options = {});

/// The spec restricted to [0, t] with ceil(t / segment_length) equal segments.
OcpSpec truncated(const OcpSpec & spec, double t);

/// V_t(x0) estimated by solve() on truncated(spec, t); +inf if every candidate escapes.
double value_function(
  const OcpSpec & spec, const Vector & x0, double t, int restarts = 0,
  const SolverOptions & options = {});

/**
 * @brief Infinite-horizon value 2 (1 + sqrt 2) / (k + 1) |x|^{k+1}.
 *
 * Closed form for x' = |x|^k sign(x) + u with l(x, u) = |x|^{2k} + u^2.
 */
double hjb_oracle_1d(double k, double x);

}  // namespace hmpc

#endif  // HMPC_OCP_HPP_

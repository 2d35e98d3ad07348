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

#ifndef HMPC_OPTIMIZER_HPP_
#define HMPC_OPTIMIZER_HPP_

#include <functional>
#include <optional>
#include <string>

#include "hmpc/types.hpp"

namespace hmpc {

struct BoxBounds
{
  Vector lower;
  Vector upper;
};

struct MinimizeOptions
{
  int max_iterations = 500;
  /// Converged when ||g|| <= gtol_factor * (1 + |f|).
  double gtol_factor = 1e-7;
  double armijo = 1e-4;
  int max_backtracks = 60;
};

struct MinimizeResult
{
  Vector x;
  double f = kInfinity;
  Vector gradient;
  double gradient_norm = kInfinity;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
};

/// Objective value; +inf marks infeasible points.
using Objective = std::function<double(const Vector & x)>;

/// Gradient at x given f(x); called right after the objective was evaluated at x.
using GradientFn = std::function<void(const Vector & x, double fx, Vector & g)>;

/**
 * @brief BFGS on the inverse Hessian with Armijo backtracking.
 *
 * With bounds, iterates are projected onto the box and gradient components pushing
 * against an active bound are ignored.
 */
MinimizeResult minimize_bfgs(
  const Objective & f, const GradientFn & grad, Vector x0, const MinimizeOptions & options = {},
  const std::optional<BoxBounds> & bounds = std::nullopt);

}  // namespace hmpc

#endif  // HMPC_OPTIMIZER_HPP_

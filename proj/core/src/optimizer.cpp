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

#include "hmpc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace hmpc {

namespace {

void project(Vector & x, const std::optional<BoxBounds> & bounds)
{
  if (bounds) {
    x = x.cwiseMax(bounds->lower).cwiseMin(bounds->upper);
  }
}

// Gradient with components that would leave the box zeroed.
Vector free_gradient(const Vector & x, const Vector & g, const std::optional<BoxBounds> & bounds)
{
  if (!bounds) {
    return g;
  }
  Vector out = g;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if ((x(i) <= bounds->lower(i) && g(i) > 0.0) || (x(i) >= bounds->upper(i) && g(i) < 0.0)) {
      out(i) = 0.0;
    }
  }
  return out;
}

}  // namespace

MinimizeResult minimize_bfgs(
  const Objective & f, const GradientFn & grad, Vector x0, const MinimizeOptions & options,
  const std::optional<BoxBounds> & bounds)
{
  const Eigen::Index n = x0.size();
  MinimizeResult result;
  project(x0, bounds);
  result.x = std::move(x0);
  result.f = f(result.x);
  result.gradient = Vector::Zero(n);
  if (!std::isfinite(result.f)) {
    result.stop_reason = "infeasible start";
    return result;
  }
  grad(result.x, result.f, result.gradient);

  Matrix H = Matrix::Identity(n, n);
  bool identity = true;
  Vector x_new(n), g_new(n);

  for (;;) {
    const Vector g = free_gradient(result.x, result.gradient, bounds);
    result.gradient_norm = g.norm();
    if (result.gradient_norm <= options.gtol_factor * (1.0 + std::abs(result.f))) {
      result.converged = true;
      result.stop_reason = "gradient tolerance";
      break;
    }
    if (result.iterations >= options.max_iterations) {
      result.stop_reason = "iteration limit";
      break;
    }

    Vector p = -(H * g);
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      H.setIdentity();
      identity = true;
      p = -g;
      slope = -g.squaredNorm();
    }
    // Unscaled steepest descent steps are capped at unit length.
    double step = identity ? std::min(1.0, 1.0 / p.norm()) : 1.0;

    bool accepted = false;
    double f_new = kInfinity;
    for (int k = 0; k < options.max_backtracks; ++k) {
      x_new = result.x + step * p;
      project(x_new, bounds);
      f_new = f(x_new);
      const double decrease = g.dot(x_new - result.x);
      if (std::isfinite(f_new) && f_new <= result.f + options.armijo * decrease &&
          (x_new - result.x).squaredNorm() > 0.0)
      {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (!identity) {
        H.setIdentity();
        identity = true;
        continue;
      }
      result.stop_reason = "line search failed";
      break;
    }

    grad(x_new, f_new, g_new);
    const Vector s = x_new - result.x;
    const Vector y = g_new - result.gradient;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      if (identity) {
        H *= sy / y.squaredNorm();
      }
      const Vector Hy = H * y;
      const double yHy = y.dot(Hy);
      H += ((sy + yHy) / (sy * sy)) * (s * s.transpose()) -
           (Hy * s.transpose() + s * Hy.transpose()) / sy;
      identity = false;
    }

    const double previous = result.f;
    result.x = x_new;
    result.f = f_new;
    result.gradient = g_new;
    ++result.iterations;
    if (previous - f_new <= 1e-15 * std::abs(previous) && s.norm() <= 1e-14 * (1.0 + result.x.norm())) {
      result.gradient_norm = free_gradient(result.x, result.gradient, bounds).norm();
      result.converged =
        result.gradient_norm <= options.gtol_factor * (1.0 + std::abs(result.f));
      result.stop_reason = "no progress";
      break;
    }
  }
  return result;
}

}  // namespace hmpc

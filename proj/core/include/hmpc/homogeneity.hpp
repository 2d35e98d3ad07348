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

#ifndef HMPC_HOMOGENEITY_HPP_
#define HMPC_HOMOGENEITY_HPP_

/**
 * @file
 * @brief Numerical verification of homogeneity and of homogeneous-approximation bounds.
 */

#include <string>
#include <vector>

#include "hmpc/dilation.hpp"
#include "hmpc/sampling.hpp"
#include "hmpc/systems.hpp"

namespace hmpc {

struct HomogeneityReport
{
  /// max over samples of ||f(L x, D u) - alpha^tau L f(x, u)||_inf
  double max_residual = 0.0;
  bool pass = true;
  std::size_t samples = 0;
  /// Sample with the largest tolerance-normalized residual.
  Vector worst_x;
  Vector worst_u;
  double worst_alpha = 0.0;
  std::string diagnostic;
};

struct HomogeneityTolerance
{
  double absolute = 1e-9;
  double relative = 1e-9;
};

HomogeneityReport check_homogeneity(
  const ControlSystem & sys, const DilationStructure & ds, const SamplingPlan & plan = {},
  const HomogeneityTolerance & tol = {});

struct TrajectoryIdentityReport
{
  double max_deviation = 0.0;
  std::size_t points = 0;
  IntegrationStatus status = IntegrationStatus::completed;
  bool escaped() const { return status != IntegrationStatus::completed; }
};

/**
 * @brief Compares x(t; L x0, D u(alpha^tau .)) with L x(alpha^tau t; x0, u) on [0, horizon].
 *
 * Both sides use RK4 with steps that correspond under the time reparameterization.
 */
TrajectoryIdentityReport check_trajectory_identity(
  const ControlSystem & sys, const DilationStructure & ds, const Vector & x0,
  const ControlSignal & u, double alpha, double horizon, double step = 1e-3);

struct ApproximationCertificate
{
  double rho = 0.0;
  /// Smallest M with |R_i(L x, D u)| <= M alpha^{r_i + tau + eta} on all samples.
  double M = 0.0;
  double eta = 0.0;
  /// M minus the largest normalized residual of component i.
  std::vector<double> per_component_margins;
  std::vector<double> per_component_max_ratio;
  std::vector<double> per_component_max_residual;
  /// Slope of log(max ratio) against log(alpha) over the smaller half of the alpha grid.
  double small_alpha_slope = 0.0;
  bool verified = false;
  std::string norm = "euclidean";
};

struct ApproximationOptions
{
  /// Slopes below -trend_tolerance mean the ratio still grows as alpha -> 0.
  double trend_tolerance = 0.1;
};

/**
 * @brief Fits the residual constant M for f = h + R near the origin.
 *
 * States and controls are sampled with ||x|| <= rho and ||u|| <= rho (Euclidean).
 * The certificate is verified when M is finite and the per-alpha maximum does not keep
 * growing towards the smallest sampled alpha.
 */
ApproximationCertificate check_approximation(
  const ControlSystem & full, const ControlSystem & approx, const DilationStructure & ds,
  double rho, double eta, const SamplingPlan & plan = {}, const ApproximationOptions & opts = {});

}  // namespace hmpc

#endif  // HMPC_HOMOGENEITY_HPP_

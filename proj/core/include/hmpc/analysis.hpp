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


#ifndef HMPC_ANALYSIS_HPP_
#define HMPC_ANALYSIS_HPP_

/**
 * @file
 * @brief Empirical growth functions B_K(t) = max_{x in K} V_t(x) / l*(x).
 */

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmpc/cost.hpp"
#include "hmpc/dilation.hpp"
#include "hmpc/ocp.hpp"
#include "hmpc/systems.hpp"

namespace hmpc {

enum class SampleSetKind { box, annulus, points };

/**
 * @brief Compact sampling set K.
 *
 *  - box:     [-radius, radius]^n without the sup-norm ball of radius `exclude`; the
 *             corners are always included.
 *  - annulus: {c1 <= N(x)^d <= c2} for the dilated norm N; c1 = 0 gives a ball.
 *  - points:  the listed states.
 */
struct SampleSet
{
  SampleSetKind kind = SampleSetKind::box;
  double radius = 1.0;
  double exclude = 0.0;
  double c1 = 0.1;
  double c2 = 1.0;
  std::vector<Vector> points;

  std::string describe() const;
};

const char * to_string(SampleSetKind kind);
SampleSetKind parse_sample_set_kind(const std::string & text);

/// `count` deterministic states from K; the annulus needs a dilation structure.
std::vector<Vector> sample_set(
  const SampleSet & set, Eigen::Index n, int count, std::uint64_t seed,
  const std::optional<DilationStructure> & ds = std::nullopt);

struct GrowthOptions
{
  std::vector<double> t_grid;
  int samples = 16;
  int restarts = 8;
  /// OCP segments for every t (the horizon is t).
  int segments = 32;
  int substeps = 4;
  SolverOptions solver;
  /// Relative slack before a decrease of B in t counts as a monotonicity violation.
  double monotone_tolerance = 1e-3;
  /// Trend slopes below -trend_threshold flag growth as l* -> 0.
  double trend_threshold = 0.05;
};

struct GrowthTable
{
  std::vector<double> t_grid;
  std::vector<double> b_values;
  std::vector<Vector> argmax_states;
  /// True when every solve at this t reported convergence.
  std::vector<bool> converged;
  std::string set_descriptor;
  int samples_per_t = 0;
  std::vector<Vector> states;
  std::vector<double> ell_star;
  /// values[t][i] = V_t(states[i]); ratios[t][i] = values / max(l*, 1e-10).
  std::vector<std::vector<double>> values;
  std::vector<std::vector<double>> ratios;
  std::vector<std::vector<bool>> point_converged;
  int monotone_violations = 0;
  /// Least-squares slope of log ratio against log l* at the largest t.
  double trend_slope = 0.0;
  /// Ratio grows as l* -> 0 (slope below -threshold) or some ratio is infinite.
  bool unbounded_trend = false;
};

GrowthTable estimate_growth(
  const ControlSystem & sys, const StageCost & cost, const SampleSet & set,
  const GrowthOptions & options);

/// (1 - alpha^d)^{-1} B(t_grid[t_star_index]).
double check_bounded_extension(const GrowthTable & table, double alpha, double d, int t_star_index);

struct Remark2Report
{
  std::vector<double> t_grid;
  std::vector<double> x_samples;
  /// ratios[t][i] = V_t(x_i) / (t l*(x_i)).
  std::vector<std::vector<double>> ratios;
  double max_ratio = 0.0;
  double argmax_t = 0.0;
  double argmax_x = 0.0;
  bool pass = false;
};

/**
 * @brief max V_t(x) / (t l*(x)) over a (t, x) grid for a scalar system.
 *
 * Passes iff every ratio is finite and below 1.
 */
Remark2Report check_remark2_condition(
  const ControlSystem & sys, const StageCost & cost, const std::vector<double> & t_grid,
  const std::vector<double> & x_samples, const GrowthOptions & options);

}  // namespace hmpc

#endif  // HMPC_ANALYSIS_HPP_

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

#ifndef HMPC_MPC_HPP_
#define HMPC_MPC_HPP_

/**
 * @file
 * @brief Receding-horizon loop without terminal ingredients.
 *
 * Each step measures x_k, solves the horizon-T problem, applies the first delta of the
 * optimal control to the plant and shifts time by delta.
 */

#include <optional>
#include <string>
#include <vector>

#include "hmpc/cost.hpp"
#include "hmpc/ocp.hpp"
#include "hmpc/systems.hpp"

namespace hmpc {

enum class WarmStart { shift_and_hold, zero, previous };
enum class Verdict { converged, stalled, diverged, inconclusive };
enum class ConvergenceNorm { dilated, euclidean };

const char * to_string(WarmStart w);
const char * to_string(Verdict v);
const char * to_string(ConvergenceNorm n);
WarmStart parse_warm_start(const std::string & text);
ConvergenceNorm parse_convergence_norm(const std::string & text);

struct MpcConfig
{
  double horizon = 3.0;
  double delta = 0.25;
  int steps = 40;
  /// OCP segments on [0, horizon]; delta must be a multiple of horizon / segments.
  int segments = 12;
  int substeps = 4;
  /// Plant RK4 steps per OCP segment.
  int plant_substeps = 16;
  WarmStart warm_start = WarmStart::shift_and_hold;
  int restarts = 8;
  double convergence_radius = 1e-2;
  /// Dilated norm of the cost (or system) dilation; Euclidean when neither has one.
  ConvergenceNorm convergence_norm = ConvergenceNorm::dilated;
  double stall_tolerance = 1e-6;
  int stall_steps = 20;
  SolverOptions solver;

  void validate() const;
  double segment_length() const { return horizon / segments; }
  /// Number of OCP segments covered by one shift.
  int shift_segments() const;
};

struct MpcStep
{
  int index = 0;
  double time = 0.0;
  Vector state;
  /// u*(0) of this step's solution.
  Vector control;
  double value = kInfinity;
  bool ocp_converged = false;
  double gradient_norm = kInfinity;
  int iterations = 0;
  Verdict verdict_so_far = Verdict::inconclusive;
};

struct ClosedLoopResult
{
  std::vector<MpcStep> steps;
  /// Control applied on [t_k, t_k + delta) for each executed shift.
  std::vector<ControlSignal> applied;
  /// Optimal control of every solve, in step order.
  std::vector<ControlSignal> solutions;
  /// Initial guess handed to every solve, in step order.
  std::vector<ControlSignal> initial_guesses;
  Verdict verdict = Verdict::inconclusive;
  int decrease_violations = 0;
  /// Largest V_T(x_{k+1}) - V_T(x_k) over the counted violations (0 if none).
  double max_violation = 0.0;
  /// max_k ||x_k - x_0|| (Euclidean).
  double max_displacement = 0.0;

  const Vector & final_state() const { return steps.back().state; }
};

/// Initial guess for the next solve from the previous optimal control.
ControlSignal next_initial_guess(const ControlSignal & previous, const MpcConfig & cfg);

/// Distance to the origin used by the convergence test.
double convergence_measure(
  const ControlSystem & sys, const StageCost & cost, const MpcConfig & cfg, const Vector & x);

ClosedLoopResult run_closed_loop(
  const ControlSystem & sys, const StageCost & cost, const MpcConfig & cfg, const Vector & x0);

struct HorizonSweepRow
{
  double horizon = 0.0;
  Verdict verdict = Verdict::inconclusive;
  double initial_value = kInfinity;
  int decrease_violations = 0;
  int steps_run = 0;
  Vector final_state;
};

struct HorizonSweep
{
  std::vector<HorizonSweepRow> rows;
  /// Smallest tested horizon whose run converged.
  std::optional<double> smallest_converged;
};

/**
 * @brief run_closed_loop for each horizon.
 *
 * The template's segment length is kept, so each horizon uses horizon / segment_length
 * segments; horizons must be multiples of it. Rows run on `jobs` threads.
 */
HorizonSweep horizon_sweep(
  const ControlSystem & sys, const StageCost & cost, const MpcConfig & cfg_template,
  const Vector & x0, const std::vector<double> & horizons, int jobs = 1);

}  // namespace hmpc

#endif  // HMPC_MPC_HPP_

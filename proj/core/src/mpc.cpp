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


#include "hmpc/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hmpc/parallel.hpp"

namespace hmpc {

const char * to_string(WarmStart w)
{
  switch (w) {
    case WarmStart::shift_and_hold:
      return "shift_and_hold";
    case WarmStart::zero:
      return "zero";
    case WarmStart::previous:
      return "previous";
  }
  return "?";
}

const char * to_string(Verdict v)
{
  switch (v) {
    case Verdict::converged:
      return "converged";
    case Verdict::stalled:
      return "stalled";
    case Verdict::diverged:
      return "diverged";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

const char * to_string(ConvergenceNorm n)
{
  return n == ConvergenceNorm::dilated ? "dilated" : "euclidean";
}

WarmStart parse_warm_start(const std::string & text)
{
  if (text == "shift_and_hold") {
    return WarmStart::shift_and_hold;
  }
  if (text == "zero") {
    return WarmStart::zero;
  }
  if (text == "previous") {
    return WarmStart::previous;
  }
  throw std::invalid_argument("unknown warm start '" + text + "'");
}

ConvergenceNorm parse_convergence_norm(const std::string & text)
{
  if (text == "dilated") {
    return ConvergenceNorm::dilated;
  }
  if (text == "euclidean") {
    return ConvergenceNorm::euclidean;
  }
  throw std::invalid_argument("unknown convergence norm '" + text + "'");
}

int MpcConfig::shift_segments() const
{
  return static_cast<int>(std::lround(delta / segment_length()));
}

void MpcConfig::validate() const
{
  if (!(delta > 0.0) || !(delta < horizon) || !std::isfinite(horizon)) {
    throw std::invalid_argument("MpcConfig: need 0 < delta < horizon");
  }
  if (steps < 0 || segments < 1 || substeps < 1 || plant_substeps < 1) {
    throw std::invalid_argument("MpcConfig: steps >= 0 and positive discretization required");
  }
  const double ratio = delta / segment_length();
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio) || std::round(ratio) < 1) {
    throw std::invalid_argument("MpcConfig: delta must be a multiple of horizon / segments");
  }
  if (restarts < 0 || !(convergence_radius > 0.0) || !(stall_tolerance >= 0.0) || stall_steps < 1) {
    throw std::invalid_argument("MpcConfig: invalid restarts or thresholds");
  }
}

ControlSignal next_initial_guess(const ControlSignal & previous, const MpcConfig & cfg)
{
  const std::size_t n = static_cast<std::size_t>(cfg.segments);
  const std::size_t shift = static_cast<std::size_t>(cfg.shift_segments());
  const auto & values = previous.values();
  switch (cfg.warm_start) {
    case WarmStart::zero:
      return ControlSignal::zero(previous.m(), cfg.horizon, cfg.segments);
    case WarmStart::previous:
      return previous;
    case WarmStart::shift_and_hold:
      break;
  }
  std::vector<Vector> next;
  next.reserve(n);
  for (std::size_t k = shift; k < values.size(); ++k) {
    next.push_back(values[k]);
  }
  while (next.size() < n) {
    next.push_back(values.back());
  }
  return ControlSignal::uniform(cfg.horizon, next);
}

double convergence_measure(
  const ControlSystem & sys, const StageCost & cost, const MpcConfig & cfg, const Vector & x)
{
  if (cfg.convergence_norm == ConvergenceNorm::dilated) {
    if (cost.dilation()) {
      return dilated_norm(*cost.dilation(), x);
    }
    if (sys.declared_dilation()) {
      return dilated_norm(*sys.declared_dilation(), x);
    }
  }
  return x.norm();
}

ClosedLoopResult run_closed_loop(
  const ControlSystem & sys, const StageCost & cost, const MpcConfig & cfg, const Vector & x0)
{
  cfg.validate();
  require_dimension(x0, sys.n(), "run_closed_loop initial state");
  if (!x0.allFinite()) {
    throw std::invalid_argument("run_closed_loop: initial state must be finite");
  }

  OcpSpec spec{sys, cost, cfg.horizon, cfg.segments, cfg.substeps, std::nullopt};
  const int shift = cfg.shift_segments();
  const double plant_step = cfg.segment_length() / cfg.plant_substeps;

  ClosedLoopResult result;
  Vector x = x0;
  ControlSignal guess = ControlSignal::zero(sys.m(), cfg.horizon, cfg.segments);

  for (int k = 0;; ++k) {
    SolverOptions options = cfg.solver;
    options.seed = cfg.solver.seed + static_cast<std::uint64_t>(k);
    OcpSolution sol = solve(spec, x, guess, cfg.restarts, options);

    MpcStep row;
    row.index = k;
    row.time = k * cfg.delta;
    row.state = x;
    row.control = sol.u_star.values().front();
    row.value = sol.objective;
    row.ocp_converged = sol.converged;
    row.gradient_norm = sol.gradient_norm;
    row.iterations = sol.iterations;
    result.max_displacement = std::max(result.max_displacement, (x - x0).norm());

    if (!result.steps.empty()) {
      const double previous = result.steps.back().value;
      if (std::isfinite(previous) && previous > 0.0 && !(row.value < previous)) {
        ++result.decrease_violations;
        result.max_violation = std::max(result.max_violation, row.value - previous);
      }
    }

    const bool converged = convergence_measure(sys, cost, cfg, x) <= cfg.convergence_radius;
    if (converged) {
      row.verdict_so_far = Verdict::converged;
    } else if (k >= cfg.stall_steps && result.max_displacement <= cfg.stall_tolerance) {
      row.verdict_so_far = Verdict::stalled;
    }
    result.initial_guesses.push_back(guess);
    result.solutions.push_back(sol.u_star);
    result.steps.push_back(row);

    if (converged) {
      result.verdict = Verdict::converged;
      return result;
    }
    if (k >= cfg.steps) {
      break;
    }

    const auto & values = sol.u_star.values();
    ControlSignal applied = ControlSignal::uniform(
      cfg.delta, std::vector<Vector>(values.begin(), values.begin() + shift));
    IntegrateOptions iopts;
    iopts.blowup = cfg.solver.blowup;
    const Trajectory plant = integrate(sys, x, applied, cfg.delta, plant_step, iopts);
    result.applied.push_back(std::move(applied));
    if (plant.escaped()) {
      result.verdict = Verdict::diverged;
      return result;
    }
    x = plant.final_state();
    guess = next_initial_guess(sol.u_star, cfg);
  }

  result.verdict = result.steps.back().verdict_so_far == Verdict::stalled ? Verdict::stalled
                                                                           : Verdict::inconclusive;
  return result;
}

HorizonSweep horizon_sweep(
  const ControlSystem & sys, const StageCost & cost, const MpcConfig & cfg_template,
  const Vector & x0, const std::vector<double> & horizons, int jobs)
{
  const double length = cfg_template.segment_length();
  std::vector<MpcConfig> configs;
  for (double T : horizons) {
    if (!(T > cfg_template.delta)) {
      throw std::invalid_argument("horizon_sweep: every horizon must exceed delta");
    }
    MpcConfig cfg = cfg_template;
    cfg.horizon = T;
    cfg.segments = static_cast<int>(std::lround(T / length));
    if (cfg.segments < 1 || std::abs(cfg.segments * length - T) > 1e-9 * T) {
      throw std::invalid_argument("horizon_sweep: horizons must be multiples of the segment length");
    }
    cfg.validate();
    configs.push_back(cfg);
  }

  HorizonSweep sweep;
  sweep.rows.resize(configs.size());
  parallel_for(configs.size(), jobs, [&](std::size_t i) {
    const ClosedLoopResult r = run_closed_loop(sys, cost, configs[i], x0);
    HorizonSweepRow & row = sweep.rows[i];
    row.horizon = configs[i].horizon;
    row.verdict = r.verdict;
    row.initial_value = r.steps.front().value;
    row.decrease_violations = r.decrease_violations;
    row.steps_run = static_cast<int>(r.steps.size()) - 1;
    row.final_state = r.final_state();
  });
  for (const auto & row : sweep.rows) {
    if (row.verdict == Verdict::converged &&
        (!sweep.smallest_converged || row.horizon < *sweep.smallest_converged))
    {
      sweep.smallest_converged = row.horizon;
    }
  }
  return sweep;
}

}  // namespace hmpc

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

#ifndef HMPC_SYSTEMS_HPP_
#define HMPC_SYSTEMS_HPP_

/**
 * @file
 * @brief Control systems x' = f(x, u), piecewise-constant controls and RK4 integration.
 */

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hmpc/dilation.hpp"
#include "hmpc/types.hpp"

namespace hmpc {

using Params = std::map<std::string, double>;

class ControlSystem
{
public:
  using Field = std::function<void(const Vector & x, const Vector & u, Vector & dx)>;

  /**
   * @brief Wraps a vector field.
   *
   * Throws std::invalid_argument unless f(0, 0) = 0, and DimensionError if the declared
   * dilation does not match (n, m).
   */
  ControlSystem(
    std::string label, Eigen::Index n, Eigen::Index m, Field field,
    std::optional<DilationStructure> declared = std::nullopt, Params params = {},
    double deadband = 0.0);

  Vector eval(const Vector & x, const Vector & u) const;

  /// Unchecked evaluation into a preallocated buffer; used in integration loops.
  void eval_into(const Vector & x, const Vector & u, Vector & dx) const { field_(x, u, dx); }

  Eigen::Index n() const { return n_; }
  Eigen::Index m() const { return m_; }
  const std::string & label() const { return label_; }
  const std::optional<DilationStructure> & declared_dilation() const { return declared_; }
  const Params & params() const { return params_; }

  /// States with sup-norm below this and zero control are frozen by the integrator.
  double deadband() const { return deadband_; }

private:
  std::string label_;
  Eigen::Index n_;
  Eigen::Index m_;
  Field field_;
  std::optional<DilationStructure> declared_;
  Params params_;
  double deadband_;
};

/// Named built-in systems and their parameters.
struct SystemParams
{
  Params values;
  /// Only used by "linear".
  Matrix A;
  Matrix B;
};

/**
 * @brief Built-in systems.
 *
 *  - driftless3:   x' = (u1, x3 u1, u2); declared (tau=0, r=(1,2,1), s=(1,1)).
 *  - scalar_power: x' = |x|^k sign(x) + u; params k > 0, s > 0 (default 1);
 *                  declared r = s/k, tau = s - r.
 *  - robot:        x' = (cos(x3) u1, sin(x3) u1, u2); no declared dilation.
 *  - robot_approx: same field as driftless3.
 *  - damped1d:     x' = -|x| (x + u); declared (tau=1, r=s=1).
 *  - linear:       x' = A x + B u; declared (tau=0, r=s=1).
 */
ControlSystem builtin(const std::string & name, const SystemParams & params = {});

std::vector<std::string> builtin_names();

/// Piecewise-constant control: values[i] is active on [grid[i], grid[i+1]).
class ControlSignal
{
public:
  ControlSignal(std::vector<double> grid, std::vector<Vector> values);

  static ControlSignal constant(const Vector & u, double horizon, int segments = 1);
  static ControlSignal uniform(double horizon, const std::vector<Vector> & values);
  static ControlSignal zero(Eigen::Index m, double horizon, int segments);

  /// Value at t; times past the last breakpoint hold the last value.
  const Vector & value_at(double t) const;

  const std::vector<double> & grid() const { return grid_; }
  const std::vector<Vector> & values() const { return values_; }
  std::size_t segments() const { return values_.size(); }
  Eigen::Index m() const { return values_.front().size(); }
  double end_time() const { return grid_.back(); }

  /// Signal t -> D_alpha u(alpha^tau t), defined on [0, end_time / alpha^tau].
  ControlSignal dilated(const DilationStructure & ds, double alpha) const;

private:
  std::vector<double> grid_;
  std::vector<Vector> values_;
};

enum class IntegrationStatus { completed, escaped, non_finite };

const char * to_string(IntegrationStatus status);

struct Trajectory
{
  std::vector<double> times;
  std::vector<Vector> states;
  /// Control active from times[k]; the last entry repeats the final control.
  std::vector<Vector> controls;
  /// Cumulative running cost at times[k]; zero when no cost was supplied.
  std::vector<double> running_cost;
  IntegrationStatus status = IntegrationStatus::completed;

  bool escaped() const { return status != IntegrationStatus::completed; }
  const Vector & final_state() const { return states.back(); }
  double final_cost() const { return running_cost.back(); }
};

using RunningCost = std::function<double(const Vector & x, const Vector & u)>;

struct IntegrateOptions
{
  double blowup = 1e8;
  RunningCost cost;
};

/**
 * @brief Classical fixed-step RK4 in a single control segment.
 *
 * The running cost is integrated with the same stages as the state.
 */
class Rk4Stepper
{
public:
  explicit Rk4Stepper(const ControlSystem & sys);

  template<class CostFn>
  double step(Vector & x, const Vector & u, double h, const CostFn & cost)
  {
    if (frozen(x, u)) {
      return h * cost(x, u);
    }
    sys_.eval_into(x, u, k1_);
    const double c1 = cost(x, u);
    tmp_ = x + 0.5 * h * k1_;
    sys_.eval_into(tmp_, u, k2_);
    const double c2 = cost(tmp_, u);
    tmp_ = x + 0.5 * h * k2_;
    sys_.eval_into(tmp_, u, k3_);
    const double c3 = cost(tmp_, u);
    tmp_ = x + h * k3_;
    sys_.eval_into(tmp_, u, k4_);
    const double c4 = cost(tmp_, u);
    x += (h / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    return (h / 6.0) * (c1 + 2.0 * c2 + 2.0 * c3 + c4);
  }

  void step(Vector & x, const Vector & u, double h)
  {
    step(x, u, h, [](const Vector &, const Vector &) { return 0.0; });
  }

private:
  bool frozen(const Vector & x, const Vector & u) const
  {
    return sys_.deadband() > 0.0 && x.lpNorm<Eigen::Infinity>() < sys_.deadband() &&
           u.isZero(0.0);
  }

  const ControlSystem & sys_;
  Vector k1_, k2_, k3_, k4_, tmp_;
};

/// Substeps used for a segment of length `length` with nominal step `step`.
int substeps_for(double length, double step);

/**
 * @brief Integrates x' = f(x, u(t)) on [0, horizon] with RK4.
 *
 * Steps are aligned to the control breakpoints. Integration stops early with status
 * escaped when the state norm exceeds options.blowup, and non_finite on NaN.
 */
Trajectory integrate(
  const ControlSystem & sys, const Vector & x0, const ControlSignal & u, double horizon,
  double step, const IntegrateOptions & options = {});

/**
 * @brief Four-stage piecewise-constant control steering driftless3 to the origin.
 *
 * Each stage lasts stage_duration: (1) if x2 != 0 and |x3| < 0.1, set x3 to 1 with u2;
 * (2) u2 = 0, cancel x2 with u1; (3) u1 = 0, cancel x3 with u2; (4) u2 = 0, cancel x1
 * with u1.
 */
ControlSignal steer_driftless_to_origin(const Vector & x0, double stage_duration);

}  // namespace hmpc

#endif  // HMPC_SYSTEMS_HPP_

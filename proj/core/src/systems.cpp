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

#include "hmpc/systems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace hmpc {

ControlSystem::ControlSystem(
  std::string label, Eigen::Index n, Eigen::Index m, Field field,
  std::optional<DilationStructure> declared, Params params, double deadband)
: label_(std::move(label)),
  n_(n),
  m_(m),
  field_(std::move(field)),
  declared_(std::move(declared)),
  params_(std::move(params)),
  deadband_(deadband)
{
  if (n_ < 1 || m_ < 1) {
    throw std::invalid_argument("ControlSystem: dimensions must be positive");
  }
  if (!field_) {
    throw std::invalid_argument("ControlSystem: empty vector field");
  }
  if (declared_ && (declared_->n() != n_ || declared_->m() != m_)) {
    throw DimensionError("ControlSystem: declared dilation does not match (n, m)");
  }
  const Vector f0 = eval(Vector::Zero(n_), Vector::Zero(m_));
  if (!f0.allFinite() || f0.lpNorm<Eigen::Infinity>() > 1e-12) {
    throw std::invalid_argument("ControlSystem '" + label_ + "': origin is not an equilibrium");
  }
}

Vector ControlSystem::eval(const Vector & x, const Vector & u) const
{
  require_dimension(x, n_, "ControlSystem::eval state");
  require_dimension(u, m_, "ControlSystem::eval control");
  Vector dx(n_);
  field_(x, u, dx);
  return dx;
}

namespace {

double param_or(const Params & p, const std::string & key, double fallback)
{
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

Vector vec(std::initializer_list<double> v)
{
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) {
    out(i++) = x;
  }
  return out;
}

double sign(double x)
{
  return static_cast<double>((x > 0.0) - (x < 0.0));
}

void driftless_field(const Vector & x, const Vector & u, Vector & dx)
{
  dx(0) = u(0);
  dx(1) = x(2) * u(0);
  dx(2) = u(1);
}

}  // namespace

ControlSystem builtin(const std::string & name, const SystemParams & params)
{
  if (name == "driftless3" || name == "robot_approx") {
    return ControlSystem(
      name, 3, 2, driftless_field, DilationStructure(vec({1, 2, 1}), vec({1, 1}), 0.0),
      params.values);
  }
  if (name == "robot") {
    return ControlSystem(
      name, 3, 2,
      [](const Vector & x, const Vector & u, Vector & dx) {
        dx(0) = std::cos(x(2)) * u(0);
        dx(1) = std::sin(x(2)) * u(0);
        dx(2) = u(1);
      },
      std::nullopt, params.values);
  }
  if (name == "scalar_power") {
    const double k = param_or(params.values, "k", 1.0);
    const double s = param_or(params.values, "s", 1.0);
    if (!(k > 0.0) || !std::isfinite(k)) {
      throw std::invalid_argument("scalar_power: k must be positive");
    }
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw std::invalid_argument("scalar_power: s must be positive");
    }
    // tau + r = r k and tau + r = s.
    const double r = s / k;
    const double tau = s - r;
    Params p = params.values;
    p["k"] = k;
    p["s"] = s;
    return ControlSystem(
      name, 1, 1,
      [k](const Vector & x, const Vector & u, Vector & dx) {
        dx(0) = std::pow(std::abs(x(0)), k) * sign(x(0)) + u(0);
      },
      DilationStructure::with_admissible_exponent(vec({r}), vec({s}), tau), std::move(p),
      k < 1.0 ? 1e-12 : 0.0);
  }
  if (name == "damped1d") {
    return ControlSystem(
      name, 1, 1,
      [](const Vector & x, const Vector & u, Vector & dx) {
        dx(0) = -std::abs(x(0)) * (x(0) + u(0));
      },
      DilationStructure(vec({1}), vec({1}), 1.0), params.values);
  }
  if (name == "linear") {
    const Matrix & A = params.A;
    const Matrix & B = params.B;
    if (A.rows() < 1 || A.rows() != A.cols() || B.rows() != A.rows() || B.cols() < 1) {
      throw DimensionError("linear: need square A (n x n) and B (n x m)");
    }
    const Eigen::Index n = A.rows();
    const Eigen::Index m = B.cols();
    return ControlSystem(
      name, n, m,
      [A, B](const Vector & x, const Vector & u, Vector & dx) { dx.noalias() = A * x + B * u; },
      DilationStructure(Vector::Ones(n), Vector::Ones(m), 0.0), params.values);
  }
  throw std::invalid_argument("unknown built-in system '" + name + "'");
}

std::vector<std::string> builtin_names()
{
  return {"driftless3", "scalar_power", "robot", "robot_approx", "damped1d", "linear"};
}

ControlSignal::ControlSignal(std::vector<double> grid, std::vector<Vector> values)
: grid_(std::move(grid)), values_(std::move(values))
{
  if (values_.empty() || grid_.size() != values_.size() + 1) {
    throw std::invalid_argument("ControlSignal: need N >= 1 values and N + 1 grid points");
  }
  for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
    if (!(grid_[i + 1] > grid_[i])) {
      throw std::invalid_argument("ControlSignal: grid must be strictly increasing");
    }
  }
  const Eigen::Index m = values_.front().size();
  for (const auto & v : values_) {
    if (v.size() != m) {
      throw DimensionError("ControlSignal: values have inconsistent dimension");
    }
    if (!v.allFinite()) {
      throw std::invalid_argument("ControlSignal: values must be finite");
    }
  }
}

ControlSignal ControlSignal::constant(const Vector & u, double horizon, int segments)
{
  return uniform(horizon, std::vector<Vector>(static_cast<std::size_t>(segments), u));
}

ControlSignal ControlSignal::uniform(double horizon, const std::vector<Vector> & values)
{
  if (!(horizon > 0.0) || values.empty()) {
    throw std::invalid_argument("ControlSignal::uniform: need horizon > 0 and values");
  }
  const std::size_t n = values.size();
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    grid[i] = horizon * static_cast<double>(i) / static_cast<double>(n);
  }
  grid.back() = horizon;
  return ControlSignal(std::move(grid), values);
}

ControlSignal ControlSignal::zero(Eigen::Index m, double horizon, int segments)
{
  return constant(Vector::Zero(m), horizon, segments);
}

const Vector & ControlSignal::value_at(double t) const
{
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  if (it == grid_.begin()) {
    return values_.front();
  }
  const auto idx = static_cast<std::size_t>(std::distance(grid_.begin(), it)) - 1;
  return values_[std::min(idx, values_.size() - 1)];
}

ControlSignal ControlSignal::dilated(const DilationStructure & ds, double alpha) const
{
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("ControlSignal::dilated: alpha must be positive");
  }
  const double time_scale = std::pow(alpha, ds.tau());
  std::vector<double> grid(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    grid[i] = grid_[i] / time_scale;
  }
  std::vector<Vector> values;
  values.reserve(values_.size());
  for (const auto & v : values_) {
    values.push_back(dilate_control(ds, alpha, v));
  }
  return ControlSignal(std::move(grid), std::move(values));
}

const char * to_string(IntegrationStatus status)
{
  switch (status) {
    case IntegrationStatus::completed:
      return "completed";
    case IntegrationStatus::escaped:
      return "escaped";
    case IntegrationStatus::non_finite:
      return "non_finite";
  }
  return "unknown";
}

Rk4Stepper::Rk4Stepper(const ControlSystem & sys)
: sys_(sys),
  k1_(sys.n()),
  k2_(sys.n()),
  k3_(sys.n()),
  k4_(sys.n()),
  tmp_(sys.n())
{
}

int substeps_for(double length, double step)
{
  return std::max(1, static_cast<int>(std::ceil(length / step - 1e-9)));
}

Trajectory integrate(
  const ControlSystem & sys, const Vector & x0, const ControlSignal & u, double horizon,
  double step, const IntegrateOptions & options)
{
  require_dimension(x0, sys.n(), "integrate initial state");
  if (u.m() != sys.m()) {
    throw DimensionError("integrate: control dimension does not match system");
  }
  if (!(step > 0.0) || !(horizon >= 0.0)) {
    throw std::invalid_argument("integrate: need step > 0 and horizon >= 0");
  }
  if (u.end_time() < horizon * (1.0 - 1e-12)) {
    throw std::invalid_argument("integrate: control signal does not cover the horizon");
  }

  const auto cost = [&](const Vector & x, const Vector & v) {
    return options.cost ? options.cost(x, v) : 0.0;
  };

  Trajectory traj;
  Vector x = x0;
  double t = 0.0;
  double accumulated = 0.0;
  traj.times.push_back(t);
  traj.states.push_back(x);
  traj.controls.push_back(u.values().front());
  traj.running_cost.push_back(0.0);

  Rk4Stepper stepper(sys);
  const auto & grid = u.grid();
  for (std::size_t seg = 0; seg < u.segments() && grid[seg] < horizon; ++seg) {
    const double seg_end = std::min(grid[seg + 1], horizon);
    const double length = seg_end - grid[seg];
    if (length <= 0.0) {
      continue;
    }
    const Vector & control = u.values()[seg];
    const int substeps = substeps_for(length, step);
    const double h = length / substeps;
    traj.controls.back() = control;
    for (int k = 0; k < substeps; ++k) {
      accumulated += stepper.step(x, control, h, cost);
      t = (k + 1 == substeps) ? seg_end : grid[seg] + (k + 1) * h;
      if (!x.allFinite() || !std::isfinite(accumulated)) {
        traj.status = IntegrationStatus::non_finite;
        return traj;
      }
      traj.times.push_back(t);
      traj.states.push_back(x);
      traj.controls.push_back(control);
      traj.running_cost.push_back(accumulated);
      if (x.norm() > options.blowup) {
        traj.status = IntegrationStatus::escaped;
        return traj;
      }
    }
  }
  return traj;
}

ControlSignal steer_driftless_to_origin(const Vector & x0, double stage_duration)
{
  require_dimension(x0, 3, "steer_driftless_to_origin");
  if (!x0.allFinite()) {
    throw std::invalid_argument("steer_driftless_to_origin: initial state must be finite");
  }
  if (!(stage_duration > 0.0)) {
    throw std::invalid_argument("steer_driftless_to_origin: stage duration must be positive");
  }
  const double D = stage_duration;
  double x1 = x0(0);
  const double x2 = x0(1);
  double x3 = x0(2);
  std::vector<Vector> values(4, Vector::Zero(2));

  // Stage 1: x2 can only be moved while x3 != 0.
  if (x2 != 0.0 && std::abs(x3) < 0.1) {
    values[0](1) = (1.0 - x3) / D;
    x3 = 1.0;
  }
  // Stage 2: u2 = 0 keeps x3 constant, so x2' = x3 u1 is constant.
  if (x2 != 0.0) {
    values[1](0) = -x2 / (x3 * D);
    x1 += values[1](0) * D;
  }
  // Stage 3: u1 = 0 keeps x1 and x2 fixed.
  values[2](1) = -x3 / D;
  // Stage 4: x2 = x3 = 0, so u1 only moves x1.
  values[3](0) = -x1 / D;

  return ControlSignal({0.0, D, 2.0 * D, 3.0 * D, 4.0 * D}, std::move(values));
}

}  // namespace hmpc

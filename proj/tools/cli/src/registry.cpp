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


#include "hmpc_cli/registry.hpp"

#include <cmath>

namespace hmpc::cli {

namespace {

DilationConfig driftless_weights(double s, double tau)
{
  return DilationConfig{{1.0, 2.0, 1.0}, {s, s}, tau, std::nullopt};
}

ScenarioConfig base(std::string id, std::string description, std::string system)
{
  ScenarioConfig c;
  c.id = std::move(id);
  c.description = std::move(description);
  c.system.name = std::move(system);
  return c;
}

ScenarioConfig scalar(std::string id, std::string description, double k)
{
  ScenarioConfig c = base(std::move(id), std::move(description), "scalar_power");
  c.system.params["k"] = k;
  // l = |x|^{2k} + u^2
  c.cost.kind = "weighted";
  c.cost.p_x = {2.0 * k};
  c.cost.p_u = {2.0};
  c.ocp.x0 = {1.0};
  c.ocp.restarts = 8;
  return c;
}

ScenarioConfig driftless_mpc(std::string id, std::string description, std::string system)
{
  ScenarioConfig c = base(std::move(id), std::move(description), std::move(system));
  c.mpc.delta = 0.25;
  c.mpc.convergence_norm = "euclidean";
  c.ocp.substeps = 4;
  return c;
}

std::vector<ScenarioConfig> make_registry()
{
  std::vector<ScenarioConfig> out;

  out.push_back(base("driftless-default", "driftless system with its declared weights", "driftless3"));
  {
    auto c = base("driftless-tau-pos", "driftless system, positive degree", "driftless3");
    c.dilation = driftless_weights(1.5, 0.5);
    out.push_back(c);
  }
  {
    auto c = base("driftless-tau-neg", "driftless system, negative degree", "driftless3");
    c.dilation = driftless_weights(0.5, -0.5);
    out.push_back(c);
  }
  {
    auto c = base("robot-claimed-homogeneous", "unicycle checked against driftless weights", "robot");
    c.dilation = driftless_weights(1.0, 0.0);
    out.push_back(c);
  }
  {
    auto c = base("robot-approx-certificate", "unicycle against its homogeneous approximation", "robot");
    c.dilation = driftless_weights(1.0, 0.0);
    c.homogeneity.approx = "robot_approx";
    c.homogeneity.rho = 1.0;
    c.homogeneity.eta = 2.0;
    out.push_back(c);
  }
  {
    auto c = driftless_mpc("driftless-quadratic-stall", "quadratic cost, local solver, stall state", "driftless3");
    c.cost.kind = "quadratic";
    c.cost.Q = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    c.cost.R = {{1, 0}, {0, 1}};
    c.ocp.x0 = {0.0, 0.2, 0.0};
    c.ocp.horizon = 2.0;
    c.ocp.segments = 8;
    c.ocp.restarts = 0;
    c.mpc.warm_start = "zero";
    c.mpc.steps = 20;
    c.mpc.horizons = {1.0, 2.0, 4.0};
    out.push_back(c);
  }
  {
    auto c = driftless_mpc("driftless-homogeneous", "homogeneous quartic cost from the stall state", "driftless3");
    c.ocp.x0 = {0.0, 0.2, 0.0};
    c.ocp.horizon = 4.0;
    c.ocp.segments = 16;
    c.ocp.restarts = 8;
    c.mpc.steps = 120;
    c.mpc.horizons = {2.0, 4.0};
    out.push_back(c);
  }
  {
    auto c = driftless_mpc("robot-homogeneous", "unicycle with the homogeneous cost of its approximation", "robot");
    c.dilation = driftless_weights(1.0, 0.0);
    c.ocp.x0 = {0.5, 0.5, 0.5};
    c.ocp.horizon = 3.0;
    c.ocp.segments = 12;
    c.ocp.restarts = 8;
    c.mpc.steps = 120;
    c.mpc.horizons = {1.0, 2.0, 3.0};
    out.push_back(c);
  }
  {
    auto c = scalar("scalar-k1-value", "x' = x + u, l = x^2 + u^2", 1.0);
    c.ocp.horizon = 8.0;
    c.ocp.segments = 64;
    c.ocp.restarts = 0;
    out.push_back(c);
  }
  {
    auto c = scalar("scalar-k05-value", "x' = sqrt|x| sign x + u, l = |x| + u^2", 0.5);
    c.ocp.horizon = 3.0;
    c.ocp.segments = 64;
    out.push_back(c);
  }
  {
    auto c = scalar("scalar-k1-sweep", "x' = x + u under receding horizon", 1.0);
    c.ocp.horizon = 1.0;
    c.ocp.segments = 20;
    c.ocp.restarts = 0;
    c.mpc.delta = 0.1;
    c.mpc.steps = 60;
    c.mpc.horizons = {0.2, 0.5, 1.0, 2.0};
    out.push_back(c);
  }
  {
    auto c = scalar("scalar-k1-growth", "growth bound for k = 1", 1.0);
    c.analysis.set = "box";
    c.analysis.radius = 1.0;
    c.analysis.exclude = 0.01;
    c.analysis.t_grid = {1.0, 2.0, 4.0, 8.0};
    c.analysis.samples = 8;
    c.ocp.segments = 64;
    out.push_back(c);
  }
  for (int R : {1, 2, 4}) {
    auto c = scalar(
      "scalar-k05-growth-r" + std::to_string(R), "growth bound for k = 0.5 on [-R, R] minus (-R/10, R/10)", 0.5);
    c.analysis.set = "box";
    c.analysis.radius = R;
    // Near 0 the problem is a long-horizon one at |x| = R, out of reach for single shooting.
    c.analysis.exclude = 0.1 * R;
    const double scale = std::sqrt(static_cast<double>(R));
    c.analysis.t_grid = {scale, 2.0 * scale, 3.0 * scale};
    c.analysis.samples = 8;
    c.ocp.segments = 32;
    out.push_back(c);
  }
  {
    auto c = scalar("scalar-k2-nearzero", "growth of V/l* near the origin for k = 2", 2.0);
    c.analysis.set = "points";
    c.analysis.points = {{0.1}, {0.01}};
    c.analysis.t_grid = {400.0};
    c.ocp.segments = 128;
    out.push_back(c);
  }
  {
    auto c = base("damped1d-remark2", "x' = -|x| (x + u), l = |x| + |u|", "damped1d");
    c.cost.kind = "weighted";
    c.cost.p_x = {1.0};
    c.cost.p_u = {1.0};
    c.ocp.segments = 32;
    c.ocp.restarts = 4;
    c.analysis.t_grid = {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
    c.analysis.remark2_x = {-2.0, -1.0, -0.5, 0.5, 1.0, 2.0};
    out.push_back(c);
  }
  return out;
}

}  // namespace

const std::vector<ScenarioConfig> & scenario_registry()
{
  static const std::vector<ScenarioConfig> registry = make_registry();
  return registry;
}

const ScenarioConfig & find_scenario(const std::string & id)
{
  for (const auto & c : scenario_registry()) {
    if (c.id == id) {
      return c;
    }
  }
  throw ConfigError("unknown scenario '" + id + "'");
}

}  // namespace hmpc::cli

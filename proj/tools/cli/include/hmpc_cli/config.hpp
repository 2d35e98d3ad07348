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


#ifndef HMPC_CLI_CONFIG_HPP_
#define HMPC_CLI_CONFIG_HPP_

/**
 * @file
 * @brief Scenario configuration and its INI text form.
 *
 * Sections: [scenario], [system], [dilation], [cost], [ocp], [mpc], [homogeneity],
 * [analysis]. Vectors are comma separated; matrix rows are separated by ';'. Numbers are
 * written in shortest round-trip form, so parse(to_ini(c)) == c.
 */

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <hmpc/analysis.hpp>
#include <hmpc/cost.hpp>
#include <hmpc/dilation.hpp>
#include <hmpc/homogeneity.hpp>
#include <hmpc/mpc.hpp>
#include <hmpc/ocp.hpp>
#include <hmpc/sampling.hpp>
#include <hmpc/systems.hpp>

namespace hmpc::cli {

using Rows = std::vector<std::vector<double>>;

/// Malformed or inconsistent configuration; maps to the usage exit code.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct SystemConfig
{
  std::string name = "driftless3";
  std::map<std::string, double> params;
  Rows A;
  Rows B;
  bool operator==(const SystemConfig &) const = default;
};

struct DilationConfig
{
  std::vector<double> r;
  std::vector<double> s;
  double tau = 0.0;
  std::optional<double> d;
  bool operator==(const DilationConfig &) const = default;
};

struct CostConfig
{
  /// homogeneous | weighted | quadratic
  std::string kind = "homogeneous";
  std::vector<double> q_x, p_x, q_u, p_u;
  Rows Q, R;
  bool operator==(const CostConfig &) const = default;
};

struct OcpConfig
{
  std::vector<double> x0;
  double horizon = 1.0;
  int segments = 16;
  int substeps = 4;
  int restarts = 0;
  int max_iterations = 500;
  bool operator==(const OcpConfig &) const = default;
};

struct MpcSettings
{
  double delta = 0.25;
  int steps = 40;
  std::string warm_start = "shift_and_hold";
  double convergence_radius = 1e-2;
  std::string convergence_norm = "dilated";
  double stall_tolerance = 1e-6;
  int stall_steps = 20;
  int plant_substeps = 16;
  /// Horizons for sweeps; empty means only ocp.horizon.
  std::vector<double> horizons;
  bool operator==(const MpcSettings &) const = default;
};

struct HomogeneityConfig
{
  double alpha_min = 0x1p-10;
  double alpha_max = 1.0;
  int alpha_points = 16;
  int samples = 256;
  double box = 1.0;
  double tolerance = 1e-9;
  /// Homogeneous approximation to certify against; empty checks the system itself.
  std::string approx;
  double rho = 1.0;
  double eta = 2.0;
  bool operator==(const HomogeneityConfig &) const = default;
};

struct AnalysisConfig
{
  /// box | annulus | points
  std::string set = "box";
  double radius = 1.0;
  double exclude = 0.0;
  double c1 = 0.1;
  double c2 = 1.0;
  Rows points;
  std::vector<double> t_grid;
  int samples = 16;
  /// Sampled states for the V_t / (t l*) check; non-empty switches estimate-growth to it.
  std::vector<double> remark2_x;
  bool operator==(const AnalysisConfig &) const = default;
};

struct ScenarioConfig
{
  std::string id;
  std::string description;
  std::uint64_t seed = 1;
  std::string output_dir;
  SystemConfig system;
  std::optional<DilationConfig> dilation;
  CostConfig cost;
  OcpConfig ocp;
  MpcSettings mpc;
  HomogeneityConfig homogeneity;
  AnalysisConfig analysis;
  bool operator==(const ScenarioConfig &) const = default;
};

std::string to_ini(const ScenarioConfig & cfg);
ScenarioConfig parse_ini(const std::string & text);
ScenarioConfig load_config(const std::string & path);

/// FNV-1a 64 of to_ini(cfg), as 16 hex digits.
std::string config_hash(const ScenarioConfig & cfg);

std::string format_shortest(double v);
std::vector<double> parse_list(const std::string & text);
Rows parse_rows(const std::string & text);

ControlSystem build_system(const ScenarioConfig & cfg);
/// The [dilation] section, else the system's declared dilation.
std::optional<DilationStructure> build_dilation(const ScenarioConfig & cfg);
StageCost build_cost(const ScenarioConfig & cfg);
Vector initial_state(const ScenarioConfig & cfg);
SolverOptions build_solver_options(const ScenarioConfig & cfg, int jobs = 1);
OcpSpec build_ocp_spec(const ScenarioConfig & cfg);
MpcConfig build_mpc_config(const ScenarioConfig & cfg, int jobs = 1);
SamplingPlan build_sampling_plan(const ScenarioConfig & cfg);
SampleSet build_sample_set(const ScenarioConfig & cfg);
GrowthOptions build_growth_options(const ScenarioConfig & cfg, int jobs = 1);

}  // namespace hmpc::cli

#endif  // HMPC_CLI_CONFIG_HPP_

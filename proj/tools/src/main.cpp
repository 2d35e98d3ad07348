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


#include <CLI11.hpp>
#include <fmt/format.h>

#include <exception>
#include <iostream>
#include <optional>

#include "hmpc_cli/commands.hpp"
#include "hmpc_cli/registry.hpp"

namespace {

using namespace hmpc::cli;

hmpc::cli::ScenarioConfig resolve(const std::string & config, const std::string & scenario)
{
  if (!config.empty() && !scenario.empty()) {
    throw ConfigError("pass either --config or --scenario, not both");
  }
  if (!config.empty()) {
    return load_config(config);
  }
  if (!scenario.empty()) {
    return find_scenario(scenario);
  }
  throw ConfigError("--config or --scenario is required");
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Homogeneous MPC experiments"};
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);

  std::string config;
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  int jobs = 1;

  auto add_common = [&](CLI::App * sub) {
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--seed", seed, "Override the scenario seed");
    sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto add_config = [&](CLI::App * sub) {
    sub->add_option("--config", config, "Scenario INI file");
    sub->add_option("--scenario", scenario, "Built-in scenario id");
    add_common(sub);
  };

  auto * homogeneity = app.add_subcommand("check-homogeneity", "Verify dilation identities");
  auto * solve = app.add_subcommand("solve-ocp", "Solve one finite-horizon problem");
  auto * mpc = app.add_subcommand("run-mpc", "Run the receding-horizon loop");
  auto * growth = app.add_subcommand("estimate-growth", "Estimate the growth bound B(t)");
  for (auto * sub : {homogeneity, solve, mpc, growth}) {
    add_config(sub);
  }
  auto * reproduce_cmd = app.add_subcommand("reproduce", "Run a named bundle");
  std::string bundle;
  reproduce_cmd->add_option("name", bundle, "Bundle name")->required();
  add_common(reproduce_cmd);
  auto * list = app.add_subcommand("list", "List built-in scenarios and bundles");
  auto * show = app.add_subcommand("show-config", "Print a scenario as INI");
  show->add_option("--config", config, "Scenario INI file");
  show->add_option("--scenario", scenario, "Built-in scenario id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CommandOptions opts;
  opts.out_dir = out;
  opts.jobs = jobs;
  opts.seed = seed;

  try {
    if (*list) {
      for (const auto & s : scenario_registry()) {
        fmt::print("scenario {}  {}\n", s.id, s.description);
      }
      for (const auto & b : bundle_names()) {
        fmt::print("bundle {}\n", b);
      }
      return kExitOk;
    }
    if (*reproduce_cmd) {
      const BundleResult r = reproduce(bundle, opts);
      for (const auto & row : r.rows) {
        fmt::print(
          "{} {:<28} {:<40} observed={:.6g} reference={:.6g} {}\n", row.criterion, row.scenario,
          row.metric, row.observed, row.reference, row.pass ? "PASS" : "FAIL");
      }
      return r.all_pass() ? kExitOk : kExitFailed;
    }
    const ScenarioConfig cfg = resolve(config, scenario);
    if (*show) {
      fmt::print("{}", to_ini(cfg));
      return kExitOk;
    }
    if (*homogeneity) {
      return cmd_check_homogeneity(cfg, opts);
    }
    if (*solve) {
      return cmd_solve_ocp(cfg, opts);
    }
    if (*mpc) {
      return cmd_run_mpc(cfg, opts);
    }
    return cmd_estimate_growth(cfg, opts);
  } catch (const ConfigError & e) {
    std::cerr << "hmpc: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument & e) {
    std::cerr << "hmpc: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception & e) {
    std::cerr << "hmpc: " << e.what() << '\n';
    return kExitFailed;
  }
}

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


#ifndef HMPC_CLI_COMMANDS_HPP_
#define HMPC_CLI_COMMANDS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hmpc_cli/config.hpp"

namespace hmpc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitStalled = 2;
inline constexpr int kExitDiverged = 3;
inline constexpr int kExitInconclusive = 4;
inline constexpr int kExitUsage = 64;

const char * tool_version();

struct CommandOptions
{
  /// Output directory; empty means the config's output_dir, else "out/<id>".
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
};

int exit_code(Verdict v);

/// Config with the --seed override applied.
ScenarioConfig effective_config(ScenarioConfig cfg, const CommandOptions & opts);
std::string output_dir(const ScenarioConfig & cfg, const CommandOptions & opts);

/// homogeneity_report.json and manifest.json; 0 iff the check passes.
int cmd_check_homogeneity(const ScenarioConfig & cfg, const CommandOptions & opts);

/// trajectory.csv and manifest.json; 0 iff the objective is finite.
int cmd_solve_ocp(const ScenarioConfig & cfg, const CommandOptions & opts);

/// closed_loop.csv and manifest.json; exit code from the verdict.
int cmd_run_mpc(const ScenarioConfig & cfg, const CommandOptions & opts);

/// growth.csv and scatter.csv, or ratio_field.csv when analysis.remark2_x is set.
int cmd_estimate_growth(const ScenarioConfig & cfg, const CommandOptions & opts);

struct CriterionRow
{
  std::string criterion;
  std::string scenario;
  std::string metric;
  double observed = 0.0;
  double reference = 0.0;
  bool pass = false;
};

struct BundleResult
{
  std::string name;
  std::string directory;
  std::vector<CriterionRow> rows;
  bool all_pass() const;
};

std::vector<std::string> bundle_names();

/// Runs a named bundle into <out>/<name>/ and writes summary.csv there.
BundleResult reproduce(const std::string & name, const CommandOptions & opts);

/// 0 iff every row of the bundle passes; unknown names are a usage error.
int cmd_reproduce(const std::string & name, const CommandOptions & opts);

}  // namespace hmpc::cli

#endif  // HMPC_CLI_COMMANDS_HPP_

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


#include "hmpc/csv.hpp"

#include <fmt/format.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hmpc {

namespace {

void header_vector(std::ostream & os, const char * prefix, Eigen::Index n)
{
  for (Eigen::Index i = 0; i < n; ++i) {
    os << ',' << prefix << (i + 1);
  }
}

void row_vector(std::ostream & os, const Vector & v)
{
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    os << ',' << format_number(v(i));
  }
}

}  // namespace

std::string format_number(double v)
{
  if (std::isnan(v)) {
    return "nan";
  }
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  return fmt::format("{:.17g}", v);
}

void write_trajectory_csv(std::ostream & os, const Trajectory & traj)
{
  const Eigen::Index n = traj.states.front().size();
  const Eigen::Index m = traj.controls.front().size();
  os << 't';
  header_vector(os, "x", n);
  header_vector(os, "u", m);
  os << ",cost\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << format_number(traj.times[k]);
    row_vector(os, traj.states[k]);
    row_vector(os, traj.controls[k]);
    os << ',' << format_number(traj.running_cost[k]) << '\n';
  }
}

void write_closed_loop_csv(std::ostream & os, const ClosedLoopResult & result)
{
  const Eigen::Index n = result.steps.front().state.size();
  const Eigen::Index m = result.steps.front().control.size();
  os << "step,t";
  header_vector(os, "x", n);
  header_vector(os, "u", m);
  os << ",V_T,ocp_converged,verdict\n";
  for (const auto & s : result.steps) {
    os << s.index << ',' << format_number(s.time);
    row_vector(os, s.state);
    row_vector(os, s.control);
    os << ',' << format_number(s.value) << ',' << (s.ocp_converged ? 1 : 0) << ','
       << to_string(s.verdict_so_far) << '\n';
  }
}

void write_growth_csv(std::ostream & os, const GrowthTable & table)
{
  const Eigen::Index n = table.states.front().size();
  os << "t,B";
  header_vector(os, "argmax_x", n);
  os << ",converged\n";
  for (std::size_t k = 0; k < table.t_grid.size(); ++k) {
    os << format_number(table.t_grid[k]) << ',' << format_number(table.b_values[k]);
    row_vector(os, table.argmax_states[k]);
    os << ',' << (table.converged[k] ? 1 : 0) << '\n';
  }
}

void write_scatter_csv(std::ostream & os, const GrowthTable & table)
{
  const Eigen::Index n = table.states.front().size();
  os << 't';
  header_vector(os, "x", n);
  os << ",ell_star,V_t,ratio\n";
  for (std::size_t k = 0; k < table.t_grid.size(); ++k) {
    for (std::size_t i = 0; i < table.states.size(); ++i) {
      os << format_number(table.t_grid[k]);
      row_vector(os, table.states[i]);
      os << ',' << format_number(table.ell_star[i]) << ',' << format_number(table.values[k][i])
         << ',' << format_number(table.ratios[k][i]) << '\n';
    }
  }
}

void write_ratio_field_csv(std::ostream & os, const Remark2Report & report)
{
  os << "t,x,ratio\n";
  for (std::size_t k = 0; k < report.t_grid.size(); ++k) {
    for (std::size_t i = 0; i < report.x_samples.size(); ++i) {
      os << format_number(report.t_grid[k]) << ',' << format_number(report.x_samples[i]) << ','
         << format_number(report.ratios[k][i]) << '\n';
    }
  }
}

void write_file(const std::string & path, const std::string & content)
{
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::filesystem::create_directories(p.parent_path());
  }
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw std::runtime_error("failed to write '" + path + "'");
  }
}

}  // namespace hmpc

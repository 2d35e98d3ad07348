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


#include "hmpc_cli/commands.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include <hmpc/csv.hpp>
#include <hmpc/parallel.hpp>

#include "hmpc_cli/registry.hpp"

#ifndef HMPC_VERSION
#define HMPC_VERSION "0.0.0"
#endif

namespace hmpc::cli {

using nlohmann::json;

namespace {

json number(double v)
{
  return std::isfinite(v) ? json(v) : json(format_number(v));
}

json vector_json(const Vector & v)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(number(v(i)));
  }
  return out;
}

std::string path_in(const std::string & dir, const std::string & file)
{
  return (std::filesystem::path(dir) / file).string();
}

void write_json(const std::string & path, const json & j)
{
  write_file(path, j.dump(2) + "\n");
}

json manifest(const ScenarioConfig & cfg, const std::string & command)
{
  json m;
  m["tool"] = "hmpc";
  m["version"] = tool_version();
  m["command"] = command;
  m["scenario"] = cfg.id;
  m["config_hash"] = config_hash(cfg);
  m["seed"] = cfg.seed;
  m["config"] = to_ini(cfg);
  return m;
}

template<class Fn>
std::string render(Fn && fn)
{
  std::ostringstream os;
  fn(os);
  return os.str();
}

std::string tag(double v)
{
  std::string s = format_shortest(v);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

// --- reusable pieces shared by commands and bundles ---

struct HomogeneityOutcome
{
  bool pass = false;
  json report;
  std::optional<ApproximationCertificate> certificate;
};

json homogeneity_json(const HomogeneityReport & r)
{
  json j;
  j["pass"] = r.pass;
  j["max_residual"] = number(r.max_residual);
  j["samples"] = r.samples;
  j["worst_alpha"] = number(r.worst_alpha);
  j["worst_x"] = vector_json(r.worst_x);
  j["worst_u"] = vector_json(r.worst_u);
  j["diagnostic"] = r.diagnostic;
  return j;
}

HomogeneityOutcome run_homogeneity(const ScenarioConfig & cfg)
{
  const ControlSystem sys = build_system(cfg);
  const auto ds = build_dilation(cfg);
  if (!ds) {
    throw ConfigError("check-homogeneity: no dilation given and the system declares none");
  }
  const SamplingPlan plan = build_sampling_plan(cfg);
  const HomogeneityTolerance tol{cfg.homogeneity.tolerance, cfg.homogeneity.tolerance};
  HomogeneityOutcome out;
  if (cfg.homogeneity.approx.empty()) {
    const HomogeneityReport r = check_homogeneity(sys, *ds, plan, tol);
    out.pass = r.pass;
    out.report["system"] = homogeneity_json(r);
    return out;
  }
  ScenarioConfig approx_cfg = cfg;
  approx_cfg.system = SystemConfig{cfg.homogeneity.approx, {}, {}, {}};
  const ControlSystem approx = build_system(approx_cfg);
  const HomogeneityReport r = check_homogeneity(approx, *ds, plan, tol);
  const ApproximationCertificate cert =
    check_approximation(sys, approx, *ds, cfg.homogeneity.rho, cfg.homogeneity.eta, plan);
  json c;
  c["rho"] = number(cert.rho);
  c["eta"] = number(cert.eta);
  c["M"] = number(cert.M);
  c["norm"] = cert.norm;
  c["small_alpha_slope"] = number(cert.small_alpha_slope);
  c["verified"] = cert.verified;
  c["per_component_max_ratio"] = json::array();
  c["per_component_max_residual"] = json::array();
  c["per_component_margins"] = json::array();
  for (std::size_t i = 0; i < cert.per_component_max_ratio.size(); ++i) {
    c["per_component_max_ratio"].push_back(number(cert.per_component_max_ratio[i]));
    c["per_component_max_residual"].push_back(number(cert.per_component_max_residual[i]));
    c["per_component_margins"].push_back(number(cert.per_component_margins[i]));
  }
  out.report["approximation"] = homogeneity_json(r);
  out.report["certificate"] = c;
  out.pass = r.pass && cert.verified;
  out.certificate = cert;
  return out;
}

json closed_loop_json(const ClosedLoopResult & r)
{
  json j;
  j["verdict"] = to_string(r.verdict);
  j["decrease_violations"] = r.decrease_violations;
  j["max_violation"] = number(r.max_violation);
  j["max_displacement"] = number(r.max_displacement);
  j["rows"] = r.steps.size();
  json steps = json::array();
  for (const auto & s : r.steps) {
    steps.push_back(
      {{"step", s.index}, {"iterations", s.iterations}, {"gradient_norm", number(s.gradient_norm)},
       {"converged", s.ocp_converged}});
  }
  j["solver"] = steps;
  return j;
}

std::vector<double> sweep_horizons(const ScenarioConfig & cfg)
{
  return cfg.mpc.horizons.empty() ? std::vector<double>{cfg.ocp.horizon} : cfg.mpc.horizons;
}

ScenarioConfig with_horizon(ScenarioConfig cfg, double T)
{
  const double length = cfg.ocp.horizon / cfg.ocp.segments;
  const long segments = std::lround(T / length);
  if (segments < 1 || std::abs(segments * length - T) > 1e-9 * T) {
    throw ConfigError("horizon " + format_shortest(T) + " is not a multiple of the segment length");
  }
  cfg.ocp.horizon = T;
  cfg.ocp.segments = static_cast<int>(segments);
  return cfg;
}

struct SweepRun
{
  double horizon;
  ClosedLoopResult result;
};

std::vector<SweepRun> run_sweep(const ScenarioConfig & cfg, const std::string & dir, int jobs)
{
  const auto horizons = sweep_horizons(cfg);
  std::vector<ScenarioConfig> configs;
  for (double T : horizons) {
    configs.push_back(with_horizon(cfg, T));
  }
  std::vector<SweepRun> runs(configs.size());
  parallel_for(configs.size(), jobs, [&](std::size_t i) {
    runs[i] = SweepRun{
      configs[i].ocp.horizon,
      run_closed_loop(
        build_system(configs[i]), build_cost(configs[i]), build_mpc_config(configs[i]),
        initial_state(configs[i]))};
  });
  std::ostringstream table;
  table << "T,verdict,V_T_x0,decrease_violations,steps,final_norm\n";
  for (const auto & run : runs) {
    const auto & r = run.result;
    write_file(
      path_in(dir, "closed_loop_T" + tag(run.horizon) + ".csv"),
      render([&](std::ostream & os) { write_closed_loop_csv(os, r); }));
    table << format_number(run.horizon) << ',' << to_string(r.verdict) << ','
          << format_number(r.steps.front().value) << ',' << r.decrease_violations << ','
          << r.steps.size() - 1 << ',' << format_number(r.final_state().norm()) << '\n';
  }
  write_file(path_in(dir, "horizon_sweep.csv"), table.str());
  return runs;
}

GrowthTable run_growth(const ScenarioConfig & cfg, const std::string & dir, int jobs)
{
  if (cfg.analysis.t_grid.empty()) {
    throw ConfigError("analysis.t_grid is empty");
  }
  const GrowthTable table = estimate_growth(
    build_system(cfg), build_cost(cfg), build_sample_set(cfg), build_growth_options(cfg, jobs));
  write_file(path_in(dir, "growth.csv"), render([&](std::ostream & os) { write_growth_csv(os, table); }));
  write_file(path_in(dir, "scatter.csv"), render([&](std::ostream & os) { write_scatter_csv(os, table); }));
  return table;
}

Remark2Report run_remark2(const ScenarioConfig & cfg, const std::string & dir, int jobs)
{
  if (cfg.analysis.t_grid.empty()) {
    throw ConfigError("analysis.t_grid is empty");
  }
  const Remark2Report report = check_remark2_condition(
    build_system(cfg), build_cost(cfg), cfg.analysis.t_grid, cfg.analysis.remark2_x,
    build_growth_options(cfg, jobs));
  write_file(
    path_in(dir, "ratio_field.csv"), render([&](std::ostream & os) { write_ratio_field_csv(os, report); }));
  return report;
}

OcpSolution run_solve(const ScenarioConfig & cfg, const std::string & dir, int jobs)
{
  const OcpSolution sol = solve(
    build_ocp_spec(cfg), initial_state(cfg), std::nullopt, cfg.ocp.restarts,
    build_solver_options(cfg, jobs));
  write_file(
    path_in(dir, "trajectory.csv"), render([&](std::ostream & os) { write_trajectory_csv(os, sol.trajectory); }));
  return sol;
}

double relative_error(double observed, double reference)
{
  return std::abs(observed - reference) / std::abs(reference);
}

// --- bundles ---

void bundle_example1(BundleResult & b, const CommandOptions & opts)
{
  {
    const ScenarioConfig cfg = effective_config(find_scenario("driftless-quadratic-stall"), opts);
    const std::string dir = path_in(b.directory, cfg.id);
    for (double T : sweep_horizons(cfg)) {
      const ScenarioConfig c = with_horizon(cfg, T);
      const OcpSolution sol = solve(
        build_ocp_spec(c), initial_state(c), std::nullopt, 0, build_solver_options(c, opts.jobs));
      b.rows.push_back(
        {"AC4", cfg.id, "gradient_norm_at_zero T=" + format_shortest(T), sol.gradient_norm, 1e-8,
         sol.gradient_norm <= 1e-8 && sol.u_star.values().front().isZero(0.0)});
    }
    for (const auto & run : run_sweep(cfg, dir, opts.jobs)) {
      const auto & r = run.result;
      b.rows.push_back(
        {"AC4", cfg.id, "max_displacement T=" + format_shortest(run.horizon), r.max_displacement,
         cfg.mpc.stall_tolerance,
         r.verdict == Verdict::stalled && r.max_displacement <= cfg.mpc.stall_tolerance &&
           r.steps.size() >= 21});
    }
  }
  {
    const ScenarioConfig cfg = effective_config(find_scenario("driftless-homogeneous"), opts);
    const auto runs = run_sweep(cfg, path_in(b.directory, cfg.id), opts.jobs);
    const auto & r = runs.back().result;
    const double shifts = std::max<double>(1.0, static_cast<double>(r.steps.size() - 1));
    b.rows.push_back(
      {"AC5", cfg.id, "final_norm T=" + format_shortest(runs.back().horizon), r.final_state().norm(),
       cfg.mpc.convergence_radius,
       r.verdict == Verdict::converged && r.final_state().norm() <= cfg.mpc.convergence_radius});
    b.rows.push_back(
      {"AC5", cfg.id, "decrease_violation_fraction", r.decrease_violations / shifts, 0.05,
       r.decrease_violations / shifts <= 0.05});
  }
}

void bundle_robot(BundleResult & b, const CommandOptions & opts)
{
  const ScenarioConfig cfg = effective_config(find_scenario("robot-homogeneous"), opts);
  const auto runs = run_sweep(cfg, path_in(b.directory, cfg.id), opts.jobs);
  const auto it = std::find_if(runs.begin(), runs.end(), [](const SweepRun & r) {
    return r.result.verdict == Verdict::converged;
  });
  const bool any = it != runs.end();
  const auto & r = any ? it->result : runs.back().result;
  const double shifts = std::max<double>(1.0, static_cast<double>(r.steps.size() - 1));
  b.rows.push_back(
    {"AC5", cfg.id,
     "final_norm T=" + format_shortest(any ? it->horizon : runs.back().horizon),
     r.final_state().norm(), cfg.mpc.convergence_radius, any});
  b.rows.push_back(
    {"AC5", cfg.id, "decrease_violation_fraction", r.decrease_violations / shifts, 0.05,
     any && r.decrease_violations / shifts <= 0.05});
}

void bundle_example2(BundleResult & b, const CommandOptions & opts)
{
  const double bound_k1 = 1.0 + std::sqrt(2.0);
  {
    const ScenarioConfig cfg = effective_config(find_scenario("scalar-k1-value"), opts);
    const OcpSolution sol = run_solve(cfg, path_in(b.directory, cfg.id), opts.jobs);
    b.rows.push_back(
      {"AC3", cfg.id, "V_8(1) k=1", sol.objective, bound_k1,
       relative_error(sol.objective, bound_k1) <= 0.02});
  }
  {
    const ScenarioConfig cfg = effective_config(find_scenario("scalar-k05-value"), opts);
    const OcpSolution sol = run_solve(cfg, path_in(b.directory, cfg.id), opts.jobs);
    const double ref = hjb_oracle_1d(0.5, 1.0);
    b.rows.push_back(
      {"AC3", cfg.id, "V_t(1) k=0.5", sol.objective, ref, relative_error(sol.objective, ref) <= 0.05});
  }
  {
    const ScenarioConfig cfg = effective_config(find_scenario("scalar-k1-growth"), opts);
    const GrowthTable t = run_growth(cfg, path_in(b.directory, cfg.id), opts.jobs);
    b.rows.push_back(
      {"AC7", cfg.id, "B k=1", t.b_values.back(), bound_k1,
       relative_error(t.b_values.back(), bound_k1) <= 0.05});
  }
  for (int R : {1, 2, 4}) {
    const ScenarioConfig cfg =
      effective_config(find_scenario("scalar-k05-growth-r" + std::to_string(R)), opts);
    const GrowthTable t = run_growth(cfg, path_in(b.directory, cfg.id), opts.jobs);
    const double ref = 2.0 * (1.0 + std::sqrt(2.0)) / 1.5 * std::sqrt(static_cast<double>(R));
    b.rows.push_back(
      {"AC7", cfg.id, "B k=0.5 R=" + std::to_string(R), t.b_values.back(), ref,
       std::isfinite(t.b_values.back()) && relative_error(t.b_values.back(), ref) <= 0.10});
  }
  {
    const ScenarioConfig cfg = effective_config(find_scenario("scalar-k2-nearzero"), opts);
    const GrowthTable t = run_growth(cfg, path_in(b.directory, cfg.id), opts.jobs);
    const auto & ratios = t.ratios.back();
    const double growth = ratios[1] / ratios[0];
    b.rows.push_back(
      {"AC7", cfg.id, "ratio growth per decade k=2", growth, 10.0,
       std::isfinite(growth) && relative_error(growth, 10.0) <= 0.30});
    b.rows.push_back({"AC7", cfg.id, "trend slope k=2", t.trend_slope, 0.0, t.unbounded_trend});
  }
}

void bundle_certificates(BundleResult & b, const CommandOptions & opts)
{
  {
    const ScenarioConfig cfg = effective_config(find_scenario("robot-approx-certificate"), opts);
    const std::string dir = path_in(b.directory, cfg.id);
    const HomogeneityOutcome out = run_homogeneity(cfg);
    const auto & cert = *out.certificate;
    write_json(path_in(dir, "homogeneity_report.json"), out.report);
    std::ostringstream os;
    os << "component,max_ratio,max_residual,margin\n";
    for (std::size_t i = 0; i < cert.per_component_max_ratio.size(); ++i) {
      os << i + 1 << ',' << format_number(cert.per_component_max_ratio[i]) << ','
         << format_number(cert.per_component_max_residual[i]) << ','
         << format_number(cert.per_component_margins[i]) << '\n';
    }
    write_file(path_in(dir, "certificate.csv"), os.str());
    const double rho = cfg.homogeneity.rho;
    const double bound = std::max(std::pow(rho, 3) / 2.0, std::pow(rho, 4) / 6.0);
    b.rows.push_back({"AC6", cfg.id, "M", cert.M, bound, out.pass && cert.M <= bound});
    b.rows.push_back(
      {"AC6", cfg.id, "max_residual component 3", cert.per_component_max_residual[2], 0.0,
       cert.per_component_max_residual[2] == 0.0});
  }
  {
    const ScenarioConfig cfg = effective_config(find_scenario("robot-claimed-homogeneous"), opts);
    const HomogeneityOutcome out = run_homogeneity(cfg);
    write_json(path_in(path_in(b.directory, cfg.id), "homogeneity_report.json"), out.report);
    b.rows.push_back(
      {"AC6", cfg.id, "robot rejected as homogeneous",
       out.report["system"]["max_residual"].is_number()
         ? out.report["system"]["max_residual"].get<double>()
         : kInfinity,
       cfg.homogeneity.tolerance, !out.pass});
  }
}

void bundle_remark2(BundleResult & b, const CommandOptions & opts)
{
  const ScenarioConfig cfg = effective_config(find_scenario("damped1d-remark2"), opts);
  const Remark2Report r = run_remark2(cfg, path_in(b.directory, cfg.id), opts.jobs);
  b.rows.push_back({"AC8", cfg.id, "max V_t/(t l*)", r.max_ratio, 1.0, r.pass});
}

}  // namespace

const char * tool_version()
{
  return HMPC_VERSION;
}

int exit_code(Verdict v)
{
  switch (v) {
    case Verdict::converged:
      return kExitOk;
    case Verdict::stalled:
      return kExitStalled;
    case Verdict::diverged:
      return kExitDiverged;
    case Verdict::inconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

ScenarioConfig effective_config(ScenarioConfig cfg, const CommandOptions & opts)
{
  if (opts.seed) {
    cfg.seed = *opts.seed;
  }
  return cfg;
}

std::string output_dir(const ScenarioConfig & cfg, const CommandOptions & opts)
{
  if (!opts.out_dir.empty()) {
    return opts.out_dir;
  }
  if (!cfg.output_dir.empty()) {
    return cfg.output_dir;
  }
  return path_in("out", cfg.id);
}

int cmd_check_homogeneity(const ScenarioConfig & config, const CommandOptions & opts)
{
  const ScenarioConfig cfg = effective_config(config, opts);
  const std::string dir = output_dir(cfg, opts);
  const HomogeneityOutcome out = run_homogeneity(cfg);
  write_json(path_in(dir, "homogeneity_report.json"), out.report);
  json m = manifest(cfg, "check-homogeneity");
  m["result"] = out.report;
  write_json(path_in(dir, "manifest.json"), m);
  return out.pass ? kExitOk : kExitFailed;
}

int cmd_solve_ocp(const ScenarioConfig & config, const CommandOptions & opts)
{
  const ScenarioConfig cfg = effective_config(config, opts);
  const std::string dir = output_dir(cfg, opts);
  const OcpSolution sol = run_solve(cfg, dir, opts.jobs);
  json m = manifest(cfg, "solve-ocp");
  m["result"] = {
    {"objective", number(sol.objective)},   {"gradient_norm", number(sol.gradient_norm)},
    {"iterations", sol.iterations},         {"converged", sol.converged},
    {"restarts_used", sol.restarts_used},   {"best_candidate", sol.best_candidate}};
  write_json(path_in(dir, "manifest.json"), m);
  return std::isfinite(sol.objective) ? kExitOk : kExitFailed;
}

int cmd_run_mpc(const ScenarioConfig & config, const CommandOptions & opts)
{
  const ScenarioConfig cfg = effective_config(config, opts);
  const std::string dir = output_dir(cfg, opts);
  const ClosedLoopResult r = run_closed_loop(
    build_system(cfg), build_cost(cfg), build_mpc_config(cfg, opts.jobs), initial_state(cfg));
  write_file(path_in(dir, "closed_loop.csv"), render([&](std::ostream & os) { write_closed_loop_csv(os, r); }));
  json m = manifest(cfg, "run-mpc");
  m["result"] = closed_loop_json(r);
  write_json(path_in(dir, "manifest.json"), m);
  return exit_code(r.verdict);
}

int cmd_estimate_growth(const ScenarioConfig & config, const CommandOptions & opts)
{
  const ScenarioConfig cfg = effective_config(config, opts);
  const std::string dir = output_dir(cfg, opts);
  json m = manifest(cfg, "estimate-growth");
  int code = kExitOk;
  if (!cfg.analysis.remark2_x.empty()) {
    const Remark2Report r = run_remark2(cfg, dir, opts.jobs);
    m["result"] = {
      {"max_ratio", number(r.max_ratio)}, {"argmax_t", number(r.argmax_t)},
      {"argmax_x", number(r.argmax_x)},   {"pass", r.pass}};
    code = r.pass ? kExitOk : kExitFailed;
  } else {
    const GrowthTable t = run_growth(cfg, dir, opts.jobs);
    json b = json::array();
    for (double v : t.b_values) {
      b.push_back(number(v));
    }
    m["result"] = {
      {"set", t.set_descriptor},         {"samples_per_t", t.samples_per_t},
      {"b_values", b},                   {"monotone_violations", t.monotone_violations},
      {"trend_slope", number(t.trend_slope)}, {"unbounded_trend", t.unbounded_trend},
      {"bounded_extension_ratio", number(t.b_values.back() / t.t_grid.back())}};
  }
  write_json(path_in(dir, "manifest.json"), m);
  return code;
}

bool BundleResult::all_pass() const
{
  return !rows.empty() &&
         std::all_of(rows.begin(), rows.end(), [](const CriterionRow & r) { return r.pass; });
}

std::vector<std::string> bundle_names()
{
  return {
    "example1-dichotomy", "example2-ratios", "robot-stabilization", "approximation-certificates",
    "remark2-condition"};
}

BundleResult reproduce(const std::string & name, const CommandOptions & opts)
{
  BundleResult b;
  b.name = name;
  b.directory = path_in(opts.out_dir.empty() ? "out" : opts.out_dir, name);
  if (name == "example1-dichotomy") {
    bundle_example1(b, opts);
  } else if (name == "example2-ratios") {
    bundle_example2(b, opts);
  } else if (name == "robot-stabilization") {
    bundle_robot(b, opts);
  } else if (name == "approximation-certificates") {
    bundle_certificates(b, opts);
  } else if (name == "remark2-condition") {
    bundle_remark2(b, opts);
  } else {
    throw ConfigError("unknown bundle '" + name + "'");
  }
  std::ostringstream os;
  os << "criterion,scenario,metric,observed,reference,result\n";
  for (const auto & r : b.rows) {
    os << r.criterion << ',' << r.scenario << ',' << r.metric << ',' << format_number(r.observed)
       << ',' << format_number(r.reference) << ',' << (r.pass ? "PASS" : "FAIL") << '\n';
  }
  write_file(path_in(b.directory, "summary.csv"), os.str());
  return b;
}

int cmd_reproduce(const std::string & name, const CommandOptions & opts)
{
  return reproduce(name, opts).all_pass() ? kExitOk : kExitFailed;
}

}  // namespace hmpc::cli

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


#include "hmpc_cli/config.hpp"

#include <fmt/format.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace hmpc::cli {

namespace pt = boost::property_tree;

namespace {

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string & key, const std::string & text)
{
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception &) {
    throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
  }
  if (used != t.size()) {
    throw ConfigError("'" + key + "': trailing characters in '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string & key, const std::string & text)
{
  const std::string t = trim(text);
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(t, &used);
  } catch (const std::exception &) {
    throw ConfigError("'" + key + "': expected an integer, got '" + text + "'");
  }
  if (used != t.size()) {
    throw ConfigError("'" + key + "': trailing characters in '" + text + "'");
  }
  return v;
}

std::uint64_t parse_seed(const std::string & text)
{
  const std::string t = trim(text);
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (t.empty() || t.front() == '-' || t.front() == '+') {
      throw std::invalid_argument("sign");
    }
    v = std::stoull(t, &used);
  } catch (const std::exception &) {
    throw ConfigError("scenario.seed must be an integer in [0, 2^64), got '" + text + "'");
  }
  if (used != t.size()) {
    throw ConfigError("scenario.seed: trailing characters in '" + text + "'");
  }
  return v;
}

std::string join(const std::vector<double> & v)
{
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += (i ? ", " : "") + format_shortest(v[i]);
  }
  return out;
}

std::string join_rows(const Rows & rows)
{
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += (i ? "; " : "") + join(rows[i]);
  }
  return out;
}

Vector to_vector(const std::vector<double> & v)
{
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Matrix to_matrix(const Rows & rows, const char * what)
{
  if (rows.empty()) {
    throw ConfigError(std::string(what) + ": matrix is empty");
  }
  Matrix M(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) {
      throw ConfigError(std::string(what) + ": ragged matrix rows");
    }
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return M;
}

class Writer
{
public:
  void section(const char * name)
  {
    if (!first_) {
      os_ << '\n';
    }
    first_ = false;
    os_ << '[' << name << "]\n";
  }
  void put(const std::string & key, const std::string & value) { os_ << key << " = " << value << '\n'; }
  void put(const std::string & key, double v) { put(key, format_shortest(v)); }
  void put(const std::string & key, int v) { put(key, std::to_string(v)); }
  void put_list(const std::string & key, const std::vector<double> & v)
  {
    if (!v.empty()) {
      put(key, join(v));
    }
  }
  void put_rows(const std::string & key, const Rows & rows)
  {
    if (!rows.empty()) {
      put(key, join_rows(rows));
    }
  }
  std::string str() const { return os_.str(); }

private:
  std::ostringstream os_;
  bool first_ = true;
};

// Reads the keys of one section, rejecting unknown ones.
class Section
{
public:
  Section(const pt::ptree * tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  std::optional<std::string> raw(const std::string & key)
  {
    seen_.insert(key);
    if (!tree_) {
      return std::nullopt;
    }
    const auto child = tree_->get_child_optional(pt::ptree::path_type(key, '\0'));
    if (!child) {
      return std::nullopt;
    }
    return trim(child->data());
  }

  void get(const std::string & key, std::string & out)
  {
    if (auto v = raw(key)) {
      out = *v;
    }
  }
  void get(const std::string & key, double & out)
  {
    if (auto v = raw(key)) {
      out = parse_double(qualified(key), *v);
    }
  }
  void get(const std::string & key, int & out)
  {
    if (auto v = raw(key)) {
      out = static_cast<int>(parse_integer(qualified(key), *v));
    }
  }
  void get(const std::string & key, std::vector<double> & out)
  {
    if (auto v = raw(key)) {
      out = parse_list(*v);
    }
  }
  void get(const std::string & key, Rows & out)
  {
    if (auto v = raw(key)) {
      out = parse_rows(*v);
    }
  }

  /// Keys not requested so far.
  std::vector<std::pair<std::string, std::string>> rest() const
  {
    std::vector<std::pair<std::string, std::string>> out;
    if (tree_) {
      for (const auto & [k, v] : *tree_) {
        if (!seen_.count(k)) {
          out.emplace_back(k, trim(v.data()));
        }
      }
    }
    return out;
  }

  void finish() const
  {
    const auto extra = rest();
    if (!extra.empty()) {
      throw ConfigError("unknown key '" + qualified(extra.front().first) + "'");
    }
  }

  std::string qualified(const std::string & key) const { return name_ + "." + key; }

private:
  const pt::ptree * tree_;
  std::string name_;
  std::set<std::string> seen_;
};

constexpr const char * kSections[] = {
  "scenario", "system", "dilation", "cost", "ocp", "mpc", "homogeneity", "analysis"};

}  // namespace

std::string format_shortest(double v)
{
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  return fmt::format("{}", v);
}

std::vector<double> parse_list(const std::string & text)
{
  std::vector<double> out;
  const std::string t = trim(text);
  if (t.empty()) {
    return out;
  }
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(parse_double("list item", item));
  }
  if (t.back() == ',') {
    throw ConfigError("trailing comma in '" + text + "'");
  }
  return out;
}

Rows parse_rows(const std::string & text)
{
  Rows out;
  std::stringstream ss(trim(text));
  std::string row;
  while (std::getline(ss, row, ';')) {
    out.push_back(parse_list(row));
    if (out.back().size() != out.front().size()) {
      throw ConfigError("ragged matrix rows in '" + text + "'");
    }
  }
  return out;
}

std::string to_ini(const ScenarioConfig & c)
{
  Writer w;
  w.section("scenario");
  w.put("id", c.id);
  w.put("description", c.description);
  w.put("seed", std::to_string(c.seed));
  if (!c.output_dir.empty()) {
    w.put("output_dir", c.output_dir);
  }

  w.section("system");
  w.put("name", c.system.name);
  for (const auto & [k, v] : c.system.params) {
    w.put(k, v);
  }
  w.put_rows("A", c.system.A);
  w.put_rows("B", c.system.B);

  if (c.dilation) {
    w.section("dilation");
    w.put_list("r", c.dilation->r);
    w.put_list("s", c.dilation->s);
    w.put("tau", c.dilation->tau);
    if (c.dilation->d) {
      w.put("d", *c.dilation->d);
    }
  }

  w.section("cost");
  w.put("kind", c.cost.kind);
  w.put_list("q_x", c.cost.q_x);
  w.put_list("p_x", c.cost.p_x);
  w.put_list("q_u", c.cost.q_u);
  w.put_list("p_u", c.cost.p_u);
  w.put_rows("Q", c.cost.Q);
  w.put_rows("R", c.cost.R);

  w.section("ocp");
  w.put_list("x0", c.ocp.x0);
  w.put("horizon", c.ocp.horizon);
  w.put("segments", c.ocp.segments);
  w.put("substeps", c.ocp.substeps);
  w.put("restarts", c.ocp.restarts);
  w.put("max_iterations", c.ocp.max_iterations);

  w.section("mpc");
  w.put("delta", c.mpc.delta);
  w.put("steps", c.mpc.steps);
  w.put("warm_start", c.mpc.warm_start);
  w.put("convergence_radius", c.mpc.convergence_radius);
  w.put("convergence_norm", c.mpc.convergence_norm);
  w.put("stall_tolerance", c.mpc.stall_tolerance);
  w.put("stall_steps", c.mpc.stall_steps);
  w.put("plant_substeps", c.mpc.plant_substeps);
  w.put_list("horizons", c.mpc.horizons);

  w.section("homogeneity");
  w.put("alpha_min", c.homogeneity.alpha_min);
  w.put("alpha_max", c.homogeneity.alpha_max);
  w.put("alpha_points", c.homogeneity.alpha_points);
  w.put("samples", c.homogeneity.samples);
  w.put("box", c.homogeneity.box);
  w.put("tolerance", c.homogeneity.tolerance);
  if (!c.homogeneity.approx.empty()) {
    w.put("approx", c.homogeneity.approx);
  }
  w.put("rho", c.homogeneity.rho);
  w.put("eta", c.homogeneity.eta);

  w.section("analysis");
  w.put("set", c.analysis.set);
  w.put("radius", c.analysis.radius);
  w.put("exclude", c.analysis.exclude);
  w.put("c1", c.analysis.c1);
  w.put("c2", c.analysis.c2);
  w.put_rows("points", c.analysis.points);
  w.put_list("t_grid", c.analysis.t_grid);
  w.put("samples", c.analysis.samples);
  w.put_list("remark2_x", c.analysis.remark2_x);
  return w.str();
}

ScenarioConfig parse_ini(const std::string & text)
{
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error & e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  for (const auto & [name, child] : tree) {
    if (child.empty() && !child.data().empty()) {
      throw ConfigError("key '" + name + "' outside of a section");
    }
    if (std::find(std::begin(kSections), std::end(kSections), name) == std::end(kSections)) {
      throw ConfigError("unknown section [" + name + "]");
    }
  }
  auto section = [&](const char * name) {
    const auto child = tree.get_child_optional(name);
    return Section(child ? &*child : nullptr, name);
  };

  ScenarioConfig c;
  {
    Section s = section("scenario");
    s.get("id", c.id);
    s.get("description", c.description);
    if (auto v = s.raw("seed")) {
      c.seed = parse_seed(*v);
    }
    s.get("output_dir", c.output_dir);
    s.finish();
    if (c.id.empty()) {
      throw ConfigError("scenario.id is required");
    }
  }
  {
    Section s = section("system");
    s.get("name", c.system.name);
    s.get("A", c.system.A);
    s.get("B", c.system.B);
    for (const auto & [k, v] : s.rest()) {
      c.system.params[k] = parse_double("system." + k, v);
    }
  }
  if (tree.get_child_optional("dilation")) {
    Section s = section("dilation");
    DilationConfig d;
    s.get("r", d.r);
    s.get("s", d.s);
    s.get("tau", d.tau);
    if (auto v = s.raw("d")) {
      d.d = parse_double("dilation.d", *v);
    }
    s.finish();
    c.dilation = d;
  }
  {
    Section s = section("cost");
    s.get("kind", c.cost.kind);
    s.get("q_x", c.cost.q_x);
    s.get("p_x", c.cost.p_x);
    s.get("q_u", c.cost.q_u);
    s.get("p_u", c.cost.p_u);
    s.get("Q", c.cost.Q);
    s.get("R", c.cost.R);
    s.finish();
  }
  {
    Section s = section("ocp");
    s.get("x0", c.ocp.x0);
    s.get("horizon", c.ocp.horizon);
    s.get("segments", c.ocp.segments);
    s.get("substeps", c.ocp.substeps);
    s.get("restarts", c.ocp.restarts);
    s.get("max_iterations", c.ocp.max_iterations);
    s.finish();
  }
  {
    Section s = section("mpc");
    s.get("delta", c.mpc.delta);
    s.get("steps", c.mpc.steps);
    s.get("warm_start", c.mpc.warm_start);
    s.get("convergence_radius", c.mpc.convergence_radius);
    s.get("convergence_norm", c.mpc.convergence_norm);
    s.get("stall_tolerance", c.mpc.stall_tolerance);
    s.get("stall_steps", c.mpc.stall_steps);
    s.get("plant_substeps", c.mpc.plant_substeps);
    s.get("horizons", c.mpc.horizons);
    s.finish();
  }
  {
    Section s = section("homogeneity");
    s.get("alpha_min", c.homogeneity.alpha_min);
    s.get("alpha_max", c.homogeneity.alpha_max);
    s.get("alpha_points", c.homogeneity.alpha_points);
    s.get("samples", c.homogeneity.samples);
    s.get("box", c.homogeneity.box);
    s.get("tolerance", c.homogeneity.tolerance);
    s.get("approx", c.homogeneity.approx);
    s.get("rho", c.homogeneity.rho);
    s.get("eta", c.homogeneity.eta);
    s.finish();
  }
  {
    Section s = section("analysis");
    s.get("set", c.analysis.set);
    s.get("radius", c.analysis.radius);
    s.get("exclude", c.analysis.exclude);
    s.get("c1", c.analysis.c1);
    s.get("c2", c.analysis.c2);
    s.get("points", c.analysis.points);
    s.get("t_grid", c.analysis.t_grid);
    s.get("samples", c.analysis.samples);
    s.get("remark2_x", c.analysis.remark2_x);
    s.finish();
  }
  return c;
}

ScenarioConfig load_config(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot read config '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_ini(ss.str());
}

std::string config_hash(const ScenarioConfig & cfg)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : to_ini(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

ControlSystem build_system(const ScenarioConfig & cfg)
{
  SystemParams p;
  p.values = cfg.system.params;
  if (cfg.system.name == "linear") {
    p.A = to_matrix(cfg.system.A, "system.A");
    p.B = to_matrix(cfg.system.B, "system.B");
  }
  try {
    return builtin(cfg.system.name, p);
  } catch (const std::invalid_argument & e) {
    throw ConfigError(e.what());
  }
}

std::optional<DilationStructure> build_dilation(const ScenarioConfig & cfg)
{
  if (cfg.dilation) {
    const auto & d = *cfg.dilation;
    try {
      if (d.d) {
        return DilationStructure(to_vector(d.r), to_vector(d.s), d.tau, *d.d);
      }
      return DilationStructure(to_vector(d.r), to_vector(d.s), d.tau);
    } catch (const std::invalid_argument & e) {
      throw ConfigError(std::string("dilation: ") + e.what());
    }
  }
  return build_system(cfg).declared_dilation();
}

StageCost build_cost(const ScenarioConfig & cfg)
{
  const auto & c = cfg.cost;
  try {
    if (c.kind == "quadratic") {
      return StageCost::quadratic(to_matrix(c.Q, "cost.Q"), to_matrix(c.R, "cost.R"));
    }
    if (c.kind == "homogeneous" || c.kind == "weighted") {
      if (!c.p_x.empty() || !c.p_u.empty()) {
        const ControlSystem sys = build_system(cfg);
        auto ones = [](std::size_t n) { return std::vector<double>(n, 1.0); };
        const auto q_x = c.q_x.empty() ? ones(static_cast<std::size_t>(sys.n())) : c.q_x;
        const auto q_u = c.q_u.empty() ? ones(static_cast<std::size_t>(sys.m())) : c.q_u;
        return StageCost::weighted(to_vector(q_x), to_vector(c.p_x), to_vector(q_u), to_vector(c.p_u));
      }
      const auto ds = build_dilation(cfg);
      if (!ds) {
        throw ConfigError("cost: a homogeneous cost needs a dilation");
      }
      if (c.q_x.empty() && c.q_u.empty()) {
        return StageCost::homogeneous(*ds);
      }
      const auto q_x = c.q_x.empty() ? Vector::Ones(ds->n()).eval() : to_vector(c.q_x);
      const auto q_u = c.q_u.empty() ? Vector::Ones(ds->m()).eval() : to_vector(c.q_u);
      return StageCost::weighted(*ds, q_x, q_u);
    }
  } catch (const std::invalid_argument & e) {
    throw ConfigError(std::string("cost: ") + e.what());
  }
  throw ConfigError("cost.kind must be homogeneous, weighted or quadratic");
}

Vector initial_state(const ScenarioConfig & cfg)
{
  const ControlSystem sys = build_system(cfg);
  if (cfg.ocp.x0.empty()) {
    return Vector::Zero(sys.n());
  }
  if (static_cast<Eigen::Index>(cfg.ocp.x0.size()) != sys.n()) {
    throw ConfigError("ocp.x0 has the wrong dimension");
  }
  return to_vector(cfg.ocp.x0);
}

SolverOptions build_solver_options(const ScenarioConfig & cfg, int jobs)
{
  SolverOptions o;
  o.max_iterations = cfg.ocp.max_iterations;
  o.seed = cfg.seed;
  o.jobs = jobs;
  return o;
}

OcpSpec build_ocp_spec(const ScenarioConfig & cfg)
{
  OcpSpec spec{build_system(cfg), build_cost(cfg), cfg.ocp.horizon, cfg.ocp.segments,
               cfg.ocp.substeps, std::nullopt};
  try {
    spec.validate();
  } catch (const std::invalid_argument & e) {
    throw ConfigError(e.what());
  }
  return spec;
}

MpcConfig build_mpc_config(const ScenarioConfig & cfg, int jobs)
{
  MpcConfig m;
  m.horizon = cfg.ocp.horizon;
  m.segments = cfg.ocp.segments;
  m.substeps = cfg.ocp.substeps;
  m.restarts = cfg.ocp.restarts;
  m.delta = cfg.mpc.delta;
  m.steps = cfg.mpc.steps;
  m.plant_substeps = cfg.mpc.plant_substeps;
  m.convergence_radius = cfg.mpc.convergence_radius;
  m.stall_tolerance = cfg.mpc.stall_tolerance;
  m.stall_steps = cfg.mpc.stall_steps;
  m.solver = build_solver_options(cfg, jobs);
  try {
    m.warm_start = parse_warm_start(cfg.mpc.warm_start);
    m.convergence_norm = parse_convergence_norm(cfg.mpc.convergence_norm);
    m.validate();
  } catch (const std::invalid_argument & e) {
    throw ConfigError(std::string("mpc: ") + e.what());
  }
  return m;
}

SamplingPlan build_sampling_plan(const ScenarioConfig & cfg)
{
  SamplingPlan p;
  p.alpha_min = cfg.homogeneity.alpha_min;
  p.alpha_max = cfg.homogeneity.alpha_max;
  p.alpha_points = cfg.homogeneity.alpha_points;
  p.samples = cfg.homogeneity.samples;
  p.box = cfg.homogeneity.box;
  p.seed = cfg.seed;
  return p;
}

SampleSet build_sample_set(const ScenarioConfig & cfg)
{
  SampleSet s;
  try {
    s.kind = parse_sample_set_kind(cfg.analysis.set);
  } catch (const std::invalid_argument & e) {
    throw ConfigError(std::string("analysis: ") + e.what());
  }
  s.radius = cfg.analysis.radius;
  s.exclude = cfg.analysis.exclude;
  s.c1 = cfg.analysis.c1;
  s.c2 = cfg.analysis.c2;
  for (const auto & p : cfg.analysis.points) {
    s.points.push_back(to_vector(p));
  }
  return s;
}

GrowthOptions build_growth_options(const ScenarioConfig & cfg, int jobs)
{
  GrowthOptions g;
  g.t_grid = cfg.analysis.t_grid;
  g.samples = cfg.analysis.samples;
  g.restarts = cfg.ocp.restarts;
  g.segments = cfg.ocp.segments;
  g.substeps = cfg.ocp.substeps;
  g.solver = build_solver_options(cfg, jobs);
  return g;
}

}  // namespace hmpc::cli

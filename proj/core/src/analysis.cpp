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


#include "hmpc/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hmpc/parallel.hpp"
#include "hmpc/sampling.hpp"

namespace hmpc {

namespace {

constexpr double kEllFloor = 1e-10;

std::vector<Vector> box_corners(Eigen::Index n, double radius)
{
  std::vector<Vector> out;
  const std::size_t count = std::size_t{1} << static_cast<std::size_t>(n);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      v(i) = (mask >> static_cast<std::size_t>(i)) & 1U ? -radius : radius;
    }
    out.push_back(std::move(v));
  }
  return out;
}

double fit_slope(const std::vector<double> & xs, const std::vector<double> & ys)
{
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  if (xs.size() < 2 || std::abs(denom) <= 1e-12 * std::max(1.0, n * sxx)) {
    return 0.0;
  }
  return (n * sxy - sx * sy) / denom;
}

OcpSpec spec_for(const ControlSystem & sys, const StageCost & cost, double t, const GrowthOptions & o)
{
  return OcpSpec{sys, cost, t, o.segments, o.substeps, std::nullopt};
}

}  // namespace

const char * to_string(SampleSetKind kind)
{
  switch (kind) {
    case SampleSetKind::box:
      return "box";
    case SampleSetKind::annulus:
      return "annulus";
    case SampleSetKind::points:
      return "points";
  }
  return "?";
}

SampleSetKind parse_sample_set_kind(const std::string & text)
{
  if (text == "box") {
    return SampleSetKind::box;
  }
  if (text == "annulus") {
    return SampleSetKind::annulus;
  }
  if (text == "points") {
    return SampleSetKind::points;
  }
  throw std::invalid_argument("unknown sample set '" + text + "'");
}

std::string SampleSet::describe() const
{
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case SampleSetKind::box:
      os << "box radius=" << radius << " exclude=" << exclude;
      break;
    case SampleSetKind::annulus:
      os << "annulus c1=" << c1 << " c2=" << c2;
      break;
    case SampleSetKind::points:
      os << "points count=" << points.size();
      break;
  }
  return os.str();
}

std::vector<Vector> sample_set(
  const SampleSet & set, Eigen::Index n, int count, std::uint64_t seed,
  const std::optional<DilationStructure> & ds)
{
  if (count < 1 && set.kind != SampleSetKind::points) {
    throw std::invalid_argument("sample_set: count must be positive");
  }
  std::vector<Vector> out;
  switch (set.kind) {
    case SampleSetKind::points:
      for (const auto & p : set.points) {
        require_dimension(p, n, "sample_set point");
      }
      return set.points;

    case SampleSetKind::box: {
      if (!(set.radius > 0.0) || !(set.exclude >= 0.0) || !(set.exclude < set.radius)) {
        throw std::invalid_argument("sample_set: need 0 <= exclude < radius");
      }
      for (auto & c : box_corners(n, set.radius)) {
        if (static_cast<int>(out.size()) < count) {
          out.push_back(std::move(c));
        }
      }
      int batch = 4 * count + 16;
      while (static_cast<int>(out.size()) < count) {
        out.resize(std::min<std::size_t>(out.size(), std::size_t{1} << static_cast<std::size_t>(n)));
        const Matrix pts = scrambled_sobol(static_cast<int>(n), batch, seed);
        for (Eigen::Index row = 0; row < pts.rows() && static_cast<int>(out.size()) < count; ++row) {
          Vector x = set.radius * (2.0 * pts.row(row).transpose().array() - 1.0).matrix();
          if (x.lpNorm<Eigen::Infinity>() >= set.exclude && x.lpNorm<Eigen::Infinity>() > 0.0) {
            out.push_back(std::move(x));
          }
        }
        batch *= 2;
      }
      return out;
    }

    case SampleSetKind::annulus: {
      if (!ds) {
        throw std::invalid_argument("sample_set: annulus sampling needs a dilation structure");
      }
      if (!(set.c1 >= 0.0) || !(set.c2 > set.c1)) {
        throw std::invalid_argument("sample_set: need 0 <= c1 < c2");
      }
      require_dimension(Vector::Zero(ds->n()), n, "sample_set dilation");
      const Matrix pts = scrambled_sobol(static_cast<int>(n) + 1, count, seed);
      for (Eigen::Index row = 0; row < pts.rows(); ++row) {
        Vector y(n);
        for (Eigen::Index i = 0; i < n; ++i) {
          y(i) = 2.0 * pts(row, i) - 1.0;
        }
        const double level = dilated_norm_power(*ds, y);
        if (!(level > 0.0)) {
          y.setConstant(1.0);
        }
        const double c = set.c1 + (set.c2 - set.c1) * pts(row, n);
        const double beta = std::pow(c / dilated_norm_power(*ds, y), 1.0 / ds->d());
        out.push_back(dilate_state(*ds, beta, y));
      }
      return out;
    }
  }
  return out;
}

GrowthTable estimate_growth(
  const ControlSystem & sys, const StageCost & cost, const SampleSet & set,
  const GrowthOptions & options)
{
  if (options.t_grid.empty()) {
    throw std::invalid_argument("estimate_growth: empty t grid");
  }
  for (std::size_t i = 0; i < options.t_grid.size(); ++i) {
    if (!(options.t_grid[i] > 0.0) || (i > 0 && !(options.t_grid[i] > options.t_grid[i - 1]))) {
      throw std::invalid_argument("estimate_growth: t grid must be positive and increasing");
    }
  }
  std::optional<DilationStructure> ds = cost.dilation();
  if (!ds) {
    ds = sys.declared_dilation();
  }

  GrowthTable table;
  table.t_grid = options.t_grid;
  table.set_descriptor = set.describe();
  table.states = sample_set(set, sys.n(), options.samples, options.solver.seed, ds);
  table.samples_per_t = static_cast<int>(table.states.size());
  for (const auto & x : table.states) {
    table.ell_star.push_back(cost.ell_star(x));
  }

  const std::size_t nt = table.t_grid.size();
  const std::size_t ns = table.states.size();
  table.values.assign(nt, std::vector<double>(ns, kInfinity));
  table.point_converged.assign(nt, std::vector<bool>(ns, false));
  std::vector<char> conv(nt * ns, 0);
  parallel_for(nt * ns, options.solver.jobs, [&](std::size_t idx) {
    const std::size_t ti = idx / ns;
    const std::size_t i = idx % ns;
    SolverOptions so = options.solver;
    so.jobs = 1;
    so.seed = options.solver.seed + i;
    const OcpSolution sol = solve(
      spec_for(sys, cost, table.t_grid[ti], options), table.states[i], std::nullopt,
      options.restarts, so);
    table.values[ti][i] = sol.objective;
    conv[idx] = sol.converged ? 1 : 0;
  });

  table.ratios.assign(nt, std::vector<double>(ns, 0.0));
  for (std::size_t ti = 0; ti < nt; ++ti) {
    double best = -1.0;
    std::size_t arg = 0;
    bool all_converged = true;
    for (std::size_t i = 0; i < ns; ++i) {
      const double v = table.values[ti][i];
      const double r = std::isfinite(v) ? v / std::max(table.ell_star[i], kEllFloor) : kInfinity;
      table.ratios[ti][i] = r;
      table.point_converged[ti][i] = conv[ti * ns + i] != 0;
      all_converged = all_converged && conv[ti * ns + i] != 0;
      if (r > best) {
        best = r;
        arg = i;
      }
    }
    table.b_values.push_back(best);
    table.argmax_states.push_back(table.states[arg]);
    table.converged.push_back(all_converged);
    if (ti > 0 && best < table.b_values[ti - 1] * (1.0 - options.monotone_tolerance)) {
      ++table.monotone_violations;
    }
  }

  std::vector<double> lx, ly;
  bool infinite = false;
  for (std::size_t i = 0; i < ns; ++i) {
    const double r = table.ratios.back()[i];
    if (!std::isfinite(r)) {
      infinite = true;
    } else if (r > 0.0 && table.ell_star[i] > 0.0) {
      lx.push_back(std::log(table.ell_star[i]));
      ly.push_back(std::log(r));
    }
  }
  table.trend_slope = fit_slope(lx, ly);
  table.unbounded_trend = infinite || table.trend_slope < -options.trend_threshold;
  return table;
}

double check_bounded_extension(const GrowthTable & table, double alpha, double d, int t_star_index)
{
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("check_bounded_extension: alpha must lie in (0, 1)");
  }
  if (!(d > 0.0)) {
    throw std::invalid_argument("check_bounded_extension: d must be positive");
  }
  if (t_star_index < 0 || static_cast<std::size_t>(t_star_index) >= table.b_values.size()) {
    throw std::out_of_range("check_bounded_extension: t_star_index out of range");
  }
  return table.b_values[static_cast<std::size_t>(t_star_index)] / (1.0 - std::pow(alpha, d));
}

Remark2Report check_remark2_condition(
  const ControlSystem & sys, const StageCost & cost, const std::vector<double> & t_grid,
  const std::vector<double> & x_samples, const GrowthOptions & options)
{
  if (sys.n() != 1) {
    throw DimensionError("check_remark2_condition: scalar system required");
  }
  if (t_grid.empty() || x_samples.empty()) {
    throw std::invalid_argument("check_remark2_condition: empty grid");
  }
  for (double t : t_grid) {
    if (!(t > 0.0)) {
      throw std::invalid_argument("check_remark2_condition: t must be positive");
    }
  }
  for (double x : x_samples) {
    if (x == 0.0 || !std::isfinite(x)) {
      throw std::invalid_argument("check_remark2_condition: samples must be finite and nonzero");
    }
  }

  Remark2Report report;
  report.t_grid = t_grid;
  report.x_samples = x_samples;
  const std::size_t nt = t_grid.size();
  const std::size_t nx = x_samples.size();
  report.ratios.assign(nt, std::vector<double>(nx, kInfinity));
  parallel_for(nt * nx, options.solver.jobs, [&](std::size_t idx) {
    const std::size_t ti = idx / nx;
    const std::size_t i = idx % nx;
    SolverOptions so = options.solver;
    so.jobs = 1;
    so.seed = options.solver.seed + i;
    const Vector x = Vector::Constant(1, x_samples[i]);
    const double v =
      solve(spec_for(sys, cost, t_grid[ti], options), x, std::nullopt, options.restarts, so)
        .objective;
    report.ratios[ti][i] = v / (t_grid[ti] * cost.ell_star(x));
  });

  report.pass = true;
  report.max_ratio = -1.0;
  for (std::size_t ti = 0; ti < nt; ++ti) {
    for (std::size_t i = 0; i < nx; ++i) {
      const double r = report.ratios[ti][i];
      if (!std::isfinite(r)) {
        report.pass = false;
      }
      if (r > report.max_ratio || std::isnan(r)) {
        report.max_ratio = std::isnan(r) ? kInfinity : r;
        report.argmax_t = t_grid[ti];
        report.argmax_x = x_samples[i];
      }
    }
  }
  report.pass = report.pass && report.max_ratio < 1.0;
  return report;
}

}  // namespace hmpc

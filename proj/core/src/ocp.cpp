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

#include "hmpc/ocp.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hmpc/parallel.hpp"

namespace hmpc {

void OcpSpec::validate() const
{
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw std::invalid_argument("OcpSpec: horizon must be positive");
  }
  if (segments < 1 || substeps < 1) {
    throw std::invalid_argument("OcpSpec: segments and substeps must be >= 1");
  }
  if (cost.n() != sys.n() || cost.m() != sys.m()) {
    throw DimensionError("OcpSpec: cost dimensions do not match the system");
  }
  if (bounds) {
    if (bounds->lower.size() != sys.m() || bounds->upper.size() != sys.m()) {
      throw DimensionError("OcpSpec: control bounds must have dimension m");
    }
    if (!(bounds->lower.array() <= bounds->upper.array()).all()) {
      throw std::invalid_argument("OcpSpec: control bounds must satisfy lower <= upper");
    }
  }
}

namespace {

// Rollouts of the shooting objective with cached segment boundary states, so that a
// perturbation of segment k only re-simulates segments k..N-1.
class Shooting
{
public:
  Shooting(
    const OcpSpec & spec, const Vector & x0, const SolverOptions & options,
    double terminal_weight = 0.0)
  : spec_(spec),
    options_(options),
    x0_(x0),
    m_(spec.sys.m()),
    h_(spec.segment_length() / spec.substeps),
    stepper_(spec.sys),
    boundary_(static_cast<std::size_t>(spec.segments) + 1, Vector(spec.sys.n())),
    prefix_(static_cast<std::size_t>(spec.segments) + 1, 0.0),
    u_(m_),
    x_(spec.sys.n()),
    terminal_weight_(terminal_weight)
  {
  }

  double objective(const Vector & p)
  {
    Vector x = x0_;
    double total = 0.0;
    boundary_[0] = x;
    prefix_[0] = 0.0;
    valid_ = 0;
    for (int k = 0; k < spec_.segments; ++k) {
      u_ = p.segment(k * m_, m_);
      total += run_segment(x, u_);
      if (!std::isfinite(total)) {
        return kInfinity;
      }
      boundary_[static_cast<std::size_t>(k) + 1] = x;
      prefix_[static_cast<std::size_t>(k) + 1] = total;
      valid_ = k + 1;
    }
    return total + terminal(x);
  }

  /// Segments completed by the last objective() call.
  int completed_segments() const { return valid_; }

  // Requires objective(p) to have been evaluated last.
  void gradient(const Vector & p, double fp, Vector & g)
  {
    g.setZero(p.size());
    if (!std::isfinite(fp)) {
      return;
    }
    for (int k = 0; k < spec_.segments; ++k) {
      const double base_tail = fp - prefix_[static_cast<std::size_t>(k)];
      for (Eigen::Index j = 0; j < m_; ++j) {
        const Eigen::Index idx = k * m_ + j;
        const double h =
          std::max(options_.fd_absolute, options_.fd_relative * std::abs(p(idx)));
        const double plus = tail(k, p, j, h);
        const double minus = tail(k, p, j, -h);
        if (std::isfinite(plus) && std::isfinite(minus)) {
          g(idx) = (plus - minus) / (2.0 * h);
        } else if (std::isfinite(plus)) {
          g(idx) = (plus - base_tail) / h;
        } else if (std::isfinite(minus)) {
          g(idx) = (base_tail - minus) / h;
        } else {
          g(idx) = 0.0;
        }
      }
    }
  }

private:
  double run_segment(Vector & x, const Vector & u)
  {
    double c = 0.0;
    for (int s = 0; s < spec_.substeps; ++s) {
      c += stepper_.step(x, u, h_, spec_.cost);
      if (!x.allFinite() || x.norm() > options_.blowup) {
        return kInfinity;
      }
    }
    return c;
  }

  // Cost of segments k..N-1 with u_{k,j} shifted by delta.
  double tail(int k, const Vector & p, Eigen::Index j, double delta)
  {
    x_ = boundary_[static_cast<std::size_t>(k)];
    double total = 0.0;
    for (int seg = k; seg < spec_.segments; ++seg) {
      u_ = p.segment(seg * m_, m_);
      if (seg == k) {
        u_(j) += delta;
      }
      total += run_segment(x_, u_);
      if (!std::isfinite(total)) {
        return kInfinity;
      }
    }
    return total + terminal(x_);
  }

  double terminal(const Vector & x) const
  {
    return terminal_weight_ > 0.0 ? terminal_weight_ * spec_.cost.ell_star(x) : 0.0;
  }

  const OcpSpec & spec_;
  const SolverOptions & options_;
  Vector x0_;
  Eigen::Index m_;
  double h_;
  Rk4Stepper stepper_;
  std::vector<Vector> boundary_;
  std::vector<double> prefix_;
  int valid_ = 0;
  Vector u_;
  Vector x_;
  double terminal_weight_;
};

Vector flatten(const ControlSignal & u, const OcpSpec & spec)
{
  const Eigen::Index m = spec.sys.m();
  Vector p(spec.segments * m);
  const bool same_grid = static_cast<int>(u.segments()) == spec.segments &&
                         std::abs(u.end_time() - spec.horizon) <= 1e-12 * spec.horizon;
  for (int k = 0; k < spec.segments; ++k) {
    if (same_grid) {
      p.segment(k * m, m) = u.values()[static_cast<std::size_t>(k)];
    } else {
      const double mid = (k + 0.5) * spec.segment_length();
      p.segment(k * m, m) = u.value_at(mid);
    }
  }
  return p;
}

ControlSignal unflatten(const Vector & p, const OcpSpec & spec)
{
  const Eigen::Index m = spec.sys.m();
  std::vector<Vector> values;
  values.reserve(static_cast<std::size_t>(spec.segments));
  for (int k = 0; k < spec.segments; ++k) {
    values.emplace_back(p.segment(k * m, m));
  }
  return ControlSignal::uniform(spec.horizon, values);
}

Vector random_start(const OcpSpec & spec, const Vector & x0, std::uint64_t seed, int index)
{
  const Eigen::Index m = spec.sys.m();
  const double level = spec.cost.ell_star(x0);
  Vector scale(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    scale(j) = level > 0.0 ? std::pow(level, 1.0 / spec.cost.control_growth(j)) : 0.0;
  }
  std::seed_seq seq{
    static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vector p(spec.segments * m);
  for (int k = 0; k < spec.segments; ++k) {
    for (Eigen::Index j = 0; j < m; ++j) {
      p(k * m + j) = scale(j) * unit(rng);
    }
  }
  return p;
}

std::optional<BoxBounds> repeat_bounds(const OcpSpec & spec, int segments)
{
  if (!spec.bounds) {
    return std::nullopt;
  }
  const Eigen::Index m = spec.sys.m();
  BoxBounds out{Vector(segments * m), Vector(segments * m)};
  for (int k = 0; k < segments; ++k) {
    out.lower.segment(k * m, m) = spec.bounds->lower;
    out.upper.segment(k * m, m) = spec.bounds->upper;
  }
  return out;
}

// Horizon continuation for starts whose rollout escapes. A feasible prefix (at most twice
// the previously optimized one) is optimized on its own, with the remaining horizon charged
// as if the state froze at its end; this usually pushes the escape later. When the escape
// does not move, the terminal charge is raised tenfold, up to 1e6.
void make_feasible(
  const OcpSpec & spec, const Vector & x0, Vector & p, const SolverOptions & options,
  const MinimizeOptions & mopts)
{
  Shooting full(spec, x0, options);
  const Eigen::Index m = spec.sys.m();
  int optimized = 0;
  double boost = 1.0;
  for (int round = 0; round < 4 * spec.segments; ++round) {
    if (std::isfinite(full.objective(p))) {
      return;
    }
    const int k = full.completed_segments();
    if (k == 0) {
      return;
    }
    int length = 0;
    if (k <= optimized) {
      boost *= 10.0;
      if (boost > 1e6) {
        return;
      }
      length = optimized;
    } else {
      boost = 1.0;
      length = optimized == 0 ? k : std::min(k, 2 * optimized);
    }
    optimized = length;
    OcpSpec sub = spec;
    sub.segments = length;
    sub.horizon = length * spec.segment_length();
    Shooting prefix(sub, x0, options, boost * (spec.horizon - sub.horizon));
    const MinimizeResult r = minimize_bfgs(
      [&](const Vector & q) { return prefix.objective(q); },
      [&](const Vector & q, double fq, Vector & g) {
        prefix.objective(q);
        prefix.gradient(q, fq, g);
      },
      p.head(length * m), mopts, repeat_bounds(spec, length));
    p.head(length * m) = r.x;
  }
}

}  // namespace

OcpSolution solve(
  const OcpSpec & spec, const Vector & x0, const std::optional<ControlSignal> & init, int restarts,
  const SolverOptions & options)
{
  spec.validate();
  require_dimension(x0, spec.sys.n(), "solve initial state");
  if (!x0.allFinite()) {
    throw std::invalid_argument("solve: initial state must be finite");
  }
  if (restarts < 0) {
    throw std::invalid_argument("solve: restarts must be >= 0");
  }
  if (init && init->m() != spec.sys.m()) {
    throw DimensionError("solve: initial guess has the wrong control dimension");
  }

  const Eigen::Index dim = spec.segments * spec.sys.m();
  std::vector<Vector> starts;
  starts.push_back(init ? flatten(*init, spec) : Vector::Zero(dim));
  for (int r = 1; r <= restarts; ++r) {
    starts.push_back(random_start(spec, x0, options.seed, r));
  }

  const std::optional<BoxBounds> flat_bounds = repeat_bounds(spec, spec.segments);

  MinimizeOptions mopts;
  mopts.max_iterations = options.max_iterations;
  mopts.gtol_factor = options.gtol_factor;

  std::vector<MinimizeResult> results(starts.size());
  parallel_for(starts.size(), options.jobs, [&](std::size_t i) {
    make_feasible(spec, x0, starts[i], options, mopts);
    Shooting shooting(spec, x0, options);
    results[i] = minimize_bfgs(
      [&](const Vector & p) { return shooting.objective(p); },
      [&](const Vector & p, double fp, Vector & g) {
        // The line search may have evaluated other points since p.
        shooting.objective(p);
        shooting.gradient(p, fp, g);
      },
      starts[i], mopts, flat_bounds);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].f < results[best].f) {
      best = i;
    }
  }
  const MinimizeResult & winner = results[best];
  const Vector & p = std::isfinite(winner.f) ? winner.x : starts[best];

  ControlSignal u_star = unflatten(p, spec);
  IntegrateOptions iopts;
  iopts.blowup = options.blowup;
  iopts.cost = [&spec](const Vector & x, const Vector & u) { return spec.cost(x, u); };
  Trajectory traj = integrate(
    spec.sys, x0, u_star, spec.horizon, spec.segment_length() / spec.substeps, iopts);

  OcpSolution sol{std::move(u_star), std::move(traj)};
  sol.objective = winner.f;
  sol.gradient_norm = winner.gradient_norm;
  sol.iterations = winner.iterations;
  sol.restarts_used = restarts;
  sol.converged = std::isfinite(winner.f) && winner.converged;
  sol.best_candidate = static_cast<int>(best);
  return sol;
}

OcpSpec truncated(const OcpSpec & spec, double t)
{
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("truncated: horizon must be positive");
  }
  OcpSpec out = spec;
  const double length = spec.segment_length();
  out.segments = std::max(1, static_cast<int>(std::ceil(t / length - 1e-9)));
  out.horizon = t;
  return out;
}

double value_function(
  const OcpSpec & spec, const Vector & x0, double t, int restarts, const SolverOptions & options)
{
  return solve(truncated(spec, t), x0, std::nullopt, restarts, options).objective;
}

double hjb_oracle_1d(double k, double x)
{
  if (!(k > 0.0)) {
    throw std::invalid_argument("hjb_oracle_1d: k must be positive");
  }
  return 2.0 * (1.0 + std::sqrt(2.0)) / (k + 1.0) * std::pow(std::abs(x), k + 1.0);
}

}  // namespace hmpc

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

#include "hmpc/homogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hmpc {

namespace {

void require_matching(const ControlSystem & sys, const DilationStructure & ds, const char * what)
{
  if (sys.n() != ds.n() || sys.m() != ds.m()) {
    throw DimensionError(std::string(what) + ": system dimensions do not match dilation");
  }
}

// Splits a row of [0,1)^{n+m} into a state and a control in [-box, box].
void split_sample(
  const Matrix & points, Eigen::Index row, Eigen::Index n, double box, Vector & x, Vector & u)
{
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x(i) = box * (2.0 * points(row, i) - 1.0);
  }
  for (Eigen::Index j = 0; j < u.size(); ++j) {
    u(j) = box * (2.0 * points(row, n + j) - 1.0);
  }
}

void clamp_to_ball(Vector & v, double radius)
{
  const double norm = v.norm();
  if (norm > radius) {
    v *= radius / norm;
  }
}

}  // namespace

HomogeneityReport check_homogeneity(
  const ControlSystem & sys, const DilationStructure & ds, const SamplingPlan & plan,
  const HomogeneityTolerance & tol)
{
  require_matching(sys, ds, "check_homogeneity");
  const auto alphas = alpha_grid(plan);
  const Eigen::Index n = sys.n();
  const Eigen::Index m = sys.m();
  const Matrix points = scrambled_sobol(static_cast<int>(n + m), plan.samples, plan.seed);

  HomogeneityReport report;
  double worst_score = -1.0;
  Vector x(n), u(m);
  for (Eigen::Index row = 0; row < points.rows(); ++row) {
    split_sample(points, row, n, plan.box, x, u);
    const Vector f = sys.eval(x, u);
    for (double alpha : alphas) {
      const Vector lhs = sys.eval(dilate_state(ds, alpha, x), dilate_control(ds, alpha, u));
      const Vector rhs = std::pow(alpha, ds.tau()) * dilate_state(ds, alpha, f);
      ++report.samples;
      if (!lhs.allFinite() || !rhs.allFinite()) {
        std::ostringstream os;
        os << "non-finite field value at sample " << row << ", alpha " << alpha;
        report.pass = false;
        report.max_residual = kInfinity;
        report.diagnostic = os.str();
        report.worst_x = x;
        report.worst_u = u;
        report.worst_alpha = alpha;
        return report;
      }
      const double residual = (lhs - rhs).lpNorm<Eigen::Infinity>();
      const double allowed = tol.absolute + tol.relative * rhs.lpNorm<Eigen::Infinity>();
      report.max_residual = std::max(report.max_residual, residual);
      const double score = residual / allowed;
      if (score > worst_score) {
        worst_score = score;
        report.worst_x = x;
        report.worst_u = u;
        report.worst_alpha = alpha;
      }
      if (residual > allowed) {
        report.pass = false;
      }
    }
  }
  if (!report.pass) {
    std::ostringstream os;
    os << "residual exceeds tolerance; worst at alpha " << report.worst_alpha;
    report.diagnostic = os.str();
  }
  return report;
}

TrajectoryIdentityReport check_trajectory_identity(
  const ControlSystem & sys, const DilationStructure & ds, const Vector & x0,
  const ControlSignal & u, double alpha, double horizon, double step)
{
  require_matching(sys, ds, "check_trajectory_identity");
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("check_trajectory_identity: alpha must be positive");
  }
  const double time_scale = std::pow(alpha, ds.tau());
  if (u.end_time() < time_scale * horizon * (1.0 - 1e-12)) {
    throw std::invalid_argument("check_trajectory_identity: control does not cover alpha^tau * horizon");
  }

  const Trajectory original = integrate(sys, x0, u, time_scale * horizon, step * time_scale);
  const Trajectory scaled =
    integrate(sys, dilate_state(ds, alpha, x0), u.dilated(ds, alpha), horizon, step);

  TrajectoryIdentityReport report;
  if (original.escaped() || scaled.escaped()) {
    report.status = original.escaped() ? original.status : scaled.status;
    report.max_deviation = kInfinity;
    return report;
  }
  if (original.times.size() != scaled.times.size()) {
    throw std::logic_error("check_trajectory_identity: time grids do not correspond");
  }
  for (std::size_t k = 0; k < original.times.size(); ++k) {
    const Vector expected = dilate_state(ds, alpha, original.states[k]);
    report.max_deviation =
      std::max(report.max_deviation, (scaled.states[k] - expected).lpNorm<Eigen::Infinity>());
  }
  report.points = original.times.size();
  return report;
}

ApproximationCertificate check_approximation(
  const ControlSystem & full, const ControlSystem & approx, const DilationStructure & ds,
  double rho, double eta, const SamplingPlan & plan, const ApproximationOptions & opts)
{
  require_matching(full, ds, "check_approximation");
  require_matching(approx, ds, "check_approximation");
  if (!(eta > 0.0)) {
    throw std::invalid_argument("check_approximation: eta must be positive");
  }
  if (!(rho > 0.0)) {
    throw std::invalid_argument("check_approximation: rho must be positive");
  }
  const auto alphas = alpha_grid(plan);
  if (alphas.back() > 1.0) {
    throw std::invalid_argument("check_approximation: alpha must lie in (0, 1]");
  }
  const Eigen::Index n = full.n();
  const Eigen::Index m = full.m();
  const Matrix points = scrambled_sobol(static_cast<int>(n + m), plan.samples, plan.seed);

  ApproximationCertificate cert;
  cert.rho = rho;
  cert.eta = eta;
  cert.per_component_max_ratio.assign(static_cast<std::size_t>(n), 0.0);
  cert.per_component_max_residual.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> per_alpha_max(alphas.size(), 0.0);

  Vector x(n), u(m);
  for (Eigen::Index row = 0; row < points.rows(); ++row) {
    split_sample(points, row, n, rho, x, u);
    clamp_to_ball(x, rho);
    clamp_to_ball(u, rho);
    for (std::size_t a = 0; a < alphas.size(); ++a) {
      const double alpha = alphas[a];
      const Vector xs = dilate_state(ds, alpha, x);
      const Vector us = dilate_control(ds, alpha, u);
      const Vector residual = full.eval(xs, us) - approx.eval(xs, us);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double abs_res = std::abs(residual(i));
        const double bound_scale =
          std::pow(alpha, ds.state_weights()(i) + ds.tau() + eta);
        const double ratio = std::isfinite(abs_res) ? abs_res / bound_scale : kInfinity;
        auto idx = static_cast<std::size_t>(i);
        cert.per_component_max_ratio[idx] = std::max(cert.per_component_max_ratio[idx], ratio);
        cert.per_component_max_residual[idx] =
          std::max(cert.per_component_max_residual[idx], abs_res);
        per_alpha_max[a] = std::max(per_alpha_max[a], ratio);
      }
    }
  }

  cert.M = *std::max_element(
    cert.per_component_max_ratio.begin(), cert.per_component_max_ratio.end());
  for (double r : cert.per_component_max_ratio) {
    cert.per_component_margins.push_back(cert.M - r);
  }

  // Least-squares slope over the smallest half of the alpha grid.
  const std::size_t half = std::max<std::size_t>(2, alphas.size() / 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t used = 0;
  for (std::size_t a = 0; a < std::min(half, alphas.size()); ++a) {
    if (per_alpha_max[a] > 0.0 && std::isfinite(per_alpha_max[a])) {
      const double lx = std::log(alphas[a]);
      const double ly = std::log(per_alpha_max[a]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
      ++used;
    }
  }
  if (used >= 2) {
    const double denom = used * sxx - sx * sx;
    cert.small_alpha_slope = denom != 0.0 ? (used * sxy - sx * sy) / denom : 0.0;
  }
  cert.verified = std::isfinite(cert.M) && cert.small_alpha_slope >= -opts.trend_tolerance;
  return cert;
}

}  // namespace hmpc

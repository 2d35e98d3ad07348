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

#include "hmpc/cost.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace hmpc {

const char * to_string(CostKind kind)
{
  switch (kind) {
    case CostKind::homogeneous:
      return "homogeneous";
    case CostKind::weighted_homogeneous:
      return "weighted_homogeneous";
    case CostKind::quadratic:
      return "quadratic";
  }
  return "unknown";
}

namespace {

// |a|^p with exact products for the integer exponents that dominate in practice.
inline double abs_pow(double a, double p)
{
  a = std::abs(a);
  if (p == 2.0) {
    return a * a;
  }
  if (p == 4.0) {
    const double a2 = a * a;
    return a2 * a2;
  }
  if (p == 1.0) {
    return a;
  }
  return std::pow(a, p);
}

void check_power_sum(const Vector & q, const Vector & p, const char * what)
{
  if (q.size() != p.size() || q.size() == 0) {
    throw DimensionError(std::string("StageCost: ") + what + " weights/exponents mismatch");
  }
  if (!(q.array() > 0.0).all() || !q.allFinite()) {
    throw std::invalid_argument(std::string("StageCost: ") + what + " weights must be positive");
  }
  if (!(p.array() >= 1.0).all() || !p.allFinite()) {
    throw std::invalid_argument(
      std::string("StageCost: ") + what + " exponents must be >= 1 (exponent floor)");
  }
}

void check_spd(const Matrix & M, const char * what)
{
  if (M.rows() < 1 || M.rows() != M.cols()) {
    throw DimensionError(std::string("StageCost: ") + what + " must be square");
  }
  if (!M.allFinite() || !M.isApprox(M.transpose(), 1e-12)) {
    throw std::invalid_argument(std::string("StageCost: ") + what + " must be symmetric");
  }
  Eigen::LLT<Matrix> llt(M);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(std::string("StageCost: ") + what + " must be positive definite");
  }
}

}  // namespace

StageCost StageCost::homogeneous(const DilationStructure & ds)
{
  StageCost c = weighted(ds, Vector::Ones(ds.n()), Vector::Ones(ds.m()));
  c.kind_ = CostKind::homogeneous;
  return c;
}

StageCost StageCost::weighted(const DilationStructure & ds, Vector q_x, Vector q_u)
{
  Vector p_x(ds.n());
  Vector p_u(ds.m());
  for (Eigen::Index i = 0; i < ds.n(); ++i) {
    p_x(i) = ds.state_exponent(i);
  }
  for (Eigen::Index j = 0; j < ds.m(); ++j) {
    p_u(j) = ds.control_exponent(j);
  }
  StageCost c = weighted(std::move(q_x), std::move(p_x), std::move(q_u), std::move(p_u));
  c.ds_ = ds;
  return c;
}

StageCost StageCost::weighted(
  Vector q_x, Vector state_exponents, Vector q_u, Vector control_exponents)
{
  check_power_sum(q_x, state_exponents, "state");
  check_power_sum(q_u, control_exponents, "control");
  StageCost c;
  c.kind_ = CostKind::weighted_homogeneous;
  c.n_ = q_x.size();
  c.m_ = q_u.size();
  c.q_x_ = std::move(q_x);
  c.p_x_ = std::move(state_exponents);
  c.q_u_ = std::move(q_u);
  c.p_u_ = std::move(control_exponents);
  return c;
}

StageCost StageCost::quadratic(Matrix Q, Matrix R)
{
  check_spd(Q, "Q");
  check_spd(R, "R");
  StageCost c;
  c.kind_ = CostKind::quadratic;
  c.n_ = Q.rows();
  c.m_ = R.rows();
  c.Q_ = std::move(Q);
  c.R_ = std::move(R);
  return c;
}

double StageCost::state_part(const Vector & x) const
{
  if (kind_ == CostKind::quadratic) {
    return x.dot(Q_ * x);
  }
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n_; ++i) {
    sum += q_x_(i) * abs_pow(x(i), p_x_(i));
  }
  return sum;
}

double StageCost::control_part(const Vector & u) const
{
  if (kind_ == CostKind::quadratic) {
    return u.dot(R_ * u);
  }
  double sum = 0.0;
  for (Eigen::Index j = 0; j < m_; ++j) {
    sum += q_u_(j) * abs_pow(u(j), p_u_(j));
  }
  return sum;
}

double StageCost::control_growth(Eigen::Index j) const
{
  return kind_ == CostKind::quadratic ? 2.0 : p_u_(j);
}

CostHomogeneityReport check_cost_homogeneity(
  const ControlSystem & sys, const StageCost & cost, const DilationStructure & ds,
  const Vector & x0, const ControlSignal & u, double alpha, double step)
{
  if (ds.n() != sys.n() || ds.m() != sys.m() || cost.n() != sys.n() || cost.m() != sys.m()) {
    throw DimensionError("check_cost_homogeneity: system, cost and dilation dimensions differ");
  }
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("check_cost_homogeneity: alpha must be positive");
  }
  const double time_scale = std::pow(alpha, ds.tau());
  const double horizon = u.end_time();

  const Trajectory original = integrate(sys, x0, u, horizon, step * time_scale);
  const Trajectory scaled = integrate(
    sys, dilate_state(ds, alpha, x0), u.dilated(ds, alpha), horizon / time_scale, step);

  CostHomogeneityReport report;
  if (original.escaped() || scaled.escaped()) {
    report.status = original.escaped() ? original.status : scaled.status;
    report.max_ratio_error = kInfinity;
    return report;
  }
  if (original.times.size() != scaled.times.size()) {
    throw std::logic_error("check_cost_homogeneity: time grids do not correspond");
  }

  const double factor = std::pow(alpha, ds.d());
  for (std::size_t k = 0; k < original.times.size(); ++k) {
    const double expected = factor * cost(original.states[k], original.controls[k]);
    const double actual = cost(scaled.states[k], scaled.controls[k]);
    const double err = expected > 0.0 ? std::abs(actual - expected) / expected
                                      : (actual == 0.0 ? 0.0 : kInfinity);
    report.max_ratio_error = std::max(report.max_ratio_error, err);
  }
  report.points = original.times.size();
  return report;
}

}  // namespace hmpc

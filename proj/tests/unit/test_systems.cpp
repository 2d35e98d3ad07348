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


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <hmpc/cost.hpp>
#include <hmpc/systems.hpp>

namespace {

using hmpc::ControlSignal;
using hmpc::Vector;

Vector v(std::initializer_list<double> xs)
{
  Vector out(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) {
    out(i++) = x;
  }
  return out;
}

hmpc::ControlSystem scalar(double k)
{
  return hmpc::builtin("scalar_power", {{{"k", k}}, {}, {}});
}

hmpc::ControlSystem linear(double a, double b)
{
  hmpc::SystemParams p;
  p.A = hmpc::Matrix::Constant(1, 1, a);
  p.B = hmpc::Matrix::Constant(1, 1, b);
  return hmpc::builtin("linear", p);
}

TEST(Builtin, Evaluations)
{
  EXPECT_EQ(hmpc::builtin("driftless3").eval(v({1, 2, 3}), v({4, 5})), v({4, 12, 5}));
  EXPECT_DOUBLE_EQ(scalar(2.0).eval(v({-2}), v({0.5}))(0), -3.5);
  EXPECT_EQ(hmpc::builtin("robot").eval(v({0, 0, 0}), v({1, 1})), v({1, 0, 1}));
  EXPECT_DOUBLE_EQ(hmpc::builtin("damped1d").eval(v({-2}), v({1}))(0), 2.0);
  EXPECT_EQ(hmpc::builtin("robot_approx").eval(v({1, 2, 3}), v({4, 5})), v({4, 12, 5}));
}

TEST(Builtin, DeclaredDilations)
{
  const auto d = hmpc::builtin("driftless3").declared_dilation();
  ASSERT_TRUE(d);
  EXPECT_EQ(d->state_weights(), v({1, 2, 1}));
  EXPECT_EQ(d->control_weights(), v({1, 1}));
  EXPECT_EQ(d->tau(), 0.0);
  EXPECT_FALSE(hmpc::builtin("robot").declared_dilation());
}

TEST(Builtin, Errors)
{
  EXPECT_THROW(hmpc::builtin("pendulum"), std::invalid_argument);
  EXPECT_THROW(scalar(0.0), std::invalid_argument);
  EXPECT_THROW(scalar(-1.0), std::invalid_argument);
  EXPECT_THROW(hmpc::builtin("linear"), hmpc::DimensionError);
  EXPECT_THROW(hmpc::builtin("driftless3").eval(v({1, 2}), v({1, 1})), hmpc::DimensionError);
  EXPECT_THROW(
    hmpc::ControlSystem("shifted", 1, 1, [](const Vector &, const Vector &, Vector & dx) { dx(0) = 1.0; }),
    std::invalid_argument);
}

TEST(Integrate, LinearUnitControl)
{
  const auto sys = linear(0.0, 1.0);
  const auto traj = hmpc::integrate(sys, v({0}), ControlSignal::constant(v({1}), 1.0), 1.0, 0.1);
  EXPECT_FALSE(traj.escaped());
  EXPECT_NEAR(traj.final_state()(0), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(traj.times.back(), 1.0);
}

TEST(Integrate, DriftlessExactSolution)
{
  const auto traj = hmpc::integrate(
    hmpc::builtin("driftless3"), v({0, 0, 1}), ControlSignal::constant(v({1, 0}), 1.0), 1.0, 0.05);
  EXPECT_LE((traj.final_state() - v({1, 1, 1})).norm(), 1e-12);
}

TEST(Integrate, FiniteEscapeIsFlagged)
{
  const auto traj =
    hmpc::integrate(scalar(2.0), v({1}), ControlSignal::zero(1, 1.1, 1), 1.1, 1e-3);
  EXPECT_EQ(traj.status, hmpc::IntegrationStatus::escaped);
  EXPECT_LT(traj.times.back(), 1.1);
  EXPECT_GT(traj.times.back(), 0.99);
}

TEST(Integrate, SquareRootFreeSolution)
{
  // x' = sqrt(x) from x0 > 0 has x(t) = (sqrt(x0) + t / 2)^2.
  const auto traj = hmpc::integrate(scalar(0.5), v({0.25}), ControlSignal::zero(1, 2.0, 1), 2.0, 1e-3);
  EXPECT_NEAR(traj.final_state()(0), std::pow(0.5 + 1.0, 2), 1e-10);
}

TEST(Integrate, DeadbandKeepsOriginFixed)
{
  const auto traj = hmpc::integrate(scalar(0.5), v({0}), ControlSignal::zero(1, 1.0, 1), 1.0, 0.1);
  EXPECT_EQ(traj.final_state()(0), 0.0);
}

TEST(Integrate, FourthOrderConvergence)
{
  const auto sys = linear(-1.0, 1.0);
  const auto u = ControlSignal::constant(v({0.5}), 2.0);
  // x' = -x + 1/2 from 1: x(t) = 1/2 + e^{-t} / 2.
  const double exact = 0.5 + 0.5 * std::exp(-2.0);
  const double e1 = std::abs(hmpc::integrate(sys, v({1}), u, 2.0, 0.2).final_state()(0) - exact);
  const double e2 = std::abs(hmpc::integrate(sys, v({1}), u, 2.0, 0.1).final_state()(0) - exact);
  EXPECT_NEAR(e1 / e2, 16.0, 2.0);
}

TEST(Integrate, StepsAlignWithBreakpoints)
{
  const auto u = ControlSignal({0.0, 0.3, 1.0}, {v({1}), v({-1})});
  const auto traj = hmpc::integrate(linear(0.0, 1.0), v({0}), u, 1.0, 0.25);
  EXPECT_NEAR(traj.final_state()(0), 0.3 - 0.7, 1e-14);
  EXPECT_NE(std::find(traj.times.begin(), traj.times.end(), 0.3), traj.times.end());
}

TEST(Integrate, RunningCostMatchesQuadrature)
{
  const auto traj = hmpc::integrate(
    linear(0.0, 1.0), v({0}), ControlSignal::constant(v({1}), 1.0), 1.0, 0.1,
    {1e8, [](const Vector & x, const Vector &) { return x(0) * x(0); }});
  EXPECT_NEAR(traj.final_cost(), 1.0 / 3.0, 1e-12);
}

TEST(Integrate, RejectsBadArguments)
{
  const auto sys = linear(0.0, 1.0);
  const auto u = ControlSignal::constant(v({1}), 1.0);
  EXPECT_THROW(hmpc::integrate(sys, v({0}), u, 2.0, 0.1), std::invalid_argument);
  EXPECT_THROW(hmpc::integrate(sys, v({0}), u, 1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(hmpc::integrate(sys, v({0, 0}), u, 1.0, 0.1), hmpc::DimensionError);
}

TEST(ControlSignal, ValueLookupAndDilation)
{
  const ControlSignal u({0.0, 1.0, 2.0}, {v({1, 2}), v({3, 4})});
  EXPECT_EQ(u.value_at(0.5), v({1, 2}));
  EXPECT_EQ(u.value_at(1.0), v({3, 4}));
  EXPECT_EQ(u.value_at(5.0), v({3, 4}));
  const hmpc::DilationStructure ds(v({1, 2, 1}), v({1.5, 1.5}), 0.5);
  const auto d = u.dilated(ds, 4.0);
  EXPECT_DOUBLE_EQ(d.end_time(), 1.0);
  EXPECT_NEAR(d.values()[1](0), 24.0, 1e-12);
  EXPECT_THROW(ControlSignal({0.0, 0.0}, {v({1})}), std::invalid_argument);
}

double steer_residual(const Vector & x0, double D, double * cost = nullptr)
{
  const auto sys = hmpc::builtin("driftless3");
  const auto u = hmpc::steer_driftless_to_origin(x0, D);
  const auto l = hmpc::StageCost::homogeneous(*sys.declared_dilation());
  const auto traj = hmpc::integrate(
    sys, x0, u, u.end_time(), D / 64, {1e8, [&](const Vector & x, const Vector & w) { return l(x, w); }});
  if (cost != nullptr) {
    *cost = traj.final_cost();
  }
  return traj.final_state().norm();
}

TEST(Steering, Examples)
{
  const auto zero = hmpc::steer_driftless_to_origin(v({0, 0, 0}), 1.0);
  for (const auto & u : zero.values()) {
    EXPECT_TRUE(u.isZero(0.0));
  }
  EXPECT_LE(steer_residual(v({1, 0, 0}), 1.0), 1e-8);
  const auto stage1 = hmpc::steer_driftless_to_origin(v({0, 1, 0}), 1.0);
  EXPECT_NE(stage1.values()[0](1), 0.0);
  EXPECT_LE(steer_residual(v({0, 1, 0}), 1.0), 1e-8);
  EXPECT_THROW(hmpc::steer_driftless_to_origin(v({0, 1, 0}), 0.0), std::invalid_argument);
}

TEST(Steering, RandomStatesReachOriginWithBoundedCost)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    double cost = 0.0;
    EXPECT_LE(steer_residual(v({coord(rng), coord(rng), coord(rng)}), 1.0, &cost), 1e-8);
    EXPECT_TRUE(std::isfinite(cost));
    worst = std::max(worst, cost);
  }
  EXPECT_LT(worst, 1e5);
}

}  // namespace

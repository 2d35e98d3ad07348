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

#include <hmpc/ocp.hpp>
#include <hmpc/optimizer.hpp>

namespace {

using hmpc::OcpSpec;
using hmpc::StageCost;
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

OcpSpec scalar_spec(double k, double horizon, int segments)
{
  return OcpSpec{
    hmpc::builtin("scalar_power", {{{"k", k}}, {}, {}}),
    StageCost::weighted(v({1}), v({2 * k}), v({1}), v({2})), horizon, segments, 4, std::nullopt};
}

// Riccati value of x' = x + u, l = x^2 + u^2 on [0, T]: P(T) solves -P' = 2P - P^2 + 1, P = 0 at the end.
double riccati_value(double T)
{
  const double a = 1.0 + std::sqrt(2.0);
  const double b = 1.0 - std::sqrt(2.0);
  const double e = (a / b) * std::exp(-(a - b) * T);
  return (a - b * e) / (1.0 - e);
}

TEST(Bfgs, Rosenbrock)
{
  const auto f = [](const Vector & x) {
    return 100.0 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1.0 - x(0), 2);
  };
  const auto g = [](const Vector & x, double, Vector & out) {
    out.resize(2);
    out(0) = -400.0 * x(0) * (x(1) - x(0) * x(0)) - 2.0 * (1.0 - x(0));
    out(1) = 200.0 * (x(1) - x(0) * x(0));
  };
  const auto r = hmpc::minimize_bfgs(f, g, v({-1.2, 1.0}));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.x(0), 1.0, 1e-5);
  EXPECT_NEAR(r.x(1), 1.0, 1e-5);
}

TEST(Bfgs, RespectsBounds)
{
  const auto f = [](const Vector & x) { return (x(0) - 3.0) * (x(0) - 3.0); };
  const auto g = [](const Vector & x, double, Vector & out) { out = v({2.0 * (x(0) - 3.0)}); };
  const auto r = hmpc::minimize_bfgs(f, g, v({0.0}), {}, hmpc::BoxBounds{v({-1}), v({1})});
  EXPECT_NEAR(r.x(0), 1.0, 1e-12);
}

TEST(Solve, LinearQuadraticMatchesRiccati)
{
  const auto sol = hmpc::solve(scalar_spec(1.0, 2.0, 32), v({1}));
  EXPECT_NEAR(sol.objective, riccati_value(2.0), 0.01 * riccati_value(2.0));
  EXPECT_FALSE(sol.trajectory.escaped());
  EXPECT_NEAR(sol.trajectory.final_cost(), sol.objective, 1e-12);
}

TEST(Solve, LongHorizonApproachesInfiniteHorizonValue)
{
  const auto sol = hmpc::solve(scalar_spec(1.0, 8.0, 64), v({1}));
  EXPECT_NEAR(sol.objective, 1.0 + std::sqrt(2.0), 0.02 * (1.0 + std::sqrt(2.0)));
}

TEST(Solve, RefinementChangesLittle)
{
  const double coarse = hmpc::solve(scalar_spec(1.0, 2.0, 16), v({1})).objective;
  const double fine = hmpc::solve(scalar_spec(1.0, 2.0, 32), v({1})).objective;
  EXPECT_LT(std::abs(coarse - fine), 0.01 * fine);
}

TEST(Solve, OriginHasZeroValue)
{
  const auto sol = hmpc::solve(scalar_spec(1.0, 2.0, 8), v({0}), std::nullopt, 2);
  EXPECT_EQ(sol.objective, 0.0);
  for (const auto & u : sol.u_star.values()) {
    EXPECT_TRUE(u.isZero(0.0));
  }
}

TEST(Solve, QuadraticDriftlessStallsAtZero)
{
  const OcpSpec spec{
    hmpc::builtin("driftless3"),
    StageCost::quadratic(hmpc::Matrix::Identity(3, 3), hmpc::Matrix::Identity(2, 2)), 2.0, 8, 4,
    std::nullopt};
  const auto sol = hmpc::solve(spec, v({0, 0.2, 0}));
  EXPECT_LE(sol.gradient_norm, 1e-8);
  EXPECT_NEAR(sol.objective, 0.04 * 2.0, 1e-12);
  for (const auto & u : sol.u_star.values()) {
    EXPECT_TRUE(u.isZero(0.0));
  }
}

TEST(Solve, EscapesScoreInfinity)
{
  auto spec = scalar_spec(2.0, 2.0, 8);
  spec.bounds = hmpc::BoxBounds{v({-0.1}), v({0.1})};
  const auto sol = hmpc::solve(spec, v({2}), std::nullopt, 2);
  EXPECT_EQ(sol.objective, hmpc::kInfinity);
  EXPECT_FALSE(sol.converged);
}

TEST(Solve, DeterministicForSeed)
{
  hmpc::SolverOptions opts;
  opts.seed = 42;
  const auto a = hmpc::solve(scalar_spec(1.0, 1.0, 8), v({0.7}), std::nullopt, 3, opts);
  const auto b = hmpc::solve(scalar_spec(1.0, 1.0, 8), v({0.7}), std::nullopt, 3, opts);
  EXPECT_EQ(a.objective, b.objective);
  EXPECT_EQ(a.u_star.values(), b.u_star.values());
  EXPECT_EQ(a.restarts_used, 3);
}

TEST(ValueFunction, MonotoneInHorizon)
{
  const auto spec = scalar_spec(1.0, 4.0, 32);
  double previous = 0.0;
  for (double t : {0.5, 1.0, 2.0, 4.0}) {
    const double value = hmpc::value_function(spec, v({1}), t);
    EXPECT_GE(value, previous * (1.0 - 1e-4)) << "t=" << t;
    EXPECT_NEAR(value, riccati_value(t), 0.01 * riccati_value(t));
    previous = value;
  }
  EXPECT_EQ(hmpc::value_function(spec, v({0}), 2.0), 0.0);
  EXPECT_EQ(hmpc::truncated(spec, 1.0).segments, 8);
  EXPECT_EQ(hmpc::truncated(spec, 0.3).segments, 3);
}

TEST(ValueFunction, DynamicProgrammingConsistency)
{
  const auto spec = scalar_spec(1.0, 2.0, 16);
  const double whole = hmpc::value_function(spec, v({1}), 2.0);
  for (double u0 : {-2.0, -1.0, 0.0}) {
    const auto head = hmpc::integrate(
      spec.sys, v({1}), hmpc::ControlSignal::constant(v({u0}), 1.0), 1.0, 1e-3,
      {1e8, [&](const Vector & x, const Vector & u) { return spec.cost(x, u); }});
    const double tail = hmpc::value_function(spec, head.final_state(), 1.0);
    EXPECT_LE(whole, head.final_cost() + tail + 1e-6);
  }
}

TEST(ValueFunction, HomogeneousScaling)
{
  const auto sys = hmpc::builtin("driftless3");
  const auto & ds = *sys.declared_dilation();
  const OcpSpec spec{sys, StageCost::homogeneous(ds), 2.0, 8, 4, std::nullopt};
  const Vector x0 = v({0.5, 0.5, 0.5});
  const double alpha = 0.5;
  const double base = hmpc::value_function(spec, x0, 2.0, 4);
  const double scaled = hmpc::value_function(spec, hmpc::dilate_state(ds, alpha, x0), 2.0, 4);
  EXPECT_NEAR(scaled, std::pow(alpha, ds.d()) * base, 0.02 * std::pow(alpha, ds.d()) * base);
}

TEST(Hjb, ClosedForm)
{
  EXPECT_NEAR(hmpc::hjb_oracle_1d(1.0, 1.0), 1.0 + std::sqrt(2.0), 1e-12);
  EXPECT_EQ(hmpc::hjb_oracle_1d(0.5, 0.0), 0.0);
  EXPECT_NEAR(hmpc::hjb_oracle_1d(0.5, 4.0), 25.752, 1e-3);
  EXPECT_EQ(hmpc::hjb_oracle_1d(0.5, -4.0), hmpc::hjb_oracle_1d(0.5, 4.0));
}

TEST(Hjb, AgreesWithIntegratedDerivative)
{
  // V(x) = int_0^x 2 (1 + sqrt 2) |s|^k ds by composite Simpson.
  for (double k : {0.5, 1.0, 2.0}) {
    const double x = 4.0;
    const int n = 20000;
    const double h = x / n;
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      sum += w * 2.0 * (1.0 + std::sqrt(2.0)) * std::pow(i * h, k);
    }
    EXPECT_NEAR(sum * h / 3.0, hmpc::hjb_oracle_1d(k, x), 1e-6 * hmpc::hjb_oracle_1d(k, x));
  }
}

TEST(Hjb, ScalarSquareRootValueAtModerateHorizon)
{
  const double value = hmpc::value_function(scalar_spec(0.5, 3.0, 64), v({1}), 3.0);
  const double oracle = hmpc::hjb_oracle_1d(0.5, 1.0);
  // Piecewise-constant controls may land slightly above the continuous-time value.
  EXPECT_NEAR(value, oracle, 0.05 * oracle);
}

TEST(OcpSpec, Validation)
{
  auto spec = scalar_spec(1.0, 1.0, 0);
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = scalar_spec(1.0, -1.0, 4);
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  EXPECT_THROW(hmpc::solve(scalar_spec(1.0, 1.0, 4), v({1, 2})), hmpc::DimensionError);
}

}  // namespace

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
#include <hmpc/dilation.hpp>
#include <hmpc/systems.hpp>

namespace {

using hmpc::DilationStructure;
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

const DilationStructure kDriftless(v({1, 2, 1}), v({1, 1}), 0.0);

TEST(HomogeneousCost, RobotWeights)
{
  const auto l = StageCost::homogeneous(kDriftless);
  const Vector x = v({0.3, -1.2, 2.0});
  const Vector u = v({-0.7, 1.1});
  const double expected = std::pow(0.3, 4) + 1.44 + 16.0 + std::pow(0.7, 4) + std::pow(1.1, 4);
  EXPECT_NEAR(l(x, u), expected, 1e-13);
  EXPECT_EQ(l(v({0, 0, 0}), v({0, 0})), 0.0);
  EXPECT_EQ(l.kind(), hmpc::CostKind::homogeneous);
}

TEST(HomogeneousCost, UnitWeightsGiveQuadratic)
{
  const auto l = StageCost::homogeneous(DilationStructure(v({1}), v({1}), 0.0));
  EXPECT_DOUBLE_EQ(l(v({-3}), v({2})), 13.0);
}

TEST(EllStar, Examples)
{
  const auto l = StageCost::homogeneous(kDriftless);
  EXPECT_DOUBLE_EQ(l.ell_star(v({1, 1, 1})), 3.0);
  const auto q = StageCost::quadratic(hmpc::Matrix::Identity(3, 3), hmpc::Matrix::Identity(2, 2));
  EXPECT_NEAR(q.ell_star(v({0, 0.2, 0})), 0.04, 1e-16);
  const Vector x = v({0.4, -0.9, 1.3});
  for (double a : {0.1, 0.5, 2.0}) {
    EXPECT_NEAR(
      l.ell_star(hmpc::dilate_state(kDriftless, a, x)), std::pow(a, 4) * l.ell_star(x),
      1e-13 * (1.0 + l.ell_star(x)));
  }
}

TEST(CostProperties, SeparabilityPositivityAndRays)
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  const auto l = StageCost::homogeneous(kDriftless);
  const auto w = StageCost::weighted(kDriftless, v({2, 0.5, 1}), v({3, 1}));
  for (int i = 0; i < 100; ++i) {
    const Vector x = v({c(rng), c(rng), c(rng)});
    const Vector u = v({c(rng), c(rng)});
    for (const auto * cost : {&l, &w}) {
      EXPECT_NEAR((*cost)(x, u), cost->ell_star(x) + (*cost)(Vector::Zero(3), u), 1e-12);
      EXPECT_GT(cost->ell_star(x), 0.0);
    }
    double previous = l.ell_star(x);
    for (double a = 0.5; a > 1e-9; a *= 0.5) {
      const double now = l.ell_star(a * x);
      EXPECT_LT(now, previous);
      previous = now;
    }
    EXPECT_LT(previous, 1e-12);
  }
}

TEST(WeightedCost, ExplicitExponents)
{
  // Scalar example: |x|^{2k} + u^2 with k = 0.5.
  const auto l = StageCost::weighted(v({1}), v({1}), v({1}), v({2}));
  EXPECT_DOUBLE_EQ(l(v({-4}), v({3})), 13.0);
  EXPECT_DOUBLE_EQ(l.control_growth(0), 2.0);
  EXPECT_THROW(StageCost::weighted(v({1}), v({0.5}), v({1}), v({2})), std::invalid_argument);
  EXPECT_THROW(StageCost::weighted(v({-1}), v({2}), v({1}), v({2})), std::invalid_argument);
}

TEST(QuadraticCost, Validation)
{
  hmpc::Matrix Q = hmpc::Matrix::Identity(2, 2);
  Q(0, 1) = 0.5;
  EXPECT_THROW(StageCost::quadratic(Q, hmpc::Matrix::Identity(1, 1)), std::invalid_argument);
  hmpc::Matrix indefinite = hmpc::Matrix::Identity(2, 2);
  indefinite(1, 1) = -1.0;
  EXPECT_THROW(StageCost::quadratic(indefinite, hmpc::Matrix::Identity(1, 1)), std::invalid_argument);
  const auto q = StageCost::quadratic(2.0 * hmpc::Matrix::Identity(2, 2), hmpc::Matrix::Identity(1, 1));
  EXPECT_DOUBLE_EQ(q(v({1, -1}), v({3})), 13.0);
}

// Closed form for driftless3 under constant u from x0.
Vector driftless_state(const Vector & x0, const Vector & u, double t)
{
  return v({x0(0) + u(0) * t, x0(1) + u(0) * (x0(2) * t + 0.5 * u(1) * t * t), x0(2) + u(1) * t});
}

TEST(CostHomogeneity, DriftlessMatchesClosedForm)
{
  const auto sys = hmpc::builtin("driftless3");
  const auto l = StageCost::homogeneous(kDriftless);
  const Vector x0 = v({1, 1, 1});
  const Vector u = v({0.5, -0.5});
  const auto r = hmpc::check_cost_homogeneity(sys, l, kDriftless, x0, hmpc::ControlSignal::constant(u, 1.0), 2.0);
  EXPECT_FALSE(r.escaped());
  EXPECT_LE(r.max_ratio_error, 1e-6);
  EXPECT_GT(r.points, 10u);

  const Vector x0s = hmpc::dilate_state(kDriftless, 2.0, x0);
  const Vector us = hmpc::dilate_control(kDriftless, 2.0, u);
  for (double t = 0.0; t <= 1.0; t += 0.125) {
    const double scaled = l(driftless_state(x0s, us, t), us);
    const double base = l(driftless_state(x0, u, t), u);
    EXPECT_NEAR(scaled / base, 16.0, 1e-12);
  }
  const auto same = hmpc::check_cost_homogeneity(
    sys, l, kDriftless, x0, hmpc::ControlSignal::constant(u, 1.0), 1.0);
  EXPECT_EQ(same.max_ratio_error, 0.0);
}

TEST(CostHomogeneity, ScalarNegativeDegree)
{
  const auto sys = hmpc::builtin("scalar_power", {{{"k", 0.5}}, {}, {}});
  const auto & ds = *sys.declared_dilation();
  const auto l = StageCost::homogeneous(ds);
  const auto u = hmpc::ControlSignal::uniform(1.0, {v({0.2}), v({-0.4})});
  const auto r = hmpc::check_cost_homogeneity(sys, l, ds, v({0.7}), u, 0.5);
  EXPECT_FALSE(r.escaped());
  EXPECT_LE(r.max_ratio_error, 1e-6);
}

}  // namespace

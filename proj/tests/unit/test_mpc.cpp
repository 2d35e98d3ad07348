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

#include <hmpc/mpc.hpp>

namespace {

using hmpc::MpcConfig;
using hmpc::StageCost;
using hmpc::Verdict;
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

StageCost scalar_cost(double k)
{
  return StageCost::weighted(v({1}), v({2 * k}), v({1}), v({2}));
}

MpcConfig lqr_config(double horizon)
{
  MpcConfig cfg;
  cfg.horizon = horizon;
  cfg.delta = 0.1;
  cfg.segments = static_cast<int>(std::lround(horizon / 0.05));
  cfg.steps = 60;
  cfg.restarts = 0;
  return cfg;
}

TEST(MpcConfig, Validation)
{
  MpcConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.shift_segments(), 1);
  cfg.delta = 0.3;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.delta = 3.0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg = MpcConfig{};
  cfg.steps = -1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(MpcEnums, Parsing)
{
  EXPECT_EQ(hmpc::parse_warm_start("zero"), hmpc::WarmStart::zero);
  EXPECT_EQ(hmpc::parse_warm_start("shift_and_hold"), hmpc::WarmStart::shift_and_hold);
  EXPECT_EQ(hmpc::parse_convergence_norm("euclidean"), hmpc::ConvergenceNorm::euclidean);
  EXPECT_THROW(hmpc::parse_warm_start("warm"), std::invalid_argument);
  EXPECT_STREQ(hmpc::to_string(Verdict::stalled), "stalled");
}

TEST(NextInitialGuess, ShiftAndHold)
{
  MpcConfig cfg;
  cfg.horizon = 1.0;
  cfg.segments = 4;
  cfg.delta = 0.5;
  const auto prev = hmpc::ControlSignal::uniform(1.0, {v({1}), v({2}), v({3}), v({4})});
  const auto next = hmpc::next_initial_guess(prev, cfg);
  ASSERT_EQ(next.segments(), 4u);
  EXPECT_EQ(next.values()[0], v({3}));
  EXPECT_EQ(next.values()[1], v({4}));
  EXPECT_EQ(next.values()[2], v({4}));
  EXPECT_EQ(next.values()[3], v({4}));
  cfg.warm_start = hmpc::WarmStart::zero;
  EXPECT_TRUE(hmpc::next_initial_guess(prev, cfg).values()[0].isZero(0.0));
  cfg.warm_start = hmpc::WarmStart::previous;
  EXPECT_EQ(hmpc::next_initial_guess(prev, cfg).values(), prev.values());
}

TEST(ClosedLoop, OriginConvergesImmediately)
{
  const auto r = hmpc::run_closed_loop(scalar(1.0), scalar_cost(1.0), lqr_config(1.0), v({0}));
  EXPECT_EQ(r.verdict, Verdict::converged);
  ASSERT_EQ(r.steps.size(), 1u);
  EXPECT_TRUE(r.steps[0].control.isZero(0.0));
  EXPECT_EQ(r.steps[0].value, 0.0);
}

// Riccati value of x' = x + u, l = x^2 + u^2 on [0, T]; also the feedback gain with T to go.
double riccati_value(double T)
{
  const double a = 1.0 + std::sqrt(2.0);
  const double b = 1.0 - std::sqrt(2.0);
  const double e = (a / b) * std::exp(-(a - b) * T);
  return (a - b * e) / (1.0 - e);
}

TEST(ClosedLoop, LinearSweepFollowsRecedingGain)
{
  // At T = 1 the contraction rate is about P(0.95) - 1 = 0.6, so 60 steps of 0.1 are not enough.
  auto cfg = lqr_config(1.0);
  cfg.steps = 150;
  const auto sweep = hmpc::horizon_sweep(scalar(1.0), scalar_cost(1.0), cfg, v({1}), {0.2, 0.5, 1.0, 2.0});
  ASSERT_EQ(sweep.rows.size(), 4u);
  for (const auto & row : sweep.rows) {
    // The applied gain P(T - s), s in [0, delta), must beat the drift coefficient 1.
    const bool stable = riccati_value(row.horizon - cfg.delta) > 1.0;
    if (stable) {
      EXPECT_EQ(row.verdict, Verdict::converged) << "T=" << row.horizon;
      EXPECT_LE(std::abs(row.final_state(0)), 1e-2);
    } else {
      EXPECT_NE(row.verdict, Verdict::converged) << "T=" << row.horizon;
      EXPECT_GT(std::abs(row.final_state(0)), 1.0);
    }
  }
  ASSERT_TRUE(sweep.smallest_converged);
  EXPECT_DOUBLE_EQ(*sweep.smallest_converged, 1.0);
}

TEST(ClosedLoop, WarmStartAndAppliedControlContracts)
{
  const auto cfg = lqr_config(1.0);
  const auto r = hmpc::run_closed_loop(scalar(1.0), scalar_cost(1.0), cfg, v({1}));
  ASSERT_GE(r.solutions.size(), 3u);
  const int shift = cfg.shift_segments();
  for (std::size_t k = 0; k + 1 < r.solutions.size(); ++k) {
    const auto & sol = r.solutions[k].values();
    const auto & guess = r.initial_guesses[k + 1].values();
    ASSERT_EQ(guess.size(), sol.size());
    for (std::size_t i = 0; i + shift < sol.size(); ++i) {
      EXPECT_EQ(guess[i], sol[i + shift]);
    }
    for (std::size_t i = sol.size() - shift; i < sol.size(); ++i) {
      EXPECT_EQ(guess[i], sol.back());
    }
  }
  ASSERT_EQ(r.applied.size() + 1, r.steps.size());
  for (std::size_t k = 0; k < r.applied.size(); ++k) {
    EXPECT_DOUBLE_EQ(r.applied[k].end_time(), cfg.delta);
    for (int i = 0; i < shift; ++i) {
      EXPECT_EQ(r.applied[k].values()[i], r.solutions[k].values()[i]);
    }
    EXPECT_EQ(r.steps[k].control, r.solutions[k].values().front());
    EXPECT_NEAR(r.steps[k + 1].time - r.steps[k].time, cfg.delta, 1e-12);
  }
}

TEST(ClosedLoop, ValueDecreasesOnConvergedRun)
{
  const auto r = hmpc::run_closed_loop(scalar(1.0), scalar_cost(1.0), lqr_config(2.0), v({1}));
  ASSERT_EQ(r.verdict, Verdict::converged);
  EXPECT_LE(r.decrease_violations, static_cast<int>(0.05 * r.steps.size()) + 1);
  for (std::size_t k = 0; k + 1 < r.steps.size(); ++k) {
    if (r.steps[k + 1].value >= r.steps[k].value) {
      EXPECT_LE(r.steps[k + 1].value - r.steps[k].value, 1e-6 * r.steps[k].value + 1e-12);
    }
  }
}

TEST(ClosedLoop, QuadraticDriftlessStalls)
{
  MpcConfig cfg;
  cfg.horizon = 1.0;
  cfg.segments = 4;
  cfg.delta = 0.25;
  cfg.steps = 20;
  cfg.restarts = 0;
  cfg.warm_start = hmpc::WarmStart::zero;
  cfg.convergence_norm = hmpc::ConvergenceNorm::euclidean;
  const auto r = hmpc::run_closed_loop(
    hmpc::builtin("driftless3"),
    StageCost::quadratic(hmpc::Matrix::Identity(3, 3), hmpc::Matrix::Identity(2, 2)), cfg,
    v({0, 0.2, 0}));
  EXPECT_EQ(r.verdict, Verdict::stalled);
  EXPECT_LE(r.max_displacement, 1e-6);
  EXPECT_EQ(r.steps.size(), 21u);
}

TEST(ClosedLoop, PlantEscapeIsDiverged)
{
  MpcConfig cfg;
  cfg.horizon = 0.5;
  cfg.segments = 2;
  cfg.delta = 0.25;
  cfg.steps = 10;
  cfg.restarts = 0;
  cfg.solver.max_iterations = 0;
  cfg.warm_start = hmpc::WarmStart::zero;
  const auto r = hmpc::run_closed_loop(scalar(2.0), scalar_cost(2.0), cfg, v({50}));
  EXPECT_EQ(r.verdict, Verdict::diverged);
}

TEST(ConvergenceMeasure, UsesDilatedNormByDefault)
{
  const auto sys = hmpc::builtin("driftless3");
  const auto cost = StageCost::homogeneous(*sys.declared_dilation());
  MpcConfig cfg;
  const Vector x = v({0, 1e-4, 0});
  EXPECT_NEAR(hmpc::convergence_measure(sys, cost, cfg, x), 1e-2, 1e-15);
  cfg.convergence_norm = hmpc::ConvergenceNorm::euclidean;
  EXPECT_NEAR(hmpc::convergence_measure(sys, cost, cfg, x), 1e-4, 1e-18);
}

}  // namespace

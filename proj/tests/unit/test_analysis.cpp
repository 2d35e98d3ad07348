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

#include <hmpc/analysis.hpp>

namespace {

using hmpc::GrowthOptions;
using hmpc::SampleSet;
using hmpc::SampleSetKind;
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

hmpc::ControlSystem scalar(double k)
{
  return hmpc::builtin("scalar_power", {{{"k", k}}, {}, {}});
}

StageCost scalar_cost(double k)
{
  return StageCost::weighted(v({1}), v({2 * k}), v({1}), v({2}));
}

double riccati_value(double T)
{
  const double a = 1.0 + std::sqrt(2.0);
  const double b = 1.0 - std::sqrt(2.0);
  const double e = (a / b) * std::exp(-(a - b) * T);
  return (a - b * e) / (1.0 - e);
}

GrowthOptions options(std::vector<double> t_grid, int samples, int segments, int restarts)
{
  GrowthOptions o;
  o.t_grid = std::move(t_grid);
  o.samples = samples;
  o.segments = segments;
  o.restarts = restarts;
  return o;
}

TEST(BoundedExtension, GeometricSeries)
{
  hmpc::GrowthTable table;
  table.t_grid = {1.0, 2.0};
  table.b_values = {1.0, 2.0};
  EXPECT_NEAR(hmpc::check_bounded_extension(table, 0.5, 4.0, 1), 32.0 / 15.0, 1e-15);
  EXPECT_NEAR(hmpc::check_bounded_extension(table, 1e-6, 4.0, 1), 2.0, 1e-15);
  EXPECT_THROW(hmpc::check_bounded_extension(table, 0.0, 4.0, 1), std::invalid_argument);
  EXPECT_THROW(hmpc::check_bounded_extension(table, 1.0, 4.0, 1), std::invalid_argument);
  EXPECT_THROW(hmpc::check_bounded_extension(table, 0.5, 0.0, 1), std::invalid_argument);
  EXPECT_THROW(hmpc::check_bounded_extension(table, 0.5, 4.0, 2), std::out_of_range);
}

TEST(SampleSets, BoxCornersExclusionAndDeterminism)
{
  SampleSet set;
  set.radius = 2.0;
  set.exclude = 0.5;
  const auto a = hmpc::sample_set(set, 2, 20, 9);
  const auto b = hmpc::sample_set(set, 2, 20, 9);
  ASSERT_EQ(a.size(), 20u);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a[0].cwiseAbs(), v({2, 2}));
  for (const auto & x : a) {
    EXPECT_LE(x.lpNorm<Eigen::Infinity>(), 2.0);
    EXPECT_GE(x.lpNorm<Eigen::Infinity>(), 0.5);
  }
  const auto prefix = hmpc::sample_set(set, 2, 10, 9);
  EXPECT_TRUE(std::equal(prefix.begin(), prefix.end(), a.begin()));
  set.exclude = 2.0;
  EXPECT_THROW(hmpc::sample_set(set, 2, 4, 1), std::invalid_argument);
}

TEST(SampleSets, AnnulusLevels)
{
  const auto ds = *hmpc::builtin("driftless3").declared_dilation();
  SampleSet set;
  set.kind = SampleSetKind::annulus;
  set.c1 = 0.1;
  set.c2 = 1.0;
  const auto pts = hmpc::sample_set(set, 3, 64, 4, ds);
  ASSERT_EQ(pts.size(), 64u);
  for (const auto & x : pts) {
    const double level = hmpc::dilated_norm_power(ds, x);
    EXPECT_GE(level, 0.1 - 1e-12);
    EXPECT_LE(level, 1.0 + 1e-12);
  }
  EXPECT_THROW(hmpc::sample_set(set, 3, 4, 1), std::invalid_argument);
  EXPECT_EQ(hmpc::parse_sample_set_kind("annulus"), SampleSetKind::annulus);
  EXPECT_THROW(hmpc::parse_sample_set_kind("ball"), std::invalid_argument);
}

TEST(EstimateGrowth, LinearRatioIsRiccatiValue)
{
  SampleSet set;
  set.exclude = 0.01;
  const auto table = hmpc::estimate_growth(scalar(1.0), scalar_cost(1.0), set, options({1.0, 4.0}, 6, 32, 2));
  ASSERT_EQ(table.b_values.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    const double ref = riccati_value(table.t_grid[i]);
    EXPECT_NEAR(table.b_values[i], ref, 0.02 * ref);
    for (double r : table.ratios[i]) {
      EXPECT_NEAR(r, ref, 0.02 * ref);
    }
  }
  EXPECT_EQ(table.monotone_violations, 0);
  EXPECT_FALSE(table.unbounded_trend);
  EXPECT_EQ(table.samples_per_t, 6);
  EXPECT_EQ(table.states.size(), 6u);
  EXPECT_THROW(
    hmpc::estimate_growth(scalar(1.0), scalar_cost(1.0), set, options({}, 4, 8, 0)),
    std::invalid_argument);
  EXPECT_THROW(
    hmpc::estimate_growth(scalar(1.0), scalar_cost(1.0), set, options({2.0, 1.0}, 4, 8, 0)),
    std::invalid_argument);
}

TEST(EstimateGrowth, RicherSamplingDominates)
{
  SampleSet set;
  set.exclude = 0.05;
  const auto sparse = hmpc::estimate_growth(scalar(0.5), scalar_cost(0.5), set, options({0.5, 1.0}, 3, 16, 1));
  const auto rich = hmpc::estimate_growth(scalar(0.5), scalar_cost(0.5), set, options({0.5, 1.0}, 7, 16, 1));
  for (std::size_t i = 0; i < sparse.b_values.size(); ++i) {
    EXPECT_GE(rich.b_values[i], sparse.b_values[i]);
  }
}

TEST(EstimateGrowth, PositiveDegreeTrendIsFlagged)
{
  SampleSet set;
  set.kind = SampleSetKind::points;
  set.points = {v({0.5}), v({0.25})};
  const auto table = hmpc::estimate_growth(scalar(2.0), scalar_cost(2.0), set, options({20.0}, 2, 64, 2));
  const auto & r = table.ratios.back();
  EXPECT_NEAR(r[1] / r[0], 2.0, 0.6);
  EXPECT_TRUE(table.unbounded_trend);
  EXPECT_LT(table.trend_slope, -0.05);
}

TEST(EstimateGrowth, HomogeneousRatioIsScaleInvariant)
{
  const auto sys = hmpc::builtin("driftless3");
  const auto & ds = *sys.declared_dilation();
  const Vector x = v({0.6, -0.4, 0.5});
  SampleSet set;
  set.kind = SampleSetKind::points;
  set.points = {x, hmpc::dilate_state(ds, 0.5, x)};
  const auto table =
    hmpc::estimate_growth(sys, StageCost::homogeneous(ds), set, options({2.0}, 2, 8, 4));
  const auto & r = table.ratios.back();
  EXPECT_NEAR(r[1], r[0], 0.02 * r[0]);
}

TEST(Remark2, DampedSystemStaysBelowOne)
{
  const auto sys = hmpc::builtin("damped1d");
  const auto cost = StageCost::weighted(v({1}), v({1}), v({1}), v({1}));
  const std::vector<double> t_grid{0.1, 1.0, 5.0};
  const auto report = hmpc::check_remark2_condition(sys, cost, t_grid, {1.0, -1.0, 2.0}, options({}, 0, 32, 2));
  EXPECT_TRUE(report.pass);
  EXPECT_LT(report.max_ratio, 1.0);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    // The free solution x(s) = 1 / (1 + s) costs ln(1 + t).
    EXPECT_LE(report.ratios[i][0], std::log1p(t) / t + 1e-6);
    EXPECT_LE(report.ratios[i][1], std::log1p(t) / t + 1e-6);
  }
  EXPECT_LE(report.ratios[0][2], 1.0 + 1e-9);
  EXPECT_THROW(
    hmpc::check_remark2_condition(sys, cost, t_grid, {0.0}, options({}, 0, 8, 0)), std::invalid_argument);
  EXPECT_THROW(
    hmpc::check_remark2_condition(hmpc::builtin("driftless3"), StageCost::homogeneous(*hmpc::builtin("driftless3").declared_dilation()), t_grid, {1.0}, options({}, 0, 8, 0)),
    hmpc::DimensionError);
}

}  // namespace

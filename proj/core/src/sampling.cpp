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

#include "hmpc/sampling.hpp"

#include <boost/random/sobol.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

namespace hmpc {

std::vector<double> log_space(double lo, double hi, int count)
{
  if (count < 1 || !(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("log_space: need count >= 1 and 0 < lo <= hi");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = hi;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> lin_space(double lo, double hi, int count)
{
  if (count < 1) {
    throw std::invalid_argument("lin_space: need count >= 1");
  }
  std::vector<double> out(static_cast<std::size_t>(count));
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  }
  out.back() = hi;
  return out;
}

std::vector<double> alpha_grid(const SamplingPlan & plan)
{
  if (!(plan.alpha_min > 0.0) || !(plan.alpha_max >= plan.alpha_min)) {
    throw std::invalid_argument("SamplingPlan: need 0 < alpha_min <= alpha_max");
  }
  return log_space(plan.alpha_min, plan.alpha_max, plan.alpha_points);
}

Matrix scrambled_sobol(int dim, int count, std::uint64_t seed)
{
  if (dim < 1 || count < 0) {
    throw std::invalid_argument("scrambled_sobol: need dim >= 1 and count >= 0");
  }
  boost::random::sobol engine(static_cast<std::size_t>(dim));
  // The first point of the raw sequence is the origin; skip it.
  engine.discard(static_cast<std::uintmax_t>(dim));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vector shift(dim);
  for (int k = 0; k < dim; ++k) {
    shift(k) = unit(rng);
  }

  const double scale = 1.0 / (static_cast<double>(engine.max()) + 1.0);
  Matrix points(count, dim);
  for (int i = 0; i < count; ++i) {
    for (int k = 0; k < dim; ++k) {
      double v = static_cast<double>(engine()) * scale + shift(k);
      v -= std::floor(v);
      points(i, k) = v;
    }
  }
  return points;
}

}  // namespace hmpc

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

#include "hmpc/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace hmpc {

double canonical_exponent(const Vector & r)
{
  return 2.0 * r.prod();
}

DilationStructure::DilationStructure(Vector r, Vector s, double tau)
: r_(std::move(r)), s_(std::move(s)), tau_(tau), d_(canonical_exponent(r_))
{
  validate();
}

DilationStructure::DilationStructure(Vector r, Vector s, double tau, double d)
: r_(std::move(r)), s_(std::move(s)), tau_(tau), d_(d)
{
  validate();
}

DilationStructure DilationStructure::with_admissible_exponent(Vector r, Vector s, double tau)
{
  double d = canonical_exponent(r);
  if (r.size() > 0) {
    d = std::max(d, r.maxCoeff());
  }
  if (s.size() > 0) {
    d = std::max(d, s.maxCoeff());
  }
  return DilationStructure(std::move(r), std::move(s), tau, d);
}

void DilationStructure::validate() const
{
  if (r_.size() == 0) {
    throw std::invalid_argument("DilationStructure: state weights must not be empty");
  }
  if (!(r_.array() > 0.0).all() || !r_.allFinite()) {
    throw std::invalid_argument("DilationStructure: state weights r_i must be positive");
  }
  if (!(s_.array() > 0.0).all() || !s_.allFinite()) {
    throw std::invalid_argument("DilationStructure: control weights s_j must be positive");
  }
  if (!std::isfinite(tau_) || !(tau_ > -r_.minCoeff())) {
    throw std::invalid_argument("DilationStructure: degree tau must exceed -min_i r_i");
  }
  if (!std::isfinite(d_) || !(d_ > 0.0)) {
    throw std::invalid_argument("DilationStructure: exponent d must be positive");
  }
  // Exponents below one make the cost non-Lipschitz at the origin.
  for (Eigen::Index i = 0; i < r_.size(); ++i) {
    if (d_ / r_(i) < 1.0) {
      throw std::invalid_argument(
        "DilationStructure: d / r_" + std::to_string(i + 1) + " < 1; raise d");
    }
  }
  for (Eigen::Index j = 0; j < s_.size(); ++j) {
    if (d_ / s_(j) < 1.0) {
      throw std::invalid_argument(
        "DilationStructure: d / s_" + std::to_string(j + 1) + " < 1; raise d");
    }
  }
}

bool DilationStructure::operator==(const DilationStructure & other) const
{
  return r_.size() == other.r_.size() && s_.size() == other.s_.size() && r_ == other.r_ &&
         s_ == other.s_ && tau_ == other.tau_ && d_ == other.d_;
}

namespace {

Vector dilate(const Vector & weights, double alpha, const Vector & v, const char * what)
{
  if (!(alpha >= 0.0)) {
    throw std::invalid_argument(std::string(what) + ": alpha must be nonnegative");
  }
  require_dimension(v, weights.size(), what);
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(i) = std::pow(alpha, weights(i)) * v(i);
  }
  return out;
}

}  // namespace

Vector dilate_state(const DilationStructure & ds, double alpha, const Vector & x)
{
  return dilate(ds.state_weights(), alpha, x, "dilate_state");
}

Vector dilate_control(const DilationStructure & ds, double alpha, const Vector & u)
{
  return dilate(ds.control_weights(), alpha, u, "dilate_control");
}

double dilated_norm_power(const DilationStructure & ds, const Vector & x)
{
  require_dimension(x, ds.n(), "dilated_norm");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    sum += std::pow(std::abs(x(i)), ds.state_exponent(i));
  }
  return sum;
}

double dilated_norm(const DilationStructure & ds, const Vector & x)
{
  return std::pow(dilated_norm_power(ds, x), 1.0 / ds.d());
}

}  // namespace hmpc

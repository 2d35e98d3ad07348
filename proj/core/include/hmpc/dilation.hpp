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

#ifndef HMPC_DILATION_HPP_
#define HMPC_DILATION_HPP_

/**
 * @file
 * @brief Anisotropic dilations and the dilated norm.
 *
 * A dilation structure (r, s, tau) acts on states by x_i -> alpha^{r_i} x_i and on
 * controls by u_j -> alpha^{s_j} u_j. A vector field f is homogeneous of degree tau when
 * f(L_alpha x, D_alpha u) = alpha^tau L_alpha f(x, u) for every alpha >= 0.
 *
 * The dilated norm N(x) = (sum_i |x_i|^{d/r_i})^{1/d} satisfies N(L_alpha x) = alpha N(x).
 */

#include "hmpc/types.hpp"

namespace hmpc {

class DilationStructure
{
public:
  /// Canonical structure with exponent d = 2 * prod_i r_i.
  DilationStructure(Vector r, Vector s, double tau);

  /// Structure with an explicit dilated-norm exponent d.
  DilationStructure(Vector r, Vector s, double tau, double d);

  /**
   * @brief Canonical exponent raised, if needed, so that every d / r_i and d / s_j is >= 1.
   *
   * Costs built from the structure then stay Lipschitz at the origin.
   */
  static DilationStructure with_admissible_exponent(Vector r, Vector s, double tau);

  const Vector & state_weights() const { return r_; }
  const Vector & control_weights() const { return s_; }
  double tau() const { return tau_; }
  double d() const { return d_; }
  Eigen::Index n() const { return r_.size(); }
  Eigen::Index m() const { return s_.size(); }

  /// Exponent d / r_i applied to |x_i| in the dilated norm and in stage costs.
  double state_exponent(Eigen::Index i) const { return d_ / r_(i); }
  double control_exponent(Eigen::Index j) const { return d_ / s_(j); }

  bool operator==(const DilationStructure & other) const;

private:
  void validate() const;

  Vector r_;
  Vector s_;
  double tau_;
  double d_;
};

double canonical_exponent(const Vector & r);

Vector dilate_state(const DilationStructure & ds, double alpha, const Vector & x);
Vector dilate_control(const DilationStructure & ds, double alpha, const Vector & u);

/// (sum_i |x_i|^{d/r_i})^{1/d}
double dilated_norm(const DilationStructure & ds, const Vector & x);

/// N(x)^d, i.e. sum_i |x_i|^{d/r_i}; avoids the round trip through the 1/d root.
double dilated_norm_power(const DilationStructure & ds, const Vector & x);

}  // namespace hmpc

#endif  // HMPC_DILATION_HPP_

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

#ifndef HMPC_COST_HPP_
#define HMPC_COST_HPP_

#include <cmath>
#include <optional>
#include <string>

#include "hmpc/dilation.hpp"
#include "hmpc/systems.hpp"
#include "hmpc/types.hpp"

namespace hmpc {

enum class CostKind { homogeneous, weighted_homogeneous, quadratic };

const char * to_string(CostKind kind);

/**
 * @brief Running cost l(x, u) >= 0 with l(0, 0) = 0.
 *
 * Homogeneous kinds are separable power sums
 *   l(x, u) = sum_i q_i |x_i|^{p_i} + sum_j w_j |u_j|^{e_j},
 * where the homogeneous kind uses q = w = 1, p_i = d / r_i and e_j = d / s_j.
 * The quadratic kind is x^T Q x + u^T R u.
 */
class StageCost
{
public:
  static StageCost homogeneous(const DilationStructure & ds);

  /// Weighted power sum with exponents d / r_i and d / s_j taken from ds.
  static StageCost weighted(const DilationStructure & ds, Vector q_x, Vector q_u);

  /// Weighted power sum with explicit exponents (all must be >= 1).
  static StageCost weighted(
    Vector q_x, Vector state_exponents, Vector q_u, Vector control_exponents);

  /// Q and R must be symmetric positive definite.
  static StageCost quadratic(Matrix Q, Matrix R);

  double operator()(const Vector & x, const Vector & u) const
  {
    return state_part(x) + control_part(u);
  }

  /// inf_u l(x, u); the control part vanishes at u = 0 for every kind.
  double ell_star(const Vector & x) const { return state_part(x); }

  double state_part(const Vector & x) const;
  double control_part(const Vector & u) const;

  CostKind kind() const { return kind_; }
  Eigen::Index n() const { return n_; }
  Eigen::Index m() const { return m_; }
  const std::optional<DilationStructure> & dilation() const { return ds_; }
  const Vector & state_weights() const { return q_x_; }
  const Vector & control_weights() const { return q_u_; }
  const Vector & state_exponents() const { return p_x_; }
  const Vector & control_exponents() const { return p_u_; }
  const Matrix & Q() const { return Q_; }
  const Matrix & R() const { return R_; }

  /// Growth exponent of l in u_j: |u_j|^{e_j} for power sums, 2 for quadratic costs.
  double control_growth(Eigen::Index j) const;

private:
  StageCost() = default;

  CostKind kind_ = CostKind::homogeneous;
  Eigen::Index n_ = 0;
  Eigen::Index m_ = 0;
  std::optional<DilationStructure> ds_;
  Vector q_x_, p_x_, q_u_, p_u_;
  Matrix Q_, R_;
};

struct CostHomogeneityReport
{
  /// max |l_scaled - alpha^d l| / (alpha^d l) over the shared grid.
  double max_ratio_error = 0.0;
  std::size_t points = 0;
  IntegrationStatus status = IntegrationStatus::completed;
  bool escaped() const { return status != IntegrationStatus::completed; }
};

/**
 * @brief Compares stage costs along the dilated and the original trajectory.
 *
 * The original trajectory starts at x0 under u on [0, u.end_time()]. The dilated one
 * starts at L_alpha x0 under s -> D_alpha u(alpha^tau s); at matching grid points the
 * cost must equal alpha^d times the original.
 */
CostHomogeneityReport check_cost_homogeneity(
  const ControlSystem & sys, const StageCost & cost, const DilationStructure & ds,
  const Vector & x0, const ControlSignal & u, double alpha, double step = 1e-3);

}  // namespace hmpc

#endif  // HMPC_COST_HPP_

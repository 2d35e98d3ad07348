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

#ifndef HMPC_TYPES_HPP_
#define HMPC_TYPES_HPP_

#include <Eigen/Core>

#include <limits>
#include <stdexcept>
#include <string>

namespace hmpc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when a vector or matrix does not have the dimension an operation expects.
class DimensionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Value used for costs of candidates whose trajectory does not exist on the horizon.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

inline void require_dimension(const Vector & v, Eigen::Index expected, const char * what)
{
  if (v.size() != expected) {
    throw DimensionError(
      std::string(what) + ": expected dimension " + std::to_string(expected) + ", got " +
      std::to_string(v.size()));
  }
}

}  // namespace hmpc

#endif  // HMPC_TYPES_HPP_

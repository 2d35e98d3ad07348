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


#ifndef HMPC_CSV_HPP_
#define HMPC_CSV_HPP_

/**
 * @file
 * @brief CSV writers. Every file has a header row, LF line endings and numbers printed
 * with 17 significant digits, so equal inputs give byte-identical files.
 */

#include <ostream>
#include <string>

#include "hmpc/analysis.hpp"
#include "hmpc/mpc.hpp"
#include "hmpc/systems.hpp"

namespace hmpc {

/// Text for a double with 17 significant digits ("inf", "-inf", "nan" for non-finite values).
std::string format_number(double v);

/// t, x1..xn, u1..um, cost.
void write_trajectory_csv(std::ostream & os, const Trajectory & traj);

/// step, t, x1..xn, u1..um, V_T, ocp_converged, verdict.
void write_closed_loop_csv(std::ostream & os, const ClosedLoopResult & result);

/// t, B, argmax_x1..xn, converged.
void write_growth_csv(std::ostream & os, const GrowthTable & table);

/// t, x1..xn, ell_star, V_t, ratio for every sampled pair.
void write_scatter_csv(std::ostream & os, const GrowthTable & table);

/// t, x, ratio.
void write_ratio_field_csv(std::ostream & os, const Remark2Report & report);

/// Writes `content` to `path` in binary mode, creating parent directories.
void write_file(const std::string & path, const std::string & content);

}  // namespace hmpc

#endif  // HMPC_CSV_HPP_

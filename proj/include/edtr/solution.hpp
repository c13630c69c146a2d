// Copyright 2026 The edtr Authors
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

#ifndef EDTR_SOLUTION_HPP_
#define EDTR_SOLUTION_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace edtr {

enum class DispatchStatus { kOptimal, kFeasibleGap, kInfeasible, kUnbounded, kLimit, kError };

// "optimal", "feasible-gap", "infeasible", "unbounded", "limit", "error".
const char* to_string(DispatchStatus status);

// Dispatch over the horizon. Matrices are indexed [entity][hour] in case
// order. Powers in MW, angles in radians, taps per-unit.
struct DispatchSolution {
  DispatchStatus status = DispatchStatus::kError;
  double objective = 0.0;  // $
  double gap = 0.0;
  std::vector<std::vector<double>> p;
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<double>> flow;
  std::vector<std::vector<double>> tap;
  std::vector<std::vector<double>> shift;
  std::vector<int> tap_adjustments;    // hours in which the tap moved
  std::vector<int> shift_adjustments;  // hours in which the shift moved
  double solve_time = 0.0;  // s
  long nodes = 0;

  bool has_schedule() const {
    return status == DispatchStatus::kOptimal || status == DispatchStatus::kFeasibleGap;
  }
};

class SolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace edtr

#endif  // EDTR_SOLUTION_HPP_

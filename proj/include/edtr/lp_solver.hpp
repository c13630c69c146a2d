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

#ifndef EDTR_LP_SOLVER_HPP_
#define EDTR_LP_SOLVER_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "edtr/milp_model.hpp"

namespace edtr {

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kTimeLimit,
  kNumericalError,
};

const char* to_string(LpStatus status);

enum class BasisStatus : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

// Status of every structural column followed by every row's logical column.
struct Basis {
  std::vector<BasisStatus> status;
  bool empty() const { return status.empty(); }
};

struct LpOptions {
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-9;
  long iteration_limit = 2'000'000;
  double time_limit = kInf;  // seconds
  int refactor_interval = 100;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int bland_threshold = 1000;
  bool scale = true;
};

struct LpSolution {
  LpStatus status = LpStatus::kNumericalError;
  double objective = 0.0;
  std::vector<double> primal;         // per variable
  std::vector<double> row_activity;   // per constraint
  std::vector<double> duals;          // per constraint
  std::vector<double> reduced_costs;  // per variable
  // Unbounded: improving direction over the variables.
  std::vector<double> ray;
  // Infeasible: row multipliers of the phase-one optimum (Farkas-type).
  std::vector<double> farkas;
  long iterations = 0;
  Basis basis;
  std::string diagnostics;
};

// Bounded-variable revised simplex over the continuous relaxation of a
// MilpModel. The solver keeps its own copy of the column bounds so that
// branch-and-bound can tighten them between warm-started solves.
class LpSolver {
 public:
  explicit LpSolver(const MilpModel& model, LpOptions options = {});
  ~LpSolver();
  LpSolver(LpSolver&&) noexcept;
  LpSolver& operator=(LpSolver&&) noexcept;

  void set_bounds(VarId var, double lower, double upper);
  double lower(VarId var) const;
  double upper(VarId var) const;
  void reset_bounds();

  LpOptions& options();

  LpSolution solve(const Basis* warm_start = nullptr);

 private:
  class Impl;
  std::unique_ptr<Impl> impl_;
};

LpSolution solve_lp(const MilpModel& model, const LpOptions& options = {});

}  // namespace edtr

#endif  // EDTR_LP_SOLVER_HPP_

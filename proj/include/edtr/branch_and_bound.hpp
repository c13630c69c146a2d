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

#ifndef EDTR_BRANCH_AND_BOUND_HPP_
#define EDTR_BRANCH_AND_BOUND_HPP_

#include <span>
#include <vector>

#include "edtr/lp_solver.hpp"
#include "edtr/milp_model.hpp"

namespace edtr {

enum class Branching { kMostFractional, kPseudoCost };
enum class NodeOrder { kBestBound, kDepthFirst };

struct BnbConfig {
  double relative_gap = 1e-4;
  long node_limit = 5'000'000;
  double time_limit = kInf;  // seconds
  Branching branching = Branching::kMostFractional;
  NodeOrder node_order = NodeOrder::kBestBound;
  double integrality_tol = 1e-6;
  // Run a diving heuristic at the root and every `dive_interval` nodes.
  bool diving = true;
  long dive_interval = 500;
  LpOptions lp;
};

enum class MilpStatus {
  kOptimal,      // gap <= relative_gap
  kFeasible,     // stopped on a limit with an incumbent
  kLimit,        // stopped on a limit without an incumbent
  kInfeasible,
  kUnbounded,
  kNumericalError,
};

const char* to_string(MilpStatus status);

// A value suggested for a binary variable (a MIP start). Hints are fixed
// together and the remaining LP solved once to seed the incumbent.
struct BinaryHint {
  VarId var;
  double value = 0.0;
};

struct MilpResult {
  MilpStatus status = MilpStatus::kNumericalError;
  std::vector<double> values;
  double objective = kInf;
  double best_bound = -kInf;
  // (incumbent - best_bound) / max(1, |incumbent|)
  double gap = kInf;
  long nodes = 0;
  long lp_iterations = 0;
  double seconds = 0.0;
};

MilpResult solve_milp(const MilpModel& model, const BnbConfig& config = {},
                      std::span<const BinaryHint> start = {});

// As above with several MIP starts, tried in order after the root LP.
MilpResult solve_milp(const MilpModel& model, const BnbConfig& config,
                      std::span<const std::vector<BinaryHint>> starts);

}  // namespace edtr

#endif  // EDTR_BRANCH_AND_BOUND_HPP_

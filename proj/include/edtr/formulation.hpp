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

// Multi-period DC economic dispatch models.
//
// ED0 keeps every tap changer and phase shifter at its initial setting and
// is a pure LP. ED1 lets them move within their step limits and adjustment
// budgets; branches with an adjustable ratio get a PLT encoding of their
// flow, branches with only a shifter get a flow that is linear in delta.
//
// All model quantities are per-unit on the case base; the objective is in
// $ and includes the cost at p_min as a constant.

#ifndef EDTR_FORMULATION_HPP_
#define EDTR_FORMULATION_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "edtr/branch_and_bound.hpp"
#include "edtr/milp_model.hpp"
#include "edtr/network.hpp"
#include "edtr/plt_encoder.hpp"
#include "edtr/solution.hpp"

namespace edtr {

struct FormulationOptions {
  EncodingVariant variant = EncodingVariant::kDisjunctiveExact;
  // Limit adjustable shifters to shift_lo + k * shift_step_max (grid
  // binaries sg_<branch>_<h>_<k>). Used to compare against enumeration.
  bool restrict_shift_to_grid = false;
  // With kDisjunctiveExact, also bound the flow share of every tap by
  // s_i * rating (rows limtap_<branch>_<h>_<i>_up/_dn). Valid for every
  // integer solution; tightens the LP relaxation.
  bool tap_limit_rows = true;
};

struct EdModel {
  MilpModel model;
  bool adjustable = false;
  FormulationOptions options;
  // [entity][hour] handles, in case order.
  std::vector<std::vector<VarId>> p;
  std::vector<std::vector<VarId>> theta;
  std::vector<std::vector<LinearExpr>> flow;   // per-unit
  std::vector<std::vector<LinearExpr>> tap;    // constant or tau variable
  std::vector<std::vector<LinearExpr>> shift;  // constant or delta variable
  std::vector<std::vector<std::optional<PltEncoding>>> plt;
  std::vector<std::vector<VarId>> tap_indicator;    // empty when not adjustable
  std::vector<std::vector<VarId>> shift_indicator;  // empty when not adjustable
  std::vector<std::vector<VarId>> shift_grid;       // [branch][h * G + k]
  std::vector<std::vector<double>> shift_grid_points;  // [branch]
  std::vector<std::vector<RowId>> balance;
  std::vector<std::vector<std::optional<RowId>>> limit;
};

// Grid points shift_lo + k * shift_step_max inside the shifter range.
std::vector<double> shift_grid(const BranchDevice& d);

EdModel build_ed0(const NetworkCase& c);
EdModel build_ed1(const NetworkCase& c, const FormulationOptions& options = {});

// ED0 with every device pinned to an explicit schedule ([branch][hour]
// taps and shifts). Used to enumerate device settings.
EdModel build_fixed_schedule(const NetworkCase& c,
                             const std::vector<std::vector<double>>& taps,
                             const std::vector<std::vector<double>>& shifts);

// Binary values that reproduce ED0's device settings inside ED1.
std::vector<BinaryHint> ed0_mip_start(const EdModel& ed1, const NetworkCase& c);

// Taps held at their initial ratios; each adjustable shifter may move in
// its first `shift_adjust_budget` hours and then holds. Useful when ED0 is
// infeasible and a static shift relieves the congestion. Empty when no
// shifter is adjustable or with the shift grid.
std::vector<BinaryHint> early_shift_mip_start(const EdModel& ed1, const NetworkCase& c);

// Builds a DispatchSolution from a primal assignment. Taps are snapped to
// the nearest tap-set member within `snap_tol`; throws SolutionError when a
// tap cannot be snapped, when PLT weight mass spreads over more than one
// tap, or when a bus balance residual exceeds 1e-6 p.u.
DispatchSolution extract_solution(const EdModel& ed, std::span<const double> assignment,
                                  const NetworkCase& c, double snap_tol = 1e-6);

struct SolveOptions {
  BnbConfig bnb;
  // Seed ED1 with the ED0 device settings.
  bool ed0_start = true;
  // Also try early_shift_mip_start().
  bool early_shift_start = true;
};

struct EdResult {
  DispatchSolution solution;
  MilpResult milp;
  std::string error;  // set when extraction failed
};

EdResult solve_ed(const EdModel& ed, const NetworkCase& c, const SolveOptions& options = {});

// Constraint-family check of a dispatch against the case, with flows
// recomputed from the angles, taps and shifts.
struct CheckFamily {
  std::string name;
  bool pass = true;
  double worst = 0.0;  // largest violation in the family's unit
  std::string detail;
};

struct CheckReport {
  std::vector<CheckFamily> families;
  bool pass() const;
  const CheckFamily* find(const std::string& name) const;
};

struct CheckTolerances {
  double balance_pu = 1e-6;
  double limit_pu = 1e-6;
  double step = 1e-9;
  double membership = 1e-6;
  double bounds = 1e-6;  // generator and ramp limits, p.u.
};

// Families: balance, line-limits, tap-membership, shift-range, steps,
// budgets, generator-limits, ramps, reserve, angles.
CheckReport verify_solution(const NetworkCase& c, const DispatchSolution& s,
                            const CheckTolerances& tol = {});

// Flow of every branch and hour, MW, from angles, taps and shifts.
std::vector<std::vector<double>> dc_flows(const NetworkCase& c, const DispatchSolution& s);

}  // namespace edtr

#endif  // EDTR_FORMULATION_HPP_

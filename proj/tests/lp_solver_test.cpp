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

#include "edtr/lp_solver.hpp"

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracles/random_lp.hpp"
#include "oracles/tableau.hpp"

namespace edtr {
namespace {

TEST(SolveLp, BoundedSingleVariable) {
  MilpModel m;
  const VarId x = m.add_continuous("x", 0.0, 3.0);
  m.set_objective(LinearExpr(x, -1.0));
  const LpSolution s = solve_lp(m);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_DOUBLE_EQ(s.primal[0], 3.0);
  EXPECT_DOUBLE_EQ(s.objective, -3.0);
}

TEST(SolveLp, DegenerateOptimumAcceptedAtEitherVertex) {
  MilpModel m;
  const VarId x = m.add_continuous("x", 0.0, kInf);
  const VarId y = m.add_continuous("y", 0.0, kInf);
  m.add_constraint("cover", LinearExpr(x) + LinearExpr(y), Sense::kGreaterEqual, 2.0);
  m.set_objective(LinearExpr(x) + LinearExpr(y));
  const LpSolution s = solve_lp(m);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 2.0, 1e-9);
  EXPECT_NEAR(s.primal[0] + s.primal[1], 2.0, 1e-9);
}

TEST(SolveLp, DetectsInfeasibility) {
  MilpModel m;
  const VarId x = m.add_continuous("x", 0.0, 1.0);
  m.add_constraint("need", LinearExpr(x), Sense::kGreaterEqual, 2.0);
  const LpSolution s = solve_lp(m);
  EXPECT_EQ(s.status, LpStatus::kInfeasible);
  EXPECT_FALSE(s.farkas.empty());
}

TEST(SolveLp, DetectsUnboundednessWithRay) {
  MilpModel m;
  const VarId x = m.add_continuous("x", 0.0, kInf);
  const VarId y = m.add_continuous("y", 0.0, kInf);
  m.add_constraint("r", LinearExpr(x) - LinearExpr(y), Sense::kLessEqual, 1.0);
  m.set_objective(LinearExpr(x, -1.0));
  const LpSolution s = solve_lp(m);
  ASSERT_EQ(s.status, LpStatus::kUnbounded);
  ASSERT_EQ(s.ray.size(), 2u);
  // The ray improves the objective and keeps the row feasible.
  EXPECT_LT(-s.ray[0], 0.0);
  EXPECT_LE(s.ray[0] - s.ray[1], 1e-12);
}

TEST(SolveLp, RangedAndFreeRows) {
  MilpModel m;
  const VarId x = m.add_continuous("x", -kInf, kInf);
  const VarId y = m.add_continuous("y", -5.0, 5.0);
  m.add_interval("band", LinearExpr(x) + LinearExpr(y), -1.0, 4.0);
  m.add_constraint("tie", LinearExpr(x) - LinearExpr(y), Sense::kEqual, 1.0);
  m.set_objective(LinearExpr(x, -1.0));
  const LpSolution s = solve_lp(m);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.primal[0], 2.5, 1e-9);
  EXPECT_NEAR(s.primal[1], 1.5, 1e-9);
}

TEST(SolveLp, EmptyModel) {
  MilpModel m;
  const LpSolution s = solve_lp(m);
  EXPECT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_EQ(s.objective, 0.0);
}

// Bound-form dual objective; valid lower bound for any row multipliers.
double dual_objective(const MilpModel& m, const LpSolution& s) {
  double value = m.objective().constant();
  for (std::size_t i = 0; i < m.num_constraints(); ++i) {
    const auto [lo, hi] = MilpModel::row_bounds(m.constraints()[i]);
    const double y = s.duals[i];
    if (y > 0) value += y * lo;
    if (y < 0) value += y * hi;
  }
  for (std::size_t j = 0; j < m.num_variables(); ++j) {
    const auto& v = m.variables()[j];
    const double d = s.reduced_costs[j];
    if (d > 0) value += d * v.lower;
    if (d < 0) value += d * v.upper;
  }
  return value;
}

class RandomLpTest : public ::testing::TestWithParam<int> {};

TEST_P(RandomLpTest, MatchesTableauOracle) {
  std::mt19937_64 rng(1000 + GetParam());
  const oracle::DenseLp dense = oracle::random_dense_lp(rng, 12, 12);
  const MilpModel model = oracle::to_model(dense);
  const LpSolution s = solve_lp(model);
  const oracle::TableauResult ref = oracle::solve_tableau(dense);
  switch (ref.status) {
    case oracle::TableauStatus::kOptimal: {
      ASSERT_EQ(s.status, LpStatus::kOptimal) << s.diagnostics;
      EXPECT_NEAR(s.objective, ref.objective,
                  1e-7 * std::max(1.0, std::abs(ref.objective)));
      EXPECT_LE(model.max_violation(s.primal), 1e-7);
      // Weak duality and, at the optimum, zero duality gap.
      const double dual = dual_objective(model, s);
      EXPECT_LE(dual, s.objective + 1e-6);
      EXPECT_NEAR(dual, s.objective, 1e-6 * std::max(1.0, std::abs(s.objective)));
      // Complementary slackness.
      for (std::size_t j = 0; j < model.num_variables(); ++j) {
        const auto& v = model.variables()[j];
        const double d = s.reduced_costs[j];
        const double slack_lo = s.primal[j] - v.lower;
        const double slack_hi = v.upper - s.primal[j];
        if (d > 1e-6) EXPECT_LE(slack_lo, 1e-6);
        if (d < -1e-6) EXPECT_LE(slack_hi, 1e-6);
      }
      for (std::size_t i = 0; i < model.num_constraints(); ++i) {
        const auto [lo, hi] = MilpModel::row_bounds(model.constraints()[i]);
        const double y = s.duals[i];
        if (y > 1e-6) EXPECT_LE(s.row_activity[i] - lo, 1e-6);
        if (y < -1e-6) EXPECT_LE(hi - s.row_activity[i], 1e-6);
      }
      break;
    }
    case oracle::TableauStatus::kInfeasible:
      EXPECT_EQ(s.status, LpStatus::kInfeasible);
      break;
    case oracle::TableauStatus::kUnbounded:
      EXPECT_EQ(s.status, LpStatus::kUnbounded);
      break;
  }
}

INSTANTIATE_TEST_SUITE_P(Dense, RandomLpTest, ::testing::Range(0, 60));

TEST(LpSolver, WarmStartAfterBoundChangeMatchesColdSolve) {
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    oracle::DenseLp dense = oracle::random_dense_lp(rng, 10, 8);
    for (auto& u : dense.upper) u = std::isfinite(u) ? u : 20.0;
    const MilpModel model = oracle::to_model(dense);
    LpSolver solver(model);
    const LpSolution first = solver.solve();
    if (first.status != LpStatus::kOptimal) continue;
    const VarId v{static_cast<int>(trial % model.num_variables())};
    const double mid = first.primal[v.index];
    solver.set_bounds(v, model.variable(v).lower, mid * 0.5);
    const LpSolution warm = solver.solve(&first.basis);

    MilpModel tightened = model;
    tightened.set_variable_bounds(v, model.variable(v).lower, mid * 0.5);
    const LpSolution cold = solve_lp(tightened);
    ASSERT_EQ(warm.status, cold.status);
    if (cold.status == LpStatus::kOptimal) {
      EXPECT_NEAR(warm.objective, cold.objective,
                  1e-7 * std::max(1.0, std::abs(cold.objective)));
      ++checked;
    }
  }
  EXPECT_GT(checked, 5);
}

TEST(LpSolver, BlandFallbackStillSolves) {
  std::mt19937_64 rng(5);
  LpOptions options;
  options.bland_threshold = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::DenseLp dense = oracle::random_dense_lp(rng, 8, 8);
    const MilpModel model = oracle::to_model(dense);
    const LpSolution s = solve_lp(model, options);
    const oracle::TableauResult ref = oracle::solve_tableau(dense);
    if (ref.status == oracle::TableauStatus::kOptimal) {
      ASSERT_EQ(s.status, LpStatus::kOptimal);
      EXPECT_NEAR(s.objective, ref.objective,
                  1e-7 * std::max(1.0, std::abs(ref.objective)));
    }
  }
}

}  // namespace
}  // namespace edtr

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

// Dense two-phase tableau simplex with Bland's rule. Test oracle only: it
// shares no code with the revised simplex under test.

#ifndef EDTR_TESTS_ORACLES_TABLEAU_HPP_
#define EDTR_TESTS_ORACLES_TABLEAU_HPP_

#include <cmath>
#include <limits>
#include <vector>

namespace edtr::oracle {

enum class TableauStatus { kOptimal, kInfeasible, kUnbounded };

struct DenseLp {
  // min c^T x  s.t. rows, 0 <= x <= upper (upper may be +inf)
  std::vector<double> cost;
  std::vector<double> upper;
  std::vector<std::vector<double>> a;
  std::vector<int> sense;  // -1: <=, 0: =, +1: >=
  std::vector<double> rhs;
};

struct TableauResult {
  TableauStatus status = TableauStatus::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
};

inline TableauResult solve_tableau(const DenseLp& lp) {
  constexpr double kEps = 1e-10;
  const int n = static_cast<int>(lp.cost.size());
  std::vector<std::vector<double>> rows = lp.a;
  std::vector<int> sense = lp.sense;
  std::vector<double> rhs = lp.rhs;
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(lp.upper[j])) {
      std::vector<double> r(n, 0.0);
      r[j] = 1.0;
      rows.push_back(r);
      sense.push_back(-1);
      rhs.push_back(lp.upper[j]);
    }
  }
  const int m = static_cast<int>(rows.size());
  for (int i = 0; i < m; ++i) {
    if (rhs[i] < 0) {
      for (auto& v : rows[i]) v = -v;
      rhs[i] = -rhs[i];
      sense[i] = -sense[i];
    }
  }
  // Columns: x (n), slack/surplus (one per inequality), artificial (per
  // >= or = row).
  int num_slack = 0, num_art = 0;
  for (int i = 0; i < m; ++i) {
    if (sense[i] != 0) ++num_slack;
    if (sense[i] >= 0) ++num_art;
  }
  const int cols = n + num_slack + num_art;
  std::vector<std::vector<double>> t(m, std::vector<double>(cols + 1, 0.0));
  std::vector<int> basis(m);
  std::vector<bool> artificial(cols, false);
  int s = n, art = n + num_slack;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = rows[i][j];
    t[i][cols] = rhs[i];
    if (sense[i] == -1) {
      t[i][s] = 1.0;
      basis[i] = s++;
    } else {
      if (sense[i] == 1) t[i][s++] = -1.0;
      t[i][art] = 1.0;
      artificial[art] = true;
      basis[i] = art++;
    }
  }

  auto pivot = [&](int r, int c) {
    const double p = t[r][c];
    for (auto& v : t[r]) v /= p;
    for (int i = 0; i < m; ++i) {
      if (i == r || t[i][c] == 0.0) continue;
      const double f = t[i][c];
      for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = c;
  };

  // Returns false when unbounded.
  auto run = [&](const std::vector<double>& cost, bool allow_artificial) {
    for (;;) {
      int enter = -1;
      for (int j = 0; j < cols && enter < 0; ++j) {
        if (!allow_artificial && artificial[j]) continue;
        bool in_basis = false;
        for (int i = 0; i < m; ++i) in_basis |= basis[i] == j;
        if (in_basis) continue;
        double d = cost[j];
        for (int i = 0; i < m; ++i) d -= cost[basis[i]] * t[i][j];
        if (d < -kEps) enter = j;
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        if (t[i][enter] <= kEps) continue;
        const double ratio = t[i][cols] / t[i][enter];
        if (ratio < best - kEps ||
            (std::abs(ratio - best) <= kEps && basis[i] < basis[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  };

  TableauResult result;
  std::vector<double> phase1(cols, 0.0);
  for (int j = 0; j < cols; ++j) phase1[j] = artificial[j] ? 1.0 : 0.0;
  run(phase1, true);
  double infeas = 0.0;
  for (int i = 0; i < m; ++i) {
    if (artificial[basis[i]]) infeas += t[i][cols];
  }
  if (infeas > 1e-8) {
    result.status = TableauStatus::kInfeasible;
    return result;
  }
  // Drive zero-level artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (!artificial[basis[i]]) continue;
    for (int j = 0; j < n + num_slack; ++j) {
      if (std::abs(t[i][j]) > 1e-9) {
        pivot(i, j);
        break;
      }
    }
  }
  std::vector<double> phase2(cols, 0.0);
  for (int j = 0; j < n; ++j) phase2[j] = lp.cost[j];
  if (!run(phase2, false)) {
    result.status = TableauStatus::kUnbounded;
    return result;
  }
  result.status = TableauStatus::kOptimal;
  result.x.assign(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) result.x[basis[i]] = t[i][cols];
  }
  for (int j = 0; j < n; ++j) result.objective += lp.cost[j] * result.x[j];
  return result;
}

}  // namespace edtr::oracle

#endif  // EDTR_TESTS_ORACLES_TABLEAU_HPP_

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

#ifndef EDTR_TESTS_ORACLES_RANDOM_LP_HPP_
#define EDTR_TESTS_ORACLES_RANDOM_LP_HPP_

#include <random>
#include <string>

#include "edtr/milp_model.hpp"
#include "oracles/tableau.hpp"

namespace edtr::oracle {

// Dense LP with small integer data; roughly a third of the instances end up
// infeasible or unbounded, which exercises those exits as well.
inline DenseLp random_dense_lp(std::mt19937_64& rng, int max_vars,
                               int max_rows) {
  std::uniform_int_distribution<int> nvar(1, max_vars);
  std::uniform_int_distribution<int> nrow(1, max_rows);
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<int> sense(-1, 1);
  std::uniform_int_distribution<int> ub(1, 12);
  std::bernoulli_distribution bounded(0.6);
  std::bernoulli_distribution sparse(0.3);
  DenseLp lp;
  const int n = nvar(rng);
  const int m = nrow(rng);
  for (int j = 0; j < n; ++j) {
    lp.cost.push_back(coef(rng));
    lp.upper.push_back(bounded(rng) ? ub(rng) : kInf);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<double> row(n);
    for (auto& v : row) v = sparse(rng) ? 0.0 : coef(rng);
    lp.a.push_back(row);
    lp.sense.push_back(sense(rng));
    lp.rhs.push_back(coef(rng) * 3);
  }
  return lp;
}

inline MilpModel to_model(const DenseLp& lp) {
  MilpModel m;
  const int n = static_cast<int>(lp.cost.size());
  LinearExpr obj;
  for (int j = 0; j < n; ++j) {
    const VarId v = m.add_continuous("x" + std::to_string(j), 0.0, lp.upper[j]);
    obj.add(v, lp.cost[j]);
  }
  m.set_objective(obj);
  for (std::size_t i = 0; i < lp.a.size(); ++i) {
    LinearExpr row;
    for (int j = 0; j < n; ++j) row.add(VarId{j}, lp.a[i][j]);
    const Sense s = lp.sense[i] < 0   ? Sense::kLessEqual
                    : lp.sense[i] > 0 ? Sense::kGreaterEqual
                                      : Sense::kEqual;
    m.add_constraint("r" + std::to_string(i), row, s, lp.rhs[i]);
  }
  return m;
}

}  // namespace edtr::oracle

#endif  // EDTR_TESTS_ORACLES_RANDOM_LP_HPP_

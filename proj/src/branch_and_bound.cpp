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

#include "edtr/branch_and_bound.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <set>

namespace edtr {

const char* to_string(MilpStatus status) {
  switch (status) {
    case MilpStatus::kOptimal:
      return "optimal";
    case MilpStatus::kFeasible:
      return "feasible-gap";
    case MilpStatus::kLimit:
      return "limit";
    case MilpStatus::kInfeasible:
      return "infeasible";
    case MilpStatus::kUnbounded:
      return "unbounded";
    case MilpStatus::kNumericalError:
      return "numerical-error";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

// One branching decision; nodes share their ancestry through `parent`.
struct Fix {
  std::shared_ptr<const Fix> parent;
  int var = -1;
  double value = 0.0;
};

struct Node {
  long id = 0;
  int depth = 0;
  double bound = -kInf;
  std::shared_ptr<const Fix> fixes;
  std::shared_ptr<const Basis> basis;
  // Pseudo-cost bookkeeping for the decision that created this node.
  int branch_var = -1;
  double branch_frac = 0.0;  // distance moved by the fix
  bool branch_up = false;
};

struct NodeAfter {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const BnbConfig& config)
      : model_(model), config_(config), lp_(model, config.lp) {
    for (std::size_t j = 0; j < model.num_variables(); ++j) {
      if (model.variables()[j].kind == VarKind::kBinary) {
        binaries_.push_back(static_cast<int>(j));
      }
    }
    pc_sum_[0].assign(model.num_variables(), 0.0);
    pc_sum_[1].assign(model.num_variables(), 0.0);
    pc_count_[0].assign(model.num_variables(), 0);
    pc_count_[1].assign(model.num_variables(), 0);
  }

  MilpResult run(std::span<const std::vector<BinaryHint>> starts);

 private:
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }
  bool out_of_time() const { return elapsed() > config_.time_limit; }
  double cutoff() const {
    if (!std::isfinite(incumbent_obj_)) return kInf;
    return incumbent_obj_ -
           config_.relative_gap * std::max(1.0, std::abs(incumbent_obj_));
  }
  void apply(const std::shared_ptr<const Fix>& fixes) {
    lp_.reset_bounds();
    for (const Fix* f = fixes.get(); f != nullptr; f = f->parent.get()) {
      lp_.set_bounds(VarId{f->var}, f->value, f->value);
    }
  }
  LpSolution solve_lp(const Basis* warm) {
    lp_.options().time_limit = std::max(0.0, config_.time_limit - elapsed());
    LpSolution s = lp_.solve(warm);
    result_.lp_iterations += s.iterations;
    if (s.status == LpStatus::kNumericalError ||
        s.status == LpStatus::kIterationLimit) {
      // Retry cold before giving up on the node.
      s = lp_.solve(nullptr);
      result_.lp_iterations += s.iterations;
    }
    return s;
  }
  std::vector<int> fractional(const std::vector<double>& x) const {
    std::vector<int> out;
    for (int j : binaries_) {
      if (std::abs(x[j] - std::round(x[j])) > config_.integrality_tol) {
        out.push_back(j);
      }
    }
    return out;
  }
  int select_branch(const std::vector<double>& x,
                    const std::vector<int>& frac) const;
  void record_pseudo_cost(const Node& node, double parent_bound, double obj);
  // Fixes every binary at its rounded value and re-solves; accepts the
  // result as incumbent when it improves.
  bool try_incumbent(const std::vector<double>& x, const Basis* warm);
  void dive(const std::shared_ptr<const Fix>& fixes, LpSolution sol);

  const MilpModel& model_;
  BnbConfig config_;
  LpSolver lp_;
  std::vector<int> binaries_;
  std::vector<double> pc_sum_[2];
  std::vector<long> pc_count_[2];

  Clock::time_point start_;
  MilpResult result_;
  double incumbent_obj_ = kInf;
  std::vector<double> incumbent_;
  double pruned_bound_ = kInf;
  bool lost_nodes_ = false;
};

int BranchAndBound::select_branch(const std::vector<double>& x,
                                  const std::vector<int>& frac) const {
  int best = -1;
  double best_score = -1.0;
  double avg[2] = {1.0, 1.0};
  if (config_.branching == Branching::kPseudoCost) {
    for (int dir = 0; dir < 2; ++dir) {
      double s = 0.0;
      long c = 0;
      for (int j : binaries_) {
        if (pc_count_[dir][j] > 0) {
          s += pc_sum_[dir][j] / pc_count_[dir][j];
          ++c;
        }
      }
      if (c > 0) avg[dir] = s / c;
    }
  }
  for (int j : frac) {
    const double f = x[j] - std::floor(x[j]);
    double score = 0.0;
    if (config_.branching == Branching::kPseudoCost) {
      const double down = pc_count_[0][j] ? pc_sum_[0][j] / pc_count_[0][j] : avg[0];
      const double up = pc_count_[1][j] ? pc_sum_[1][j] / pc_count_[1][j] : avg[1];
      score = std::max(down * f, 1e-6) * std::max(up * (1.0 - f), 1e-6);
    } else {
      score = std::min(f, 1.0 - f);
    }
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

void BranchAndBound::record_pseudo_cost(const Node& node, double parent_bound,
                                        double obj) {
  if (node.branch_var < 0 || node.branch_frac <= 0.0) return;
  if (!std::isfinite(parent_bound) || !std::isfinite(obj)) return;
  const int dir = node.branch_up ? 1 : 0;
  pc_sum_[dir][node.branch_var] += std::max(0.0, obj - parent_bound) / node.branch_frac;
  ++pc_count_[dir][node.branch_var];
}

bool BranchAndBound::try_incumbent(const std::vector<double>& x,
                                   const Basis* warm) {
  std::vector<std::pair<int, std::pair<double, double>>> saved;
  saved.reserve(binaries_.size());
  for (int j : binaries_) {
    const VarId v{j};
    saved.push_back({j, {lp_.lower(v), lp_.upper(v)}});
    const double r = std::clamp(std::round(x[j]), 0.0, 1.0);
    if (r < lp_.lower(v) || r > lp_.upper(v)) {
      for (const auto& [k, b] : saved) lp_.set_bounds(VarId{k}, b.first, b.second);
      return false;
    }
    lp_.set_bounds(v, r, r);
  }
  LpSolution s = solve_lp(warm);
  for (const auto& [k, b] : saved) lp_.set_bounds(VarId{k}, b.first, b.second);
  if (s.status != LpStatus::kOptimal) return false;
  for (int j : binaries_) s.primal[j] = std::round(s.primal[j]);
  if (model_.max_violation(s.primal) > 1e-6) return false;
  const double obj = model_.objective_value(s.primal);
  if (obj >= incumbent_obj_) return false;
  incumbent_obj_ = obj;
  incumbent_ = std::move(s.primal);
  return true;
}

void BranchAndBound::dive(const std::shared_ptr<const Fix>& fixes,
                          LpSolution sol) {
  std::shared_ptr<const Fix> chain = fixes;
  const std::size_t max_rounds = 4 * binaries_.size() + 10;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    if (out_of_time()) return;
    const std::vector<int> frac = fractional(sol.primal);
    if (frac.empty()) {
      try_incumbent(sol.primal, &sol.basis);
      return;
    }
    // Fix a batch of the least fractional variables at their rounding.
    std::vector<std::pair<double, int>> order;
    for (int j : frac) {
      const double f = sol.primal[j] - std::floor(sol.primal[j]);
      order.push_back({std::min(f, 1.0 - f), j});
    }
    std::sort(order.begin(), order.end());
    // Halve the batch on infeasibility; a single fix falls back to the
    // opposite rounding.
    std::size_t batch = std::max<std::size_t>(1, order.size() / 8);
    std::shared_ptr<const Fix> next;
    LpSolution child;
    while (true) {
      next = chain;
      for (std::size_t k = 0; k < batch; ++k) {
        const int j = order[k].second;
        next = std::make_shared<const Fix>(Fix{next, j, std::round(sol.primal[j])});
      }
      apply(next);
      child = solve_lp(&sol.basis);
      if (child.status == LpStatus::kOptimal || out_of_time()) break;
      if (batch == 1) {
        const int j = order[0].second;
        next = std::make_shared<const Fix>(Fix{chain, j, 1.0 - std::round(sol.primal[j])});
        apply(next);
        child = solve_lp(&sol.basis);
        break;
      }
      batch /= 2;
    }
    if (child.status != LpStatus::kOptimal || child.objective >= cutoff()) return;
    chain = next;
    sol = std::move(child);
  }
}

MilpResult BranchAndBound::run(std::span<const std::vector<BinaryHint>> starts) {
  start_ = Clock::now();
  LpSolution root = solve_lp(nullptr);
  result_.nodes = 1;
  if (root.status == LpStatus::kInfeasible) {
    result_.status = MilpStatus::kInfeasible;
    result_.seconds = elapsed();
    return result_;
  }
  if (root.status == LpStatus::kUnbounded) {
    result_.status = MilpStatus::kUnbounded;
    result_.seconds = elapsed();
    return result_;
  }
  if (root.status != LpStatus::kOptimal) {
    result_.status = root.status == LpStatus::kTimeLimit ? MilpStatus::kLimit
                                                         : MilpStatus::kNumericalError;
    result_.seconds = elapsed();
    return result_;
  }

  for (const auto& start : starts) {
    if (start.empty() || out_of_time()) continue;
    for (const auto& hint : start) {
      lp_.set_bounds(hint.var, hint.value, hint.value);
    }
    LpSolution seeded = solve_lp(&root.basis);
    lp_.reset_bounds();
    if (seeded.status == LpStatus::kOptimal) {
      try_incumbent(seeded.primal, &seeded.basis);
    }
  }
  if (fractional(root.primal).empty()) {
    try_incumbent(root.primal, &root.basis);
  } else if (config_.diving) {
    try_incumbent(root.primal, &root.basis);
    dive(nullptr, root);
    lp_.reset_bounds();
  }

  std::priority_queue<Node, std::vector<Node>, NodeAfter> best_first;
  std::vector<Node> stack;
  std::multiset<double> open_bounds;
  long next_id = 1;
  auto push = [&](Node node) {
    open_bounds.insert(node.bound);
    if (config_.node_order == NodeOrder::kBestBound) {
      best_first.push(std::move(node));
    } else {
      stack.push_back(std::move(node));
    }
  };
  auto pop = [&]() {
    Node node;
    if (config_.node_order == NodeOrder::kBestBound) {
      node = best_first.top();
      best_first.pop();
    } else {
      node = std::move(stack.back());
      stack.pop_back();
    }
    open_bounds.erase(open_bounds.find(node.bound));
    return node;
  };
  auto open = [&]() { return !open_bounds.empty(); };

  // The root is solved already; expand it directly.
  Node root_node;
  root_node.bound = root.objective;
  bool have_root = true;
  bool limit_hit = false;

  while (have_root || open()) {
    Node node;
    LpSolution sol;
    if (have_root) {
      have_root = false;
      node = root_node;
      sol = std::move(root);
    } else {
      if (result_.nodes >= config_.node_limit || out_of_time()) {
        limit_hit = true;
        break;
      }
      node = pop();
      if (node.bound >= cutoff()) {
        pruned_bound_ = std::min(pruned_bound_, node.bound);
        continue;
      }
      apply(node.fixes);
      sol = solve_lp(node.basis.get());
      ++result_.nodes;
      if (sol.status == LpStatus::kInfeasible) continue;
      if (sol.status != LpStatus::kOptimal) {
        if (sol.status == LpStatus::kTimeLimit) {
          push(node);
          limit_hit = true;
          break;
        }
        // Keep the node's bound so the reported gap stays valid.
        lost_nodes_ = true;
        pruned_bound_ = std::min(pruned_bound_, node.bound);
        continue;
      }
      record_pseudo_cost(node, node.bound, sol.objective);
    }
    if (sol.objective >= cutoff()) {
      pruned_bound_ = std::min(pruned_bound_, sol.objective);
      continue;
    }
    const std::vector<int> frac = fractional(sol.primal);
    if (frac.empty()) {
      try_incumbent(sol.primal, &sol.basis);
      continue;
    }
    if (config_.diving && config_.dive_interval > 0 && result_.nodes > 1 &&
        result_.nodes % config_.dive_interval == 0) {
      dive(node.fixes, sol);
      apply(node.fixes);
    }
    const int j = select_branch(sol.primal, frac);
    const double f = sol.primal[j] - std::floor(sol.primal[j]);
    auto basis = std::make_shared<const Basis>(std::move(sol.basis));
    Node down;
    down.id = next_id++;
    down.depth = node.depth + 1;
    down.bound = sol.objective;
    down.fixes = std::make_shared<const Fix>(Fix{node.fixes, j, 0.0});
    down.basis = basis;
    down.branch_var = j;
    down.branch_frac = f;
    down.branch_up = false;
    Node up = down;
    up.id = next_id++;
    up.fixes = std::make_shared<const Fix>(Fix{node.fixes, j, 1.0});
    up.branch_frac = 1.0 - f;
    up.branch_up = true;
    // Depth-first explores the rounding direction first.
    if (f >= 0.5) {
      push(std::move(down));
      push(std::move(up));
    } else {
      push(std::move(up));
      push(std::move(down));
    }
  }

  double bound = std::min(pruned_bound_, incumbent_obj_);
  if (open()) bound = std::min(bound, *open_bounds.begin());
  result_.best_bound = bound;
  result_.seconds = elapsed();
  if (std::isfinite(incumbent_obj_)) {
    result_.values = incumbent_;
    result_.objective = incumbent_obj_;
    result_.gap = std::max(0.0, (incumbent_obj_ - bound) /
                                    std::max(1.0, std::abs(incumbent_obj_)));
    result_.status = result_.gap <= config_.relative_gap ? MilpStatus::kOptimal
                                                         : MilpStatus::kFeasible;
  } else {
    result_.status = limit_hit      ? MilpStatus::kLimit
                     : lost_nodes_  ? MilpStatus::kNumericalError
                                    : MilpStatus::kInfeasible;
  }
  return result_;
}

}  // namespace

MilpResult solve_milp(const MilpModel& model, const BnbConfig& config,
                      std::span<const BinaryHint> start) {
  const std::vector<BinaryHint> one(start.begin(), start.end());
  return solve_milp(model, config, std::span(&one, 1));
}

MilpResult solve_milp(const MilpModel& model, const BnbConfig& config,
                      std::span<const std::vector<BinaryHint>> starts) {
  BranchAndBound bnb(model, config);
  return bnb.run(starts);
}

}  // namespace edtr

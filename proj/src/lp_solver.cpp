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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "basis_factor.hpp"

namespace edtr {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration-limit";
    case LpStatus::kTimeLimit:
      return "time-limit";
    case LpStatus::kNumericalError:
      return "numerical-error";
  }
  return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

// Nearest power of two, so scaling is exact in floating point.
double pow2_round(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) return 1.0;
  return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(s))));
}

enum class RunResult {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kTimeLimit,
  kNumerical,
  kLostDualFeasibility,
};

}  // namespace

class LpSolver::Impl {
 public:
  Impl(const MilpModel& model, LpOptions options);

  void set_bounds(VarId var, double lower, double upper) {
    const int j = var.index;
    lo_[j] = lower / col_scale_[j];
    hi_[j] = upper / col_scale_[j];
  }
  double lower(VarId var) const { return lo_[var.index] * col_scale_[var.index]; }
  double upper(VarId var) const { return hi_[var.index] * col_scale_[var.index]; }
  void reset_bounds() {
    lo_ = orig_lo_;
    hi_ = orig_hi_;
  }

  LpSolution solve(const Basis* warm_start);

  LpOptions options_;

 private:
  bool is_basic(int j) const { return status_[j] == BasisStatus::kBasic; }
  double column_dot(int j, const std::vector<double>& v) const {
    double s = 0.0;
    cols_.for_each(j, [&](int i, double a) { s += a * v[i]; });
    return s;
  }

  void load_basis(const Basis* warm_start);
  void slack_basis();
  void place_nonbasic(int j);
  bool refactor();
  void compute_basic_values();
  double primal_violation(int j) const {
    return std::max({0.0, lo_[j] - x_[j], x_[j] - hi_[j]});
  }
  double max_primal_infeasibility() const;
  void compute_duals(std::vector<double>& y, std::vector<double>& d) const;
  bool dual_feasible(const std::vector<double>& d, double tol) const;
  bool out_of_budget(long& iter, RunResult& why) const;

  void perturb_costs();
  RunResult run_primal();
  RunResult run_dual();
  void pivot(int r, int q, const std::vector<double>& alpha);

  const MilpModel* model_;
  int n_ = 0;
  int m_ = 0;
  internal::SparseColumns cols_;
  std::vector<double> col_scale_;  // structurals then rows (row scale)
  std::vector<double> cost_;
  bool perturbed_ = false;
  std::vector<double> lo_, hi_, orig_lo_, orig_hi_;

  std::vector<double> x_;
  std::vector<BasisStatus> status_;
  std::vector<int> head_;
  internal::BasisFactor factor_;

  long iterations_ = 0;
  Clock::time_point start_;
  std::vector<double> ray_;
  std::vector<double> farkas_;
  std::string diagnostics_;
};

LpSolver::Impl::Impl(const MilpModel& model, LpOptions options)
    : options_(options), model_(&model) {
  n_ = static_cast<int>(model.num_variables());
  m_ = static_cast<int>(model.num_constraints());
  const int total = n_ + m_;

  // Column-wise copy of the row data.
  std::vector<int> counts(n_, 0);
  for (const auto& row : model.constraints()) {
    for (const auto& t : row.terms) ++counts[t.var.index];
  }
  cols_.rows = m_;
  cols_.num_structural = n_;
  cols_.start.assign(n_ + 1, 0);
  for (int j = 0; j < n_; ++j) cols_.start[j + 1] = cols_.start[j] + counts[j];
  cols_.index.resize(cols_.start[n_]);
  cols_.value.resize(cols_.start[n_]);
  std::vector<int> fill(cols_.start.begin(), cols_.start.end() - 1);
  for (int i = 0; i < m_; ++i) {
    for (const auto& t : model.constraints()[i].terms) {
      const int k = fill[t.var.index]++;
      cols_.index[k] = i;
      cols_.value[k] = t.coef;
    }
  }

  col_scale_.assign(total, 1.0);
  std::vector<double> row_scale(m_, 1.0);
  if (options_.scale && cols_.start[n_] > 0) {
    for (int pass = 0; pass < 6; ++pass) {
      std::vector<double> rmin(m_, kInf), rmax(m_, 0.0);
      for (int j = 0; j < n_; ++j) {
        for (int k = cols_.start[j]; k < cols_.start[j + 1]; ++k) {
          const double a = std::abs(cols_.value[k]) * row_scale[cols_.index[k]] *
                           col_scale_[j];
          rmin[cols_.index[k]] = std::min(rmin[cols_.index[k]], a);
          rmax[cols_.index[k]] = std::max(rmax[cols_.index[k]], a);
        }
      }
      for (int i = 0; i < m_; ++i) {
        if (rmax[i] > 0.0) row_scale[i] /= std::sqrt(rmin[i] * rmax[i]);
      }
      for (int j = 0; j < n_; ++j) {
        if (model.variables()[j].kind == VarKind::kBinary) continue;
        double cmin = kInf, cmax = 0.0;
        for (int k = cols_.start[j]; k < cols_.start[j + 1]; ++k) {
          const double a = std::abs(cols_.value[k]) * row_scale[cols_.index[k]] *
                           col_scale_[j];
          cmin = std::min(cmin, a);
          cmax = std::max(cmax, a);
        }
        if (cmax > 0.0) col_scale_[j] /= std::sqrt(cmin * cmax);
      }
    }
    for (int i = 0; i < m_; ++i) row_scale[i] = pow2_round(row_scale[i]);
    for (int j = 0; j < n_; ++j) col_scale_[j] = pow2_round(col_scale_[j]);
    for (int j = 0; j < n_; ++j) {
      for (int k = cols_.start[j]; k < cols_.start[j + 1]; ++k) {
        cols_.value[k] *= row_scale[cols_.index[k]] * col_scale_[j];
      }
    }
  }
  // Logical column n+i carries r'_i = R_i * r_i; store 1/R_i so that
  // original = scaled * col_scale_ holds uniformly.
  for (int i = 0; i < m_; ++i) col_scale_[n_ + i] = 1.0 / row_scale[i];

  cost_.assign(total, 0.0);
  for (const auto& t : model.objective().terms()) {
    cost_[t.var.index] += t.coef * col_scale_[t.var.index];
  }
  orig_lo_.resize(total);
  orig_hi_.resize(total);
  for (int j = 0; j < n_; ++j) {
    orig_lo_[j] = model.variables()[j].lower / col_scale_[j];
    orig_hi_[j] = model.variables()[j].upper / col_scale_[j];
  }
  for (int i = 0; i < m_; ++i) {
    const auto [lo, hi] = MilpModel::row_bounds(model.constraints()[i]);
    orig_lo_[n_ + i] = lo * row_scale[i];
    orig_hi_[n_ + i] = hi * row_scale[i];
  }
  lo_ = orig_lo_;
  hi_ = orig_hi_;
}

void LpSolver::Impl::place_nonbasic(int j) {
  auto& st = status_[j];
  const bool has_lo = std::isfinite(lo_[j]);
  const bool has_hi = std::isfinite(hi_[j]);
  if (st == BasisStatus::kAtLower && !has_lo) st = has_hi ? BasisStatus::kAtUpper : BasisStatus::kFree;
  if (st == BasisStatus::kAtUpper && !has_hi) st = has_lo ? BasisStatus::kAtLower : BasisStatus::kFree;
  if (st == BasisStatus::kFree && has_lo) st = BasisStatus::kAtLower;
  if (st == BasisStatus::kFree && has_hi) st = BasisStatus::kAtUpper;
  switch (st) {
    case BasisStatus::kAtLower:
      x_[j] = lo_[j];
      break;
    case BasisStatus::kAtUpper:
      x_[j] = hi_[j];
      break;
    case BasisStatus::kFree:
      x_[j] = 0.0;
      break;
    case BasisStatus::kBasic:
      break;
  }
}

void LpSolver::Impl::slack_basis() {
  const int total = n_ + m_;
  status_.assign(total, BasisStatus::kBasic);
  head_.resize(m_);
  for (int j = 0; j < n_; ++j) {
    const bool has_lo = std::isfinite(lo_[j]);
    const bool has_hi = std::isfinite(hi_[j]);
    // Cost-aware bound choice makes the slack basis dual feasible whenever
    // the bounds allow it.
    if (has_lo && (cost_[j] >= 0.0 || !has_hi)) {
      status_[j] = BasisStatus::kAtLower;
    } else if (has_hi) {
      status_[j] = BasisStatus::kAtUpper;
    } else {
      status_[j] = BasisStatus::kFree;
    }
    place_nonbasic(j);
  }
  for (int i = 0; i < m_; ++i) head_[i] = n_ + i;
}

void LpSolver::Impl::load_basis(const Basis* warm_start) {
  const int total = n_ + m_;
  x_.assign(total, 0.0);
  if (warm_start != nullptr &&
      static_cast<int>(warm_start->status.size()) == total &&
      std::count(warm_start->status.begin(), warm_start->status.end(),
                 BasisStatus::kBasic) == m_) {
    status_ = warm_start->status;
    head_.clear();
    for (int j = 0; j < total; ++j) {
      if (is_basic(j)) {
        head_.push_back(j);
      } else {
        place_nonbasic(j);
      }
    }
    return;
  }
  slack_basis();
}

bool LpSolver::Impl::refactor() {
  if (factor_.factorize(cols_, head_)) return true;
  diagnostics_ += "singular basis at iteration " + std::to_string(iterations_) +
                  "; restarting from slack basis\n";
  // Keep the structural values where they are, snapped to a bound.
  for (int j = 0; j < n_; ++j) {
    if (!is_basic(j)) continue;
    const double dlo = std::abs(x_[j] - lo_[j]);
    const double dhi = std::abs(x_[j] - hi_[j]);
    status_[j] = dlo <= dhi ? BasisStatus::kAtLower : BasisStatus::kAtUpper;
    place_nonbasic(j);
  }
  for (int i = 0; i < m_; ++i) status_[n_ + i] = BasisStatus::kBasic;
  for (int i = 0; i < m_; ++i) head_[i] = n_ + i;
  return factor_.factorize(cols_, head_);
}

void LpSolver::Impl::compute_basic_values() {
  std::vector<double> rhs(m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (is_basic(j) || x_[j] == 0.0) continue;
    const double v = x_[j];
    cols_.for_each(j, [&](int i, double a) { rhs[i] -= a * v; });
  }
  factor_.ftran(rhs);
  for (int r = 0; r < m_; ++r) x_[head_[r]] = rhs[r];
}

double LpSolver::Impl::max_primal_infeasibility() const {
  double worst = 0.0;
  for (int r = 0; r < m_; ++r) worst = std::max(worst, primal_violation(head_[r]));
  return worst;
}

void LpSolver::Impl::compute_duals(std::vector<double>& y,
                                   std::vector<double>& d) const {
  y.assign(m_, 0.0);
  for (int r = 0; r < m_; ++r) y[r] = cost_[head_[r]];
  factor_.btran(y);
  d.assign(n_ + m_, 0.0);
  for (int j = 0; j < n_ + m_; ++j) {
    if (!is_basic(j)) d[j] = cost_[j] - column_dot(j, y);
  }
}

bool LpSolver::Impl::dual_feasible(const std::vector<double>& d,
                                   double tol) const {
  for (int j = 0; j < n_ + m_; ++j) {
    if (is_basic(j) || lo_[j] == hi_[j]) continue;
    switch (status_[j]) {
      case BasisStatus::kAtLower:
        if (d[j] < -tol) return false;
        break;
      case BasisStatus::kAtUpper:
        if (d[j] > tol) return false;
        break;
      case BasisStatus::kFree:
        if (std::abs(d[j]) > tol) return false;
        break;
      case BasisStatus::kBasic:
        break;
    }
  }
  return true;
}

bool LpSolver::Impl::out_of_budget(long& iter, RunResult& why) const {
  ++iter;
  if (iterations_ + iter > options_.iteration_limit) {
    why = RunResult::kIterationLimit;
    return true;
  }
  if ((iter & 63) == 0 && std::isfinite(options_.time_limit)) {
    const double elapsed =
        std::chrono::duration<double>(Clock::now() - start_).count();
    if (elapsed > options_.time_limit) {
      why = RunResult::kTimeLimit;
      return true;
    }
  }
  return false;
}

// Shifts the costs of nonbasic columns away from their bound by a small
// deterministic amount, breaking the ties behind dual degeneracy.
void LpSolver::Impl::perturb_costs() {
  for (int j = 0; j < n_ + m_; ++j) {
    if (is_basic(j) || lo_[j] == hi_[j]) continue;
    const double u = static_cast<double>((static_cast<unsigned>(j) * 2654435761u) % 1024u) / 1024.0;
    const double eps = 1e-7 * (1.0 + std::abs(cost_[j])) * (1.0 + u);
    if (status_[j] == BasisStatus::kAtLower) cost_[j] += eps;
    if (status_[j] == BasisStatus::kAtUpper) cost_[j] -= eps;
  }
}

void LpSolver::Impl::pivot(int r, int q, const std::vector<double>& alpha) {
  head_[r] = q;
  status_[q] = BasisStatus::kBasic;
  factor_.update(r, alpha);
}

RunResult LpSolver::Impl::run_primal() {
  const double ftol = options_.feasibility_tol;
  const double dtol = options_.optimality_tol;
  constexpr double kPivotTol = 1e-9;
  std::vector<double> cb(m_), y, alpha(m_);
  long iter = 0;
  int degenerate = 0;
  bool bland = false;
  bool rechecked = false;
  int reject_rounds = 0;
  std::vector<char> rejected(n_ + m_, 0);
  RunResult why{};
  for (;;) {
    if (out_of_budget(iter, why)) {
      iterations_ += iter;
      return why;
    }
    if (factor_.num_updates() >= options_.refactor_interval) {
      if (!refactor()) {
        iterations_ += iter;
        return RunResult::kNumerical;
      }
      compute_basic_values();
    }
    bool phase_one = false;
    for (int r = 0; r < m_; ++r) {
      const int b = head_[r];
      if (x_[b] < lo_[b] - ftol) {
        cb[r] = -1.0;
        phase_one = true;
      } else if (x_[b] > hi_[b] + ftol) {
        cb[r] = 1.0;
        phase_one = true;
      } else {
        cb[r] = 0.0;
      }
    }
    if (!phase_one) {
      for (int r = 0; r < m_; ++r) cb[r] = cost_[head_[r]];
    }
    y = cb;
    factor_.btran(y);

    int q = -1;
    double best = 0.0;
    int dir = 0;
    for (int j = 0; j < n_ + m_; ++j) {
      if (is_basic(j) || lo_[j] == hi_[j] || rejected[j]) continue;
      const double dj = (phase_one ? 0.0 : cost_[j]) - column_dot(j, y);
      int dj_dir = 0;
      if (dj < -dtol && x_[j] < hi_[j]) {
        dj_dir = 1;
      } else if (dj > dtol && x_[j] > lo_[j]) {
        dj_dir = -1;
      }
      if (dj_dir == 0) continue;
      if (bland) {
        q = j;
        dir = dj_dir;
        break;
      }
      if (std::abs(dj) > best) {
        best = std::abs(dj);
        q = j;
        dir = dj_dir;
      }
    }
    if (q < 0) {
      if (std::any_of(rejected.begin(), rejected.end(), [](char c) { return c != 0; })) {
        std::fill(rejected.begin(), rejected.end(), 0);
        ++reject_rounds;
        if (!refactor()) {
          iterations_ += iter;
          return RunResult::kNumerical;
        }
        compute_basic_values();
        continue;
      }
      if (phase_one) {
        if (!rechecked) {
          rechecked = true;
          if (!refactor()) {
            iterations_ += iter;
            return RunResult::kNumerical;
          }
          compute_basic_values();
          continue;
        }
        farkas_ = y;
        iterations_ += iter;
        return RunResult::kInfeasible;
      }
      iterations_ += iter;
      return RunResult::kOptimal;
    }

    std::fill(alpha.begin(), alpha.end(), 0.0);
    cols_.for_each(q, [&](int i, double a) { alpha[i] = a; });
    factor_.ftran(alpha);

    // Ratio test. Basic r moves at rate -dir * alpha[r] per unit step.
    double relaxed = kInf;
    for (int r = 0; r < m_; ++r) {
      const double rate = -dir * alpha[r];
      if (std::abs(rate) < kPivotTol) continue;
      const int b = head_[r];
      if (rate < 0.0) {
        if (x_[b] > hi_[b] + ftol) {
          relaxed = std::min(relaxed, (x_[b] - hi_[b] + ftol) / -rate);
        } else if (x_[b] >= lo_[b] - ftol && std::isfinite(lo_[b])) {
          relaxed = std::min(relaxed, (x_[b] - lo_[b] + ftol) / -rate);
        }
      } else {
        if (x_[b] < lo_[b] - ftol) {
          relaxed = std::min(relaxed, (lo_[b] - x_[b] + ftol) / rate);
        } else if (x_[b] <= hi_[b] + ftol && std::isfinite(hi_[b])) {
          relaxed = std::min(relaxed, (hi_[b] - x_[b] + ftol) / rate);
        }
      }
    }
    int leave = -1;
    double leave_bound = 0.0;
    double step = kInf;
    double best_rate = 0.0;
    for (int r = 0; r < m_; ++r) {
      const double rate = -dir * alpha[r];
      if (std::abs(rate) < kPivotTol) continue;
      const int b = head_[r];
      double bound = 0.0;
      bool blocks = false;
      if (rate < 0.0) {
        if (x_[b] > hi_[b] + ftol) {
          bound = hi_[b];
          blocks = true;
        } else if (x_[b] >= lo_[b] - ftol && std::isfinite(lo_[b])) {
          bound = lo_[b];
          blocks = true;
        }
      } else {
        if (x_[b] < lo_[b] - ftol) {
          bound = lo_[b];
          blocks = true;
        } else if (x_[b] <= hi_[b] + ftol && std::isfinite(hi_[b])) {
          bound = hi_[b];
          blocks = true;
        }
      }
      if (!blocks) continue;
      const double ratio = std::max(0.0, (bound - x_[b]) / rate);
      if (bland) {
        if (ratio < step || (ratio == step && leave >= 0 && b < head_[leave])) {
          step = ratio;
          leave = r;
          leave_bound = bound;
        }
      } else if (ratio <= relaxed && std::abs(rate) > best_rate) {
        best_rate = std::abs(rate);
        step = ratio;
        leave = r;
        leave_bound = bound;
      }
    }
    const double range = hi_[q] - lo_[q];
    const bool flip = std::isfinite(range) &&
                      (leave < 0 || range <= (bland ? step : relaxed));
    if (leave < 0 && !flip) {
      if (phase_one) {
        iterations_ += iter;
        diagnostics_ += "phase one direction without blocking row\n";
        return RunResult::kNumerical;
      }
      ray_.assign(n_ + m_, 0.0);
      ray_[q] = dir;
      for (int r = 0; r < m_; ++r) ray_[head_[r]] = -dir * alpha[r];
      iterations_ += iter;
      return RunResult::kUnbounded;
    }
    if (!flip && std::abs(alpha[leave]) < 1e-7 && !bland && reject_rounds < 2) {
      // Unstable pivot; try another entering column.
      rejected[q] = 1;
      continue;
    }
    if (flip) step = range;
    if (step <= 1e-12) {
      if (++degenerate > options_.bland_threshold) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
    std::fill(rejected.begin(), rejected.end(), 0);
    reject_rounds = 0;
    if (step > 0.0) {
      for (int r = 0; r < m_; ++r) x_[head_[r]] -= dir * alpha[r] * step;
    }
    if (flip) {
      status_[q] = dir > 0 ? BasisStatus::kAtUpper : BasisStatus::kAtLower;
      x_[q] = dir > 0 ? hi_[q] : lo_[q];
      continue;
    }
    x_[q] += dir * step;
    const int out = head_[leave];
    x_[out] = leave_bound;
    status_[out] = leave_bound == lo_[out] ? BasisStatus::kAtLower
                                           : BasisStatus::kAtUpper;
    pivot(leave, q, alpha);
  }
}

RunResult LpSolver::Impl::run_dual() {
  const double ftol = options_.feasibility_tol;
  const double dtol = options_.optimality_tol;
  // Degenerate pivots in a row before the costs are perturbed.
  constexpr int kPerturbAfter = 500;
  // Smaller row entries are treated as zero; an infeasibility claim that
  // depends on them is re-examined by the primal phase one.
  constexpr double kPivotTol = 1e-7;
  std::vector<double> y, d, rho(m_), alpha(m_), row(n_ + m_);
  long iter = 0;
  int degenerate = 0;
  bool bland = false;
  bool rechecked = false;
  RunResult why{};
  for (;;) {
    if (out_of_budget(iter, why)) {
      iterations_ += iter;
      return why;
    }
    if (factor_.num_updates() >= options_.refactor_interval) {
      if (!refactor()) {
        iterations_ += iter;
        return RunResult::kNumerical;
      }
      compute_basic_values();
    }
    compute_duals(y, d);
    if (!dual_feasible(d, 1e3 * dtol)) {
      iterations_ += iter;
      return RunResult::kLostDualFeasibility;
    }

    int leave = -1;
    double worst = ftol;
    for (int r = 0; r < m_; ++r) {
      const double v = primal_violation(head_[r]);
      if (v <= ftol) continue;
      if (bland) {
        if (leave < 0 || head_[r] < head_[leave]) leave = r;
      } else if (v > worst) {
        worst = v;
        leave = r;
      }
    }
    if (leave < 0) {
      iterations_ += iter;
      return RunResult::kOptimal;
    }
    const int p = head_[leave];
    const bool up = x_[p] < lo_[p];
    const double target = up ? lo_[p] : hi_[p];
    const double delta = up ? 1.0 : -1.0;

    std::fill(rho.begin(), rho.end(), 0.0);
    rho[leave] = 1.0;
    factor_.btran(rho);

    // x_p moves by -row[j] * dx_j; pick j whose move pushes x_p toward target.
    double relaxed = kInf;
    for (int j = 0; j < n_ + m_; ++j) {
      row[j] = 0.0;
      if (is_basic(j) || lo_[j] == hi_[j]) continue;
      const double a = column_dot(j, rho);
      row[j] = a;
      if (std::abs(a) < kPivotTol) continue;
      const bool inc = a * delta < 0.0;
      const bool can = inc ? (status_[j] != BasisStatus::kAtUpper)
                           : (status_[j] != BasisStatus::kAtLower);
      if (!can) continue;
      relaxed = std::min(relaxed, (std::abs(d[j]) + dtol) / std::abs(a));
    }
    int q = -1;
    double best_a = 0.0;
    double best_ratio = kInf;
    for (int j = 0; j < n_ + m_; ++j) {
      const double a = row[j];
      if (is_basic(j) || lo_[j] == hi_[j] || std::abs(a) < kPivotTol) continue;
      const bool inc = a * delta < 0.0;
      const bool can = inc ? (status_[j] != BasisStatus::kAtUpper)
                           : (status_[j] != BasisStatus::kAtLower);
      if (!can) continue;
      const double ratio = std::abs(d[j]) / std::abs(a);
      if (bland) {
        if (ratio < best_ratio) {
          best_ratio = ratio;
          q = j;
        }
      } else if (ratio <= relaxed && std::abs(a) > best_a) {
        best_a = std::abs(a);
        best_ratio = ratio;
        q = j;
      }
    }
    if (q < 0) {
      if (!rechecked) {
        // The violation may be drift; recompute from a fresh factor first.
        rechecked = true;
        if (!refactor()) {
          iterations_ += iter;
          return RunResult::kNumerical;
        }
        compute_basic_values();
        continue;
      }
      farkas_ = rho;
      for (auto& v : farkas_) v *= delta;
      iterations_ += iter;
      return RunResult::kInfeasible;
    }
    std::fill(alpha.begin(), alpha.end(), 0.0);
    cols_.for_each(q, [&](int i, double a) { alpha[i] = a; });
    factor_.ftran(alpha);
    if (std::abs(alpha[leave] - row[q]) > 1e-6 * std::abs(row[q]) + 1e-12) {
      // Factor drifted; rebuild and retry the iteration.
      if (!refactor()) {
        iterations_ += iter;
        return RunResult::kNumerical;
      }
      compute_basic_values();
      continue;
    }
    if (best_ratio <= 1e-12) {
      if (++degenerate > kPerturbAfter && !perturbed_) {
        perturb_costs();
        perturbed_ = true;
        degenerate = 0;
        continue;
      }
      if (degenerate > options_.bland_threshold) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
    rechecked = false;
    const double dq = (x_[p] - target) / alpha[leave];
    for (int r = 0; r < m_; ++r) x_[head_[r]] -= alpha[r] * dq;
    x_[q] += dq;
    x_[p] = target;
    status_[p] = up ? BasisStatus::kAtLower : BasisStatus::kAtUpper;
    pivot(leave, q, alpha);
  }
}

LpSolution LpSolver::Impl::solve(const Basis* warm_start) {
  start_ = Clock::now();
  iterations_ = 0;
  ray_.clear();
  farkas_.clear();
  diagnostics_.clear();

  LpSolution out;
  for (int j = 0; j < n_ + m_; ++j) {
    if (lo_[j] > hi_[j]) {
      out.status = LpStatus::kInfeasible;
      out.diagnostics = "empty bounds on column " + std::to_string(j);
      return out;
    }
  }
  load_basis(warm_start);
  if (!refactor()) {
    out.status = LpStatus::kNumericalError;
    out.diagnostics = diagnostics_;
    return out;
  }
  compute_basic_values();

  RunResult result = RunResult::kNumerical;
  std::vector<double> y, d;
  for (int attempt = 0; attempt < 4; ++attempt) {
    compute_duals(y, d);
    const bool primal_ok = max_primal_infeasibility() <= options_.feasibility_tol;
    if (!primal_ok && dual_feasible(d, options_.optimality_tol)) {
      const std::vector<double> cost = cost_;
      perturbed_ = false;
      result = run_dual();
      // The primal pass removes a cost perturbation from an optimal basis
      // and its phase one confirms a dual infeasibility claim.
      if (perturbed_) cost_ = cost;
      if ((perturbed_ && result == RunResult::kOptimal) ||
          result == RunResult::kLostDualFeasibility || result == RunResult::kNumerical ||
          result == RunResult::kInfeasible) {
        result = run_primal();
      }
    } else {
      result = run_primal();
    }
    if (result != RunResult::kOptimal) break;
    // Verify on a fresh factorization before accepting.
    if (!refactor()) {
      result = RunResult::kNumerical;
      break;
    }
    compute_basic_values();
    compute_duals(y, d);
    if (max_primal_infeasibility() <= options_.feasibility_tol &&
        dual_feasible(d, 1e2 * options_.optimality_tol)) {
      break;
    }
  }

  switch (result) {
    case RunResult::kOptimal:
      out.status = LpStatus::kOptimal;
      break;
    case RunResult::kInfeasible:
      out.status = LpStatus::kInfeasible;
      break;
    case RunResult::kUnbounded:
      out.status = LpStatus::kUnbounded;
      break;
    case RunResult::kIterationLimit:
      out.status = LpStatus::kIterationLimit;
      break;
    case RunResult::kTimeLimit:
      out.status = LpStatus::kTimeLimit;
      break;
    default:
      out.status = LpStatus::kNumericalError;
      break;
  }
  out.iterations = iterations_;
  out.diagnostics = diagnostics_;
  out.basis.status = status_;

  out.primal.resize(n_);
  for (int j = 0; j < n_; ++j) out.primal[j] = x_[j] * col_scale_[j];
  out.row_activity.resize(m_);
  for (int i = 0; i < m_; ++i) {
    out.row_activity[i] = x_[n_ + i] * col_scale_[n_ + i];
  }
  compute_duals(y, d);
  out.duals.resize(m_);
  for (int i = 0; i < m_; ++i) out.duals[i] = y[i] / col_scale_[n_ + i];
  out.reduced_costs.resize(n_);
  for (int j = 0; j < n_; ++j) out.reduced_costs[j] = d[j] / col_scale_[j];
  out.objective = model_->objective_value(out.primal);
  if (out.status == LpStatus::kUnbounded) {
    out.ray.resize(n_);
    for (int j = 0; j < n_; ++j) out.ray[j] = ray_[j] * col_scale_[j];
  }
  if (out.status == LpStatus::kInfeasible && !farkas_.empty()) {
    out.farkas.resize(m_);
    for (int i = 0; i < m_; ++i) out.farkas[i] = farkas_[i] / col_scale_[n_ + i];
  }
  return out;
}

LpSolver::LpSolver(const MilpModel& model, LpOptions options)
    : impl_(std::make_unique<Impl>(model, options)) {}
LpSolver::~LpSolver() = default;
LpSolver::LpSolver(LpSolver&&) noexcept = default;
LpSolver& LpSolver::operator=(LpSolver&&) noexcept = default;

void LpSolver::set_bounds(VarId var, double lower, double upper) {
  impl_->set_bounds(var, lower, upper);
}
double LpSolver::lower(VarId var) const { return impl_->lower(var); }
double LpSolver::upper(VarId var) const { return impl_->upper(var); }
void LpSolver::reset_bounds() { impl_->reset_bounds(); }
LpOptions& LpSolver::options() { return impl_->options_; }
LpSolution LpSolver::solve(const Basis* warm_start) {
  return impl_->solve(warm_start);
}

LpSolution solve_lp(const MilpModel& model, const LpOptions& options) {
  LpSolver solver(model, options);
  return solver.solve();
}

}  // namespace edtr

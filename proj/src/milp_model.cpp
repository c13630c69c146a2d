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

#include "edtr/milp_model.hpp"

#include <algorithm>
#include <cmath>

namespace edtr {

LinearExpr& LinearExpr::add(VarId var, double coef) {
  if (var.index < 0) throw ModelError("linear term references an invalid variable");
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), var,
      [](const LinearTerm& t, VarId v) { return t.var < v; });
  if (it != terms_.end() && it->var == var) {
    it->coef += coef;
    if (it->coef == 0.0) terms_.erase(it);
  } else if (coef != 0.0) {
    terms_.insert(it, LinearTerm{var, coef});
  }
  return *this;
}

LinearExpr& LinearExpr::add(const LinearExpr& other, double scale) {
  if (&other == this) {
    LinearExpr copy = other;
    return add(copy, scale);
  }
  for (const auto& t : other.terms_) add(t.var, t.coef * scale);
  constant_ += other.constant_ * scale;
  return *this;
}

LinearExpr& LinearExpr::operator*=(double scale) {
  if (scale == 0.0) {
    terms_.clear();
    constant_ = 0.0;
    return *this;
  }
  for (auto& t : terms_) t.coef *= scale;
  constant_ *= scale;
  return *this;
}

double LinearExpr::evaluate(std::span<const double> values) const {
  double sum = constant_;
  for (const auto& t : terms_) sum += t.coef * values[t.var.index];
  return sum;
}

VarId MilpModel::add_variable(std::string name, VarKind kind, double lower,
                              double upper) {
  if (kind == VarKind::kBinary) {
    lower = std::max(lower, 0.0);
    upper = std::min(upper, 1.0);
  }
  if (!(lower <= upper)) {
    throw ModelError("variable '" + name + "' has empty bounds");
  }
  const auto id = static_cast<std::int32_t>(variables_.size());
  if (!var_index_.emplace(name, id).second) {
    throw ModelError("duplicate variable name '" + name + "'");
  }
  variables_.push_back(Variable{std::move(name), kind, lower, upper});
  return VarId{id};
}

RowId MilpModel::add_constraint(std::string name, const LinearExpr& expr,
                                Sense sense, double rhs,
                                std::optional<double> range) {
  for (const auto& t : expr.terms()) {
    if (t.var.index >= static_cast<std::int32_t>(variables_.size())) {
      throw ModelError("constraint '" + name + "' references unknown variable");
    }
  }
  const auto id = static_cast<std::int32_t>(constraints_.size());
  if (!row_index_.emplace(name, id).second) {
    throw ModelError("duplicate constraint name '" + name + "'");
  }
  constraints_.push_back(Constraint{std::move(name), expr.terms(), sense,
                                    rhs - expr.constant(), range});
  return RowId{id};
}

RowId MilpModel::add_interval(std::string name, const LinearExpr& expr,
                              double lower, double upper) {
  if (!(lower <= upper)) {
    throw ModelError("interval row '" + name + "' has lower > upper");
  }
  if (lower == upper) {
    return add_constraint(std::move(name), expr, Sense::kEqual, lower);
  }
  if (std::isinf(lower)) {
    return add_constraint(std::move(name), expr, Sense::kLessEqual, upper);
  }
  if (std::isinf(upper)) {
    return add_constraint(std::move(name), expr, Sense::kGreaterEqual, lower);
  }
  return add_constraint(std::move(name), expr + LinearExpr(-lower),
                        Sense::kGreaterEqual, 0.0, upper - lower);
}

void MilpModel::set_variable_bounds(VarId var, double lower, double upper) {
  auto& v = variables_.at(var.index);
  if (!(lower <= upper)) {
    throw ModelError("variable '" + v.name + "' would get empty bounds");
  }
  v.lower = lower;
  v.upper = upper;
}

std::size_t MilpModel::num_binaries() const {
  return static_cast<std::size_t>(
      std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) {
        return v.kind == VarKind::kBinary;
      }));
}

std::optional<VarId> MilpModel::find_variable(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  if (it == var_index_.end()) return std::nullopt;
  return VarId{it->second};
}

std::optional<RowId> MilpModel::find_constraint(std::string_view name) const {
  auto it = row_index_.find(std::string(name));
  if (it == row_index_.end()) return std::nullopt;
  return RowId{it->second};
}

std::pair<double, double> MilpModel::row_bounds(const Constraint& row) {
  const double rhs = row.rhs;
  if (!row.range) {
    switch (row.sense) {
      case Sense::kLessEqual:
        return {-kInf, rhs};
      case Sense::kGreaterEqual:
        return {rhs, kInf};
      case Sense::kEqual:
        return {rhs, rhs};
    }
  }
  const double r = *row.range;
  switch (row.sense) {
    case Sense::kLessEqual:
      return {rhs - std::abs(r), rhs};
    case Sense::kGreaterEqual:
      return {rhs, rhs + std::abs(r)};
    case Sense::kEqual:
      return r >= 0.0 ? std::pair{rhs, rhs + r} : std::pair{rhs + r, rhs};
  }
  return {-kInf, kInf};
}

double MilpModel::row_activity(RowId row, std::span<const double> values) const {
  double sum = 0.0;
  for (const auto& t : constraints_.at(row.index).terms) {
    sum += t.coef * values[t.var.index];
  }
  return sum;
}

double MilpModel::max_violation(std::span<const double> values) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    const auto& v = variables_[j];
    worst = std::max({worst, v.lower - values[j], values[j] - v.upper});
  }
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const auto [lo, hi] = row_bounds(constraints_[i]);
    const double act = row_activity(RowId{static_cast<std::int32_t>(i)}, values);
    worst = std::max({worst, lo - act, act - hi});
  }
  return worst;
}

double MilpModel::max_integrality_violation(
    std::span<const double> values) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < variables_.size(); ++j) {
    if (variables_[j].kind != VarKind::kBinary) continue;
    worst = std::max(worst, std::abs(values[j] - std::round(values[j])));
  }
  return worst;
}

std::vector<std::string> MilpModel::validate() const {
  std::vector<std::string> issues;
  const auto n = static_cast<std::int32_t>(variables_.size());
  for (const auto& v : variables_) {
    if (!(v.lower <= v.upper)) issues.push_back("empty bounds: " + v.name);
    if (v.kind == VarKind::kBinary && (v.lower < 0.0 || v.upper > 1.0)) {
      issues.push_back("binary outside [0,1]: " + v.name);
    }
  }
  for (const auto& c : constraints_) {
    for (const auto& t : c.terms) {
      if (t.var.index < 0 || t.var.index >= n) {
        issues.push_back("dangling variable in row " + c.name);
        break;
      }
    }
  }
  for (const auto& t : objective_.terms()) {
    if (t.var.index < 0 || t.var.index >= n) {
      issues.push_back("dangling variable in objective");
      break;
    }
  }
  return issues;
}

bool MilpModel::structurally_equal(const MilpModel& other) const {
  return variables_ == other.variables_ && constraints_ == other.constraints_ &&
         objective_ == other.objective_;
}

}  // namespace edtr

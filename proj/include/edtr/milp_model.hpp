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

#ifndef EDTR_MILP_MODEL_HPP_
#define EDTR_MILP_MODEL_HPP_

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace edtr {

constexpr double kInf = std::numeric_limits<double>::infinity();

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VarId {
  std::int32_t index = -1;
  friend bool operator==(VarId, VarId) = default;
  friend auto operator<=>(VarId, VarId) = default;
};

struct RowId {
  std::int32_t index = -1;
  friend bool operator==(RowId, RowId) = default;
};

enum class VarKind { kContinuous, kBinary };
enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct LinearTerm {
  VarId var;
  double coef = 0.0;
  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

// Affine expression sum(coef * var) + constant. Terms are kept sorted by
// variable with duplicates merged and zero coefficients dropped.
class LinearExpr {
 public:
  LinearExpr() = default;
  explicit LinearExpr(double constant) : constant_(constant) {}
  LinearExpr(VarId var, double coef = 1.0) { add(var, coef); }  // NOLINT

  LinearExpr& add(VarId var, double coef);
  LinearExpr& add(const LinearExpr& other, double scale = 1.0);
  LinearExpr& add_constant(double value) {
    constant_ += value;
    return *this;
  }

  LinearExpr& operator+=(const LinearExpr& other) { return add(other, 1.0); }
  LinearExpr& operator-=(const LinearExpr& other) { return add(other, -1.0); }
  LinearExpr& operator*=(double scale);

  friend LinearExpr operator+(LinearExpr a, const LinearExpr& b) { return a += b; }
  friend LinearExpr operator-(LinearExpr a, const LinearExpr& b) { return a -= b; }
  friend LinearExpr operator*(LinearExpr a, double s) { return a *= s; }
  friend LinearExpr operator*(double s, LinearExpr a) { return a *= s; }

  const std::vector<LinearTerm>& terms() const { return terms_; }
  double constant() const { return constant_; }
  bool is_constant() const { return terms_.empty(); }

  double evaluate(std::span<const double> values) const;

  friend bool operator==(const LinearExpr&, const LinearExpr&) = default;

 private:
  std::vector<LinearTerm> terms_;
  double constant_ = 0.0;
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = kInf;
  friend bool operator==(const Variable&, const Variable&) = default;
};

// A linear row `terms sense rhs`. With `range` set the row is an interval
// row following MPS RANGES semantics (see row_bounds()).
struct Constraint {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  std::optional<double> range;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

// Solver-agnostic mixed-binary linear model, always a minimization.
class MilpModel {
 public:
  MilpModel() = default;
  explicit MilpModel(std::string name) : name_(std::move(name)) {}

  VarId add_variable(std::string name, VarKind kind, double lower,
                     double upper);
  VarId add_continuous(std::string name, double lower, double upper) {
    return add_variable(std::move(name), VarKind::kContinuous, lower, upper);
  }
  VarId add_binary(std::string name) {
    return add_variable(std::move(name), VarKind::kBinary, 0.0, 1.0);
  }

  // The constant part of `expr` is moved to the right-hand side.
  RowId add_constraint(std::string name, const LinearExpr& expr, Sense sense,
                       double rhs, std::optional<double> range = std::nullopt);
  // lower <= expr <= upper, emitted as a single ranged row when both are
  // finite and different.
  RowId add_interval(std::string name, const LinearExpr& expr, double lower,
                     double upper);

  void set_objective(const LinearExpr& objective) { objective_ = objective; }
  void add_to_objective(const LinearExpr& expr) { objective_ += expr; }

  void set_variable_bounds(VarId var, double lower, double upper);

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }
  std::size_t num_binaries() const;

  const Variable& variable(VarId id) const { return variables_.at(id.index); }
  const Constraint& constraint(RowId id) const {
    return constraints_.at(id.index);
  }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const LinearExpr& objective() const { return objective_; }

  std::optional<VarId> find_variable(std::string_view name) const;
  std::optional<RowId> find_constraint(std::string_view name) const;

  // Free-form annotations (case id, variant, horizon); not exported to MPS.
  std::map<std::string, std::string>& metadata() { return metadata_; }
  const std::map<std::string, std::string>& metadata() const {
    return metadata_;
  }

  // Row activity bounds [lo, hi] implied by sense, rhs and range.
  static std::pair<double, double> row_bounds(const Constraint& row);

  double row_activity(RowId row, std::span<const double> values) const;
  double objective_value(std::span<const double> values) const {
    return objective_.evaluate(values);
  }
  // Largest bound or row violation of `values`.
  double max_violation(std::span<const double> values) const;
  // Largest distance of a binary variable from {0, 1}.
  double max_integrality_violation(std::span<const double> values) const;

  // Structural checks; empty when the model is well formed.
  std::vector<std::string> validate() const;

  // Row/column/bound/objective equality. Metadata is ignored.
  bool structurally_equal(const MilpModel& other) const;

 private:
  std::string name_ = "model";
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  LinearExpr objective_;
  std::unordered_map<std::string, std::int32_t> var_index_;
  std::unordered_map<std::string, std::int32_t> row_index_;
  std::map<std::string, std::string> metadata_;
};

}  // namespace edtr

#endif  // EDTR_MILP_MODEL_HPP_

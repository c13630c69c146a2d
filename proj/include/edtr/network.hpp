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

// Network case data: buses, generalized branches with optional tap changer
// and phase shifter, generators with convex piecewise-linear cost, and the
// hourly demand profile. Powers are in MW and angles in radians; the JSON
// case file uses degrees (see docs/case-format.md).

#ifndef EDTR_NETWORK_HPP_
#define EDTR_NETWORK_HPP_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace edtr {

inline constexpr double kDefaultAngleBound = 0.6;  // rad

struct Bus {
  std::string id;
  bool is_reference = false;
  double angle_lo = -kDefaultAngleBound;
  double angle_hi = kDefaultAngleBound;
  friend bool operator==(const Bus&, const Bus&) = default;
};

struct BranchDevice {
  // Strictly increasing ratios. Empty means the ratio is fixed at 1.
  std::vector<double> tap_set;
  // [lo, hi] in radians. lo == hi means a fixed shift of lo.
  double shift_lo = 0.0;
  double shift_hi = 0.0;
  double tap_step_max = 0.0;
  double shift_step_max = 0.0;  // rad
  int tap_adjust_budget = 0;
  int shift_adjust_budget = 0;
  double initial_tap = 1.0;
  double initial_shift = 0.0;  // rad

  // More than one ratio to choose from.
  bool adjustable_tap() const { return tap_set.size() > 1; }
  bool adjustable_shift() const { return shift_lo < shift_hi; }
  // Ratio used when the tap is not adjustable.
  double fixed_tap() const { return tap_set.empty() ? 1.0 : tap_set.front(); }

  friend bool operator==(const BranchDevice&, const BranchDevice&) = default;
};

struct Branch {
  std::string id;
  std::string from_bus;
  std::string to_bus;
  double x = 0.0;
  double r = 0.0;
  double b = 0.0;
  double rating = 0.0;  // MW, 0 = unlimited
  BranchDevice device;
  friend bool operator==(const Branch&, const Branch&) = default;
};

struct Generator {
  std::string id;
  std::string bus;
  double p_min = 0.0;
  double p_max = 0.0;
  double ramp_up = 0.0;    // MW/h, +inf when absent
  double ramp_down = 0.0;  // MW/h, +inf when absent
  std::optional<double> initial_p;
  // (MW, $/h) breakpoints of a convex piecewise-linear cost.
  std::vector<std::pair<double, double>> cost_curve;
  friend bool operator==(const Generator&, const Generator&) = default;
};

struct NetworkCase {
  std::string name;
  double base_mva = 100.0;
  int horizon = 1;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  // demand[bus index][hour], MW.
  std::vector<std::vector<double>> demand;
  std::vector<double> reserve;  // MW per hour

  std::optional<std::size_t> bus_index(std::string_view id) const;
  friend bool operator==(const NetworkCase&, const NetworkCase&) = default;
};

struct Diagnostic {
  std::string entity;  // e.g. "branch 5"
  std::string rule;    // e.g. "duplicate-tap"
  std::string message;
  std::string to_string() const { return entity + ": " + message + " [" + rule + "]"; }
};

class CaseError : public std::runtime_error {
 public:
  explicit CaseError(const std::string& what, std::vector<Diagnostic> diagnostics = {})
      : std::runtime_error(what), diagnostics_(std::move(diagnostics)) {}
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// One diagnostic per violated invariant; empty when the case is valid.
std::vector<Diagnostic> validate_case(const NetworkCase& c);

// Parses and validates a JSON case document. Throws CaseError naming the
// offending field or listing the invariant violations.
NetworkCase load_case(std::string_view text);
NetworkCase load_case_file(const std::string& path);

// Inverse of load_case (angles written in degrees).
std::string serialize_case(const NetworkCase& c);

// Cost of generator `g` at output `p` MW by interpolating its curve.
double generator_cost(const Generator& g, double p);

}  // namespace edtr

#endif  // EDTR_NETWORK_HPP_

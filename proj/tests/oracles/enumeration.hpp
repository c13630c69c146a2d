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

#ifndef EDTR_TESTS_ORACLES_ENUMERATION_HPP_
#define EDTR_TESTS_ORACLES_ENUMERATION_HPP_

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "edtr/formulation.hpp"

namespace edtr::oracle {

// Every H-hour sequence over `values` whose hour-to-hour moves (starting
// from `initial`) stay within `step` and change in at most `budget` hours.
inline std::vector<std::vector<double>> device_sequences(const std::vector<double>& values,
                                                         double initial, double step,
                                                         int budget, int hours) {
  std::vector<std::vector<double>> out;
  std::vector<double> seq;
  std::function<void(double, int)> rec = [&](double prev, int changes) {
    if (static_cast<int>(seq.size()) == hours) {
      out.push_back(seq);
      return;
    }
    for (double v : values) {
      const double move = std::abs(v - prev);
      const bool changed = move > 1e-12;
      if (move > step + 1e-9 || changes + (changed ? 1 : 0) > budget) continue;
      seq.push_back(v);
      rec(v, changes + (changed ? 1 : 0));
      seq.pop_back();
    }
  };
  rec(initial, 0);
  return out;
}

inline std::vector<double> grid_points(double lo, double hi, double step) {
  std::vector<double> pts;
  for (int k = 0; lo + k * step <= hi + 1e-9; ++k) pts.push_back(lo + k * step);
  return pts;
}

struct EnumerationResult {
  double best = std::numeric_limits<double>::infinity();  // inf when none feasible
  long schedules = 0;
};

// Number of device schedules enumerate_devices() would solve.
inline long schedule_count(const NetworkCase& c) {
  long n = 1;
  for (const auto& br : c.branches) {
    const auto& d = br.device;
    if (d.tap_set.size() > 1) {
      n *= static_cast<long>(device_sequences(d.tap_set, d.initial_tap, d.tap_step_max,
                                              d.tap_adjust_budget, c.horizon)
                                 .size());
    }
    if (d.shift_lo < d.shift_hi) {
      n *= static_cast<long>(device_sequences(grid_points(d.shift_lo, d.shift_hi,
                                                          d.shift_step_max),
                                              d.initial_shift, d.shift_step_max,
                                              d.shift_adjust_budget, c.horizon)
                                 .size());
    }
  }
  return n;
}

// Minimum ED objective over all admissible tap sequences and grid shift
// sequences, each solved as a fixed-device LP.
inline EnumerationResult enumerate_devices(const NetworkCase& c) {
  const std::size_t nl = c.branches.size();
  struct Choice {
    std::size_t branch;
    bool is_tap;
    std::vector<std::vector<double>> options;
  };
  std::vector<Choice> choices;
  std::vector<std::vector<double>> taps(nl, std::vector<double>(c.horizon));
  std::vector<std::vector<double>> shifts(nl, std::vector<double>(c.horizon));
  for (std::size_t l = 0; l < nl; ++l) {
    const auto& d = c.branches[l].device;
    const double fixed_tap = d.tap_set.empty() ? 1.0 : d.tap_set.front();
    for (int h = 0; h < c.horizon; ++h) {
      taps[l][h] = fixed_tap;
      shifts[l][h] = d.shift_lo;
    }
    if (d.tap_set.size() > 1) {
      choices.push_back({l, true, device_sequences(d.tap_set, d.initial_tap, d.tap_step_max,
                                                   d.tap_adjust_budget, c.horizon)});
    }
    if (d.shift_lo < d.shift_hi) {
      choices.push_back(
          {l, false,
           device_sequences(grid_points(d.shift_lo, d.shift_hi, d.shift_step_max),
                            d.initial_shift, d.shift_step_max, d.shift_adjust_budget,
                            c.horizon)});
    }
  }
  EnumerationResult result;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == choices.size()) {
      ++result.schedules;
      const EdResult r = solve_ed(build_fixed_schedule(c, taps, shifts), c);
      if (r.solution.status == DispatchStatus::kOptimal) {
        result.best = std::min(result.best, r.solution.objective);
      }
      return;
    }
    auto& target = choices[k].is_tap ? taps : shifts;
    for (const auto& seq : choices[k].options) {
      target[choices[k].branch] = seq;
      rec(k + 1);
    }
  };
  rec(0);
  return result;
}

}  // namespace edtr::oracle

#endif  // EDTR_TESTS_ORACLES_ENUMERATION_HPP_

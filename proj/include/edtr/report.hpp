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

// Run reports and the CSV artifacts written by the edtr tool. Layouts are
// documented in docs/file-formats.md.

#ifndef EDTR_REPORT_HPP_
#define EDTR_REPORT_HPP_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "edtr/formulation.hpp"
#include "edtr/network.hpp"
#include "edtr/solution.hpp"

namespace edtr {

// gen,hour,MW
void write_generation_csv(const NetworkCase& c, const DispatchSolution& s, std::ostream& out);
// branch,hour,tap,shift_deg for branches that carry a device.
void write_devices_csv(const NetworkCase& c, const DispatchSolution& s, std::ostream& out);
// branch,hour,MW,limit,binding; limit is blank for unrated branches.
void write_flows_csv(const NetworkCase& c, const DispatchSolution& s, std::ostream& out);

// kind,id,hour,value with kinds objective, p, theta_deg, tap, shift_deg.
// Values use 17 significant digits so a reread is lossless up to the
// degree conversion.
void write_schedule_csv(const NetworkCase& c, const DispatchSolution& s, std::ostream& out);

class ScheduleError : public SolutionError {
 public:
  using SolutionError::SolutionError;
};

// Parses a schedule CSV against `c`. Flows and adjustment counts are
// recomputed. Throws ScheduleError naming the line of a malformed row, an
// unknown id, an hour out of range, a duplicate or a missing entry.
DispatchSolution read_schedule_csv(const NetworkCase& c, std::istream& in);

struct VariantRun {
  std::string name;  // "ED0" or "ED1"
  DispatchSolution solution;
  std::string error;
  std::optional<CheckReport> checks;  // when a schedule exists
  std::optional<double> max_dc_rel_err;
};

struct RunReport {
  std::string case_id;
  double gap = 0.0;  // requested relative gap
  std::vector<VariantRun> runs;

  const VariantRun* find(const std::string& name) const;
  // (ED0 - ED1) / ED0 * 100 when both are optimal.
  std::optional<double> cost_reduction() const;
};

// "0.01%" for 1e-4.
std::string format_percent(double fraction);

void write_report_text(const RunReport& report, std::ostream& out);
// case,variant,status,cost,time_s,gap_percent,nodes,cost_reduction_percent,checks
void write_report_csv(const RunReport& report, std::ostream& out);

}  // namespace edtr

#endif  // EDTR_REPORT_HPP_

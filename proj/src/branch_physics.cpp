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

#include "edtr/branch_physics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace edtr {

const char* to_string(DispatchStatus status) {
  switch (status) {
    case DispatchStatus::kOptimal:
      return "optimal";
    case DispatchStatus::kFeasibleGap:
      return "feasible-gap";
    case DispatchStatus::kInfeasible:
      return "infeasible";
    case DispatchStatus::kUnbounded:
      return "unbounded";
    case DispatchStatus::kLimit:
      return "limit";
    case DispatchStatus::kError:
      return "error";
  }
  return "error";
}

double ac_sending_power(std::complex<double> v_from, std::complex<double> v_to,
                        ComplexTap tap, double r, double x, double b) {
  using namespace std::complex_literals;
  const std::complex<double> t = std::polar(tap.ratio, tap.shift);
  const std::complex<double> y = 1.0 / std::complex<double>(r, x);
  const std::complex<double> vm = v_from / t;
  const std::complex<double> current = 1i * vm * (b / 2.0) + (vm - v_to) * y;
  return std::real(vm * std::conj(current));
}

namespace {

void require_shape(const std::vector<std::vector<double>>& m, std::size_t rows, int hours,
                   const char* what) {
  bool ok = m.size() == rows;
  for (const auto& row : m) ok = ok && row.size() == static_cast<std::size_t>(hours);
  if (!ok) throw SolutionError(std::string("solution is missing ") + what + " values");
}

}  // namespace

DcErrorReport dc_error_report(const NetworkCase& c, const DispatchSolution& s,
                              bool flat_voltage) {
  const std::size_t nb = c.buses.size();
  const std::size_t nl = c.branches.size();
  require_shape(s.theta, nb, c.horizon, "angle");
  require_shape(s.tap, nl, c.horizon, "tap");
  require_shape(s.shift, nl, c.horizon, "shift");
  require_shape(s.flow, nl, c.horizon, "flow");

  DcErrorReport report;
  report.rows.reserve(nl * c.horizon);
  for (std::size_t l = 0; l < nl; ++l) {
    const Branch& br = c.branches[l];
    const std::size_t m = *c.bus_index(br.from_bus);
    const std::size_t n = *c.bus_index(br.to_bus);
    const double r = flat_voltage ? 0.0 : br.r;
    const double b = flat_voltage ? 0.0 : br.b;
    for (int h = 0; h < c.horizon; ++h) {
      const ComplexTap tap{s.tap[l][h], s.shift[l][h]};
      const double vm_angle = s.theta[m][h];
      const double vn_angle = s.theta[n][h];
      DcErrorRow row;
      row.branch_id = br.id;
      row.hour = h + 1;
      row.p_dc = s.flow[l][h];
      row.p_ac = c.base_mva * ac_sending_power(std::polar(1.0, vm_angle),
                                               std::polar(1.0, vn_angle), tap, r, br.x, b);
      row.abs_err = std::abs(row.p_ac - row.p_dc);
      row.rel_err = std::abs(row.p_dc) > 1e-9 ? row.abs_err / std::abs(row.p_dc)
                    : row.abs_err > 1e-9      ? HUGE_VAL
                                              : 0.0;
      const double phi = vm_angle - vn_angle - tap.shift;
      row.taylor_bound = c.base_mva * std::pow(std::abs(phi), 3) / (6.0 * tap.ratio * br.x);
      report.max_abs_err = std::max(report.max_abs_err, row.abs_err);
      report.max_rel_err = std::max(report.max_rel_err, row.rel_err);
      if (row.rel_err > 0.02) ++report.above_two_percent;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

void write_dc_error_csv(const DcErrorReport& report, std::ostream& out) {
  out << "branch_id,hour,p_dc,p_ac,abs_err,rel_err\n";
  for (const auto& r : report.rows) {
    out << fmt::format("{},{},{:.9g},{:.9g},{:.6e},{:.6e}\n", r.branch_id, r.hour, r.p_dc,
                       r.p_ac, r.abs_err, r.rel_err);
  }
}

}  // namespace edtr

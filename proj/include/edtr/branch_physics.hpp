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

// Active power of a generalized branch: a series impedance r + jx with
// line charging b and an ideal transformer t = tau * exp(j*delta) at the
// sending end. Flow is positive from the from-bus m to the to-bus n when
// theta_m - theta_n - delta > 0.

#ifndef EDTR_BRANCH_PHYSICS_HPP_
#define EDTR_BRANCH_PHYSICS_HPP_

#include <complex>
#include <ostream>
#include <string>
#include <vector>

#include "edtr/network.hpp"
#include "edtr/solution.hpp"

namespace edtr {

struct ComplexTap {
  double ratio = 1.0;  // tau > 0
  double shift = 0.0;  // delta, rad
};

// (theta_from - theta_to - delta) / (tau * x), per-unit.
inline double dc_flow(double theta_from, double theta_to, ComplexTap tap, double x) {
  return (theta_from - theta_to - tap.shift) / (tap.ratio * x);
}

// Re{ (V_m/t) * conj( j*(V_m/t)*b/2 + (V_m/t - V_n)*y ) } with
// y = 1/(r + jx), per-unit.
double ac_sending_power(std::complex<double> v_from, std::complex<double> v_to,
                        ComplexTap tap, double r, double x, double b);

struct DcErrorRow {
  std::string branch_id;
  int hour = 0;       // 1-based
  double p_dc = 0.0;  // MW, from the solution
  double p_ac = 0.0;  // MW
  double abs_err = 0.0;
  double rel_err = 0.0;  // abs_err / |p_dc|, 0 when both vanish
  // |theta_m - theta_n - delta|^3 / (6 tau x) in MW: the sine remainder
  // bound, which applies when r = b = 0.
  double taylor_bound = 0.0;
};

struct DcErrorReport {
  std::vector<DcErrorRow> rows;
  double max_abs_err = 0.0;
  double max_rel_err = 0.0;
  // Rows with rel_err above 2% (informational).
  int above_two_percent = 0;
};

// Evaluates every branch and hour at V = exp(j*theta). With `flat_voltage`
// the branch is also taken lossless and charging-free (r = b = 0), so the
// deviation isolates the small-angle approximation; otherwise the branch's
// own r and b are used. Throws SolutionError when the solution lacks
// angles, taps, shifts or flows for some branch or hour.
DcErrorReport dc_error_report(const NetworkCase& c, const DispatchSolution& solution,
                              bool flat_voltage);

// CSV with header branch_id,hour,p_dc,p_ac,abs_err,rel_err.
void write_dc_error_csv(const DcErrorReport& report, std::ostream& out);

}  // namespace edtr

#endif  // EDTR_BRANCH_PHYSICS_HPP_

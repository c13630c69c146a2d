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

#include "edtr/report.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <string_view>

namespace edtr {
namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

bool has_device(const Branch& br) {
  return !br.device.tap_set.empty() || br.device.shift_lo != 0.0 || br.device.shift_hi != 0.0;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

int count_changes(const std::vector<double>& v, double initial, double tol) {
  int n = 0;
  double prev = initial;
  for (double x : v) {
    if (std::abs(x - prev) > tol) ++n;
    prev = x;
  }
  return n;
}

}  // namespace

void write_generation_csv(const NetworkCase& c, const DispatchSolution& s, std::ostream& out) {
  out << "gen,hour,MW\n";
  for (std::size_t g = 0; g < c.generators.size(); ++g) {
    for (int h = 0; h < c.horizon; ++h) {
      out << fmt::format("{},{},{:.6f}\n", c.generators[g].id, h + 1, s.p[g][h]);
    }
  }
}

void write_devices_csv(const NetworkCase& c, const DispatchSolution& s, std::ostream& out) {
  out << "branch,hour,tap,shift_deg\n";
  for (std::size_t l = 0; l < c.branches.size(); ++l) {
    if (!has_device(c.branches[l])) continue;
    for (int h = 0; h < c.horizon; ++h) {
      out << fmt::format("{},{},{:.6f},{:.6f}\n", c.branches[l].id, h + 1, s.tap[l][h],
                         s.shift[l][h] * kDeg);
    }
  }
}

void write_flows_csv(const NetworkCase& c, const DispatchSolution& s, std::ostream& out) {
  out << "branch,hour,MW,limit,binding\n";
  const double tol = 1e-6 * c.base_mva;
  for (std::size_t l = 0; l < c.branches.size(); ++l) {
    const double rating = c.branches[l].rating;
    for (int h = 0; h < c.horizon; ++h) {
      const double f = s.flow[l][h];
      const bool binding = rating > 0.0 && rating - std::abs(f) <= tol;
      out << fmt::format("{},{},{:.6f},{},{}\n", c.branches[l].id, h + 1, f,
                         rating > 0.0 ? fmt::format("{:g}", rating) : "", binding ? 1 : 0);
    }
  }
}

void write_schedule_csv(const NetworkCase& c, const DispatchSolution& s, std::ostream& out) {
  out << "kind,id,hour,value\n";
  out << fmt::format("objective,-,0,{:.17g}\n", s.objective);
  for (std::size_t g = 0; g < c.generators.size(); ++g) {
    for (int h = 0; h < c.horizon; ++h) {
      out << fmt::format("p,{},{},{:.17g}\n", c.generators[g].id, h + 1, s.p[g][h]);
    }
  }
  for (std::size_t b = 0; b < c.buses.size(); ++b) {
    for (int h = 0; h < c.horizon; ++h) {
      out << fmt::format("theta_deg,{},{},{:.17g}\n", c.buses[b].id, h + 1, s.theta[b][h] * kDeg);
    }
  }
  for (std::size_t l = 0; l < c.branches.size(); ++l) {
    for (int h = 0; h < c.horizon; ++h) {
      out << fmt::format("tap,{},{},{:.17g}\n", c.branches[l].id, h + 1, s.tap[l][h]);
    }
  }
  for (std::size_t l = 0; l < c.branches.size(); ++l) {
    for (int h = 0; h < c.horizon; ++h) {
      out << fmt::format("shift_deg,{},{},{:.17g}\n", c.branches[l].id, h + 1,
                         s.shift[l][h] * kDeg);
    }
  }
}

DispatchSolution read_schedule_csv(const NetworkCase& c, std::istream& in) {
  std::map<std::string, std::size_t, std::less<>> gens, buses, branches;
  for (std::size_t i = 0; i < c.generators.size(); ++i) gens[c.generators[i].id] = i;
  for (std::size_t i = 0; i < c.buses.size(); ++i) buses[c.buses[i].id] = i;
  for (std::size_t i = 0; i < c.branches.size(); ++i) branches[c.branches[i].id] = i;

  const std::size_t H = static_cast<std::size_t>(c.horizon);
  DispatchSolution s;
  s.status = DispatchStatus::kOptimal;
  s.p.assign(c.generators.size(), std::vector<double>(H, NAN));
  s.theta.assign(c.buses.size(), std::vector<double>(H, NAN));
  s.tap.assign(c.branches.size(), std::vector<double>(H, NAN));
  s.shift.assign(c.branches.size(), std::vector<double>(H, NAN));

  std::string line;
  int line_no = 0;
  if (!std::getline(in, line) || (++line_no, line != "kind,id,hour,value")) {
    throw ScheduleError("schedule: expected header 'kind,id,hour,value'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fail = [&](const std::string& why) {
      return ScheduleError(fmt::format("schedule line {}: {}", line_no, why));
    };
    const auto fields = split(line);
    if (fields.size() != 4) throw fail("expected 4 fields");
    int hour = 0;
    const auto hf = fields[2];
    if (std::from_chars(hf.data(), hf.data() + hf.size(), hour).ec != std::errc{}) {
      throw fail("bad hour");
    }
    const std::string vtext(fields[3]);
    char* end = nullptr;
    const double value = std::strtod(vtext.c_str(), &end);
    if (vtext.empty() || end != vtext.c_str() + vtext.size() || !std::isfinite(value)) {
      throw fail("bad value");
    }

    const std::string_view kind = fields[0];
    if (kind == "objective") {
      s.objective = value;
      continue;
    }
    if (hour < 1 || hour > c.horizon) throw fail("hour out of range");
    auto lookup = [&](const auto& index) {
      const auto it = index.find(fields[1]);
      if (it == index.end()) throw fail(fmt::format("unknown id '{}'", fields[1]));
      return it->second;
    };
    double* slot = nullptr;
    double scale = 1.0;
    if (kind == "p") {
      slot = &s.p[lookup(gens)][hour - 1];
    } else if (kind == "theta_deg") {
      slot = &s.theta[lookup(buses)][hour - 1];
      scale = 1.0 / kDeg;
    } else if (kind == "tap") {
      slot = &s.tap[lookup(branches)][hour - 1];
    } else if (kind == "shift_deg") {
      slot = &s.shift[lookup(branches)][hour - 1];
      scale = 1.0 / kDeg;
    } else {
      throw fail(fmt::format("unknown kind '{}'", kind));
    }
    if (!std::isnan(*slot)) throw fail("duplicate entry");
    *slot = value * scale;
  }

  auto require = [&](const std::vector<std::vector<double>>& m, const char* kind,
                     auto id_of) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t h = 0; h < H; ++h) {
        if (std::isnan(m[i][h])) {
          throw ScheduleError(
              fmt::format("schedule: missing {} for '{}' hour {}", kind, id_of(i), h + 1));
        }
      }
    }
  };
  require(s.p, "p", [&](std::size_t i) { return c.generators[i].id; });
  require(s.theta, "theta_deg", [&](std::size_t i) { return c.buses[i].id; });
  require(s.tap, "tap", [&](std::size_t i) { return c.branches[i].id; });
  require(s.shift, "shift_deg", [&](std::size_t i) { return c.branches[i].id; });

  s.flow = dc_flows(c, s);
  s.tap_adjustments.resize(c.branches.size());
  s.shift_adjustments.resize(c.branches.size());
  for (std::size_t l = 0; l < c.branches.size(); ++l) {
    const auto& d = c.branches[l].device;
    s.tap_adjustments[l] = count_changes(s.tap[l], d.tap_set.empty() ? 1.0 : d.initial_tap, 1e-9);
    s.shift_adjustments[l] = count_changes(s.shift[l], d.initial_shift, 1e-7);
  }
  return s;
}

const VariantRun* RunReport::find(const std::string& name) const {
  for (const auto& r : runs) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::optional<double> RunReport::cost_reduction() const {
  const VariantRun* e0 = find("ED0");
  const VariantRun* e1 = find("ED1");
  if (e0 == nullptr || e1 == nullptr) return std::nullopt;
  if (e0->solution.status != DispatchStatus::kOptimal ||
      e1->solution.status != DispatchStatus::kOptimal || e0->solution.objective == 0.0) {
    return std::nullopt;
  }
  return (e0->solution.objective - e1->solution.objective) / e0->solution.objective * 100.0;
}

std::string format_percent(double fraction) { return fmt::format("{:g}%", fraction * 100.0); }

void write_report_text(const RunReport& report, std::ostream& out) {
  out << fmt::format("case: {}\n", report.case_id);
  out << fmt::format("termination gap: {}\n\n", format_percent(report.gap));
  out << fmt::format("{:<8}{:<14}{:>18}{:>12}{:>12}{:>10}\n", "model", "status", "cost ($)",
                     "time (s)", "gap", "nodes");
  for (const auto& r : report.runs) {
    const auto& s = r.solution;
    const bool has = s.has_schedule();
    out << fmt::format("{:<8}{:<14}{:>18}{:>12.2f}{:>12}{:>10}\n", r.name, to_string(s.status),
                       has ? fmt::format("{:.2f}", s.objective) : "---", s.solve_time,
                       has ? fmt::format("{:.4f}%", s.gap * 100.0) : "---", s.nodes);
  }
  const auto reduction = report.cost_reduction();
  out << fmt::format("\ncost reduction: {}\n",
                     reduction ? fmt::format("{:.2f}%", *reduction) : std::string("---"));
  for (const auto& r : report.runs) {
    if (!r.error.empty()) out << fmt::format("\n{} error: {}\n", r.name, r.error);
    if (!r.checks) continue;
    out << fmt::format("\n{} post-check: {}\n", r.name, r.checks->pass() ? "pass" : "FAIL");
    for (const auto& f : r.checks->families) {
      out << fmt::format("  {:<18}{}{}\n", f.name, f.pass ? "pass" : "FAIL",
                         f.detail.empty() ? "" : "  " + f.detail);
    }
    if (r.max_dc_rel_err) {
      out << fmt::format("  DC vs AC flow: max relative deviation {:.3e}\n", *r.max_dc_rel_err);
    }
    const auto& s = r.solution;
    int taps = 0, shifts = 0;
    for (int n : s.tap_adjustments) taps += n;
    for (int n : s.shift_adjustments) shifts += n;
    out << fmt::format("  device moves: {} tap, {} shift\n", taps, shifts);
  }
}

void write_report_csv(const RunReport& report, std::ostream& out) {
  out << "case,variant,status,cost,time_s,gap_percent,nodes,cost_reduction_percent,checks\n";
  const auto reduction = report.cost_reduction();
  for (const auto& r : report.runs) {
    const auto& s = r.solution;
    const bool has = s.has_schedule();
    out << fmt::format("{},{},{},{},{:.3f},{},{},{},{}\n", report.case_id, r.name,
                       to_string(s.status), has ? fmt::format("{:.6f}", s.objective) : "",
                       s.solve_time, has ? fmt::format("{:g}", s.gap * 100.0) : "", s.nodes,
                       reduction ? fmt::format("{:.6f}", *reduction) : "",
                       r.checks ? (r.checks->pass() ? "pass" : "fail") : "");
  }
}

}  // namespace edtr

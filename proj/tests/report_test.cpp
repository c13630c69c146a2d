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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtest/gtest.h"

namespace edtr {
namespace {

const NetworkCase& six_bus() {
  static const NetworkCase c = load_case_file(EDTR_CASES_DIR "/six_bus.json");
  return c;
}

const DispatchSolution& six_bus_ed1() {
  static const DispatchSolution s = solve_ed(build_ed1(six_bus()), six_bus()).solution;
  return s;
}

std::string schedule_text(const NetworkCase& c, const DispatchSolution& s) {
  std::ostringstream os;
  write_schedule_csv(c, s, os);
  return os.str();
}

DispatchSolution reread(const NetworkCase& c, const std::string& text) {
  std::istringstream in(text);
  return read_schedule_csv(c, in);
}

TEST(Schedule, RoundTripKeepsEveryValue) {
  const DispatchSolution& s = six_bus_ed1();
  ASSERT_EQ(s.status, DispatchStatus::kOptimal);
  const DispatchSolution r = reread(six_bus(), schedule_text(six_bus(), s));
  EXPECT_EQ(r.objective, s.objective);
  EXPECT_EQ(r.p, s.p);
  EXPECT_EQ(r.tap, s.tap);
  for (std::size_t b = 0; b < s.theta.size(); ++b) {
    for (std::size_t h = 0; h < s.theta[b].size(); ++h) {
      EXPECT_NEAR(r.theta[b][h], s.theta[b][h], 1e-15);
    }
  }
  for (std::size_t l = 0; l < s.shift.size(); ++l) {
    for (std::size_t h = 0; h < s.shift[l].size(); ++h) {
      EXPECT_NEAR(r.shift[l][h], s.shift[l][h], 1e-15);
      EXPECT_NEAR(r.flow[l][h], s.flow[l][h], 1e-6);
    }
  }
  EXPECT_EQ(r.tap_adjustments, s.tap_adjustments);
  EXPECT_EQ(r.shift_adjustments, s.shift_adjustments);
  EXPECT_TRUE(verify_solution(six_bus(), r).pass());
}

TEST(Schedule, MalformedInputNamesTheProblem) {
  const std::string good = schedule_text(six_bus(), six_bus_ed1());
  auto error_of = [&](const std::string& text) -> std::string {
    try {
      reread(six_bus(), text);
    } catch (const ScheduleError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(error_of("kind,id,hour\n").find("header"), std::string::npos);
  EXPECT_NE(error_of(good + "p,G9,1,5\n").find("unknown id"), std::string::npos);
  EXPECT_NE(error_of(good + "p,G1,25,5\n").find("hour out of range"), std::string::npos);
  EXPECT_NE(error_of(good + "p,G1,1,5\n").find("duplicate"), std::string::npos);
  EXPECT_NE(error_of(good + "p,G1,1\n").find("4 fields"), std::string::npos);
  EXPECT_NE(error_of(good + "q,G1,1,5\n").find("unknown kind"), std::string::npos);
  EXPECT_NE(error_of(good + "p,G1,x,5\n").find("bad hour"), std::string::npos);
  EXPECT_NE(error_of(good + "p,G1,1,abc\n").find("bad value"), std::string::npos);
  EXPECT_NE(error_of(good + "p,G1,1,nan\n").find("bad value"), std::string::npos);
  // Drop the last row: shift of the last branch in the last hour.
  const std::string truncated = good.substr(0, good.rfind("shift_deg,"));
  EXPECT_NE(error_of(truncated).find("missing shift_deg"), std::string::npos);
}

TEST(Schedule, OffGridTapFailsMembership) {
  std::string text = schedule_text(six_bus(), six_bus_ed1());
  const std::string key = "tap,2,4,";
  const std::size_t at = text.find(key);
  ASSERT_NE(at, std::string::npos);
  const std::size_t eol = text.find('\n', at);
  text.replace(at, eol - at, key + "0.985");
  const CheckReport report = verify_solution(six_bus(), reread(six_bus(), text));
  EXPECT_FALSE(report.find("tap-membership")->pass);
  EXPECT_FALSE(report.pass());
}

TEST(Schedule, ScaledGenerationFailsBalanceByOnePercentOfLoad) {
  DispatchSolution s = six_bus_ed1();
  for (auto& row : s.p) {
    for (double& p : row) p *= 1.01;
  }
  const DispatchSolution r = reread(six_bus(), schedule_text(six_bus(), s));
  const CheckReport report = verify_solution(six_bus(), r);
  const CheckFamily* balance = report.find("balance");
  ASSERT_NE(balance, nullptr);
  EXPECT_FALSE(balance->pass);
  // Total generation equals load, so the summed residual in each hour is 1%
  // of that hour's load.
  for (int h = 0; h < six_bus().horizon; ++h) {
    double load = 0.0, gen = 0.0;
    for (const auto& d : six_bus().demand) load += d[h];
    for (const auto& p : r.p) gen += p[h];
    EXPECT_NEAR(gen - load, 0.01 * load, 1e-5 * load);
  }
}

TEST(Csv, GenerationDevicesAndFlowsLayouts) {
  const NetworkCase& c = six_bus();
  const DispatchSolution& s = six_bus_ed1();
  std::ostringstream gen, dev, flows;
  write_generation_csv(c, s, gen);
  write_devices_csv(c, s, dev);
  write_flows_csv(c, s, flows);
  auto lines = [](const std::string& t) { return std::count(t.begin(), t.end(), '\n'); };
  EXPECT_EQ(gen.str().substr(0, 12), "gen,hour,MW\n");
  EXPECT_EQ(lines(gen.str()), 1 + 3 * 24);
  // Branches 2, 5 and 7 carry devices.
  EXPECT_EQ(dev.str().substr(0, 25), "branch,hour,tap,shift_deg");
  EXPECT_EQ(lines(dev.str()), 1 + 3 * 24);
  EXPECT_EQ(lines(flows.str()), 1 + 7 * 24);
  EXPECT_NE(flows.str().find("\n1,1,"), std::string::npos);
}

TEST(Report, GapIsEchoedAsPercent) {
  EXPECT_EQ(format_percent(1e-4), "0.01%");
  RunReport r;
  r.case_id = "x";
  r.gap = 1e-4;
  std::ostringstream os;
  write_report_text(r, os);
  EXPECT_NE(os.str().find("termination gap: 0.01%"), std::string::npos);
}

TEST(Report, ReductionOnlyWhenBothOptimal) {
  RunReport r;
  r.case_id = "x";
  VariantRun e0, e1;
  e0.name = "ED0";
  e1.name = "ED1";
  e0.solution.status = DispatchStatus::kOptimal;
  e0.solution.objective = 200.0;
  e1.solution.status = DispatchStatus::kOptimal;
  e1.solution.objective = 150.0;
  r.runs = {e0, e1};
  ASSERT_TRUE(r.cost_reduction().has_value());
  EXPECT_DOUBLE_EQ(*r.cost_reduction(), 25.0);

  r.runs[0].solution.status = DispatchStatus::kInfeasible;
  EXPECT_FALSE(r.cost_reduction().has_value());
  std::ostringstream csv, text;
  write_report_csv(r, csv);
  write_report_text(r, text);
  EXPECT_NE(csv.str().find("x,ED0,infeasible,,"), std::string::npos) << csv.str();
  EXPECT_NE(text.str().find("cost reduction: ---"), std::string::npos);

  RunReport only;
  only.runs = {e1};
  EXPECT_FALSE(only.cost_reduction().has_value());
}

}  // namespace
}  // namespace edtr

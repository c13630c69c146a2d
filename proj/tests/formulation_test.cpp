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

#include "edtr/formulation.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "edtr/lp_solver.hpp"
#include "gtest/gtest.h"
#include "oracles/enumeration.hpp"
#include "oracles/random_case.hpp"

namespace edtr {
namespace {

using oracle::kDegree;

NetworkCase two_bus(double rating) {
  NetworkCase c;
  c.name = "two-bus";
  c.horizon = 1;
  c.buses = {{"1", true, -0.6, 0.6}, {"2", false, -0.6, 0.6}};
  Branch br;
  br.id = "L1";
  br.from_bus = "1";
  br.to_bus = "2";
  br.x = 0.1;
  br.rating = rating;
  c.branches = {br};
  Generator g;
  g.id = "G1";
  g.bus = "1";
  g.p_min = 0.0;
  g.p_max = 100.0;
  g.cost_curve = {{0.0, 0.0}, {100.0, 1000.0}};
  c.generators = {g};
  c.demand = {{0.0}, {50.0}};
  c.reserve = {0.0};
  return c;
}

const NetworkCase& six_bus() {
  static const NetworkCase c = load_case_file(EDTR_CASES_DIR "/six_bus.json");
  return c;
}

NetworkCase strip_devices(NetworkCase c) {
  for (auto& br : c.branches) br.device = BranchDevice{};
  return c;
}

TEST(Ed0, TwoBusCostsFiveHundred) {
  const NetworkCase c = two_bus(100.0);
  const EdModel ed = build_ed0(c);
  EXPECT_EQ(ed.model.num_binaries(), 0u);
  const EdResult r = solve_ed(ed, c);
  ASSERT_EQ(r.solution.status, DispatchStatus::kOptimal);
  EXPECT_NEAR(r.solution.objective, 500.0, 1e-7);
  EXPECT_NEAR(r.solution.p[0][0], 50.0, 1e-7);
  EXPECT_NEAR(r.solution.flow[0][0], 50.0, 1e-7);
  // 0.5 pu over x = 0.1 needs 0.05 rad.
  EXPECT_NEAR(r.solution.theta[1][0], -0.05, 1e-9);
}

TEST(Ed0, TwoBusRatingBelowLoadIsInfeasible) {
  const NetworkCase c = two_bus(40.0);
  EXPECT_EQ(solve_ed(build_ed0(c), c).solution.status, DispatchStatus::kInfeasible);
  EXPECT_EQ(solve_ed(build_ed1(c), c).solution.status, DispatchStatus::kInfeasible);
}

TEST(Ed0, InvalidCaseIsRejected) {
  NetworkCase c = two_bus(100.0);
  c.branches[0].x = 0.0;
  EXPECT_THROW(build_ed0(c), CaseError);
}

TEST(Ed0, SixBusIsPureLp) {
  const EdModel ed = build_ed0(six_bus());
  EXPECT_EQ(ed.model.num_binaries(), 0u);
  EXPECT_TRUE(ed.model.validate().empty());
}

TEST(Ed1, SixBusBinaryCounts) {
  FormulationOptions segment;
  segment.variant = EncodingVariant::kSegmentAdjacency;
  // 24 hours x (2 branches x 4 segment binaries + 2 tap + 2 shift indicators).
  EXPECT_EQ(build_ed1(six_bus(), segment).model.num_binaries(), 288u);
  // Disjunctive: 5 selection binaries per tap branch-hour instead of 4.
  EXPECT_EQ(build_ed1(six_bus()).model.num_binaries(), 336u);
  FormulationOptions grid;
  grid.restrict_shift_to_grid = true;
  // 11 grid points (-15..15 deg by 3) per shifter-hour on top.
  EXPECT_EQ(build_ed1(six_bus(), grid).model.num_binaries(), 336u + 24u * 2u * 11u);
}

TEST(Ed1, NamingScheme) {
  const EdModel ed = build_ed1(six_bus());
  const MilpModel& m = ed.model;
  for (const char* v : {"p_G1_1", "seg_G3_24_4", "theta_6_24", "delta_5_1", "delta_7_24",
                        "tau_2_1", "s_5_24_5", "z_2_1_m_1_1", "z_5_3_d_5_2", "itap_2_1",
                        "ishift_7_24"}) {
    EXPECT_TRUE(m.find_variable(v).has_value()) << v;
  }
  for (const char* r : {"bal_1_1", "lim_7_24", "ramp_G1_2", "res_1", "pdef_G2_1",
                        "tstep_2_1_up", "tind_5_24_dn", "sstep_7_3_up", "sind_5_1_dn",
                        "tbud_2", "sbud_7", "pltone_2_1", "plttap_2_1_n"}) {
    EXPECT_TRUE(m.find_constraint(r).has_value()) << r;
  }
  // Branch 7 has only a shifter, so its flow stays linear.
  EXPECT_FALSE(m.find_variable("tau_7_1").has_value());
  EXPECT_FALSE(m.find_variable("delta_2_1").has_value());
}

TEST(Ed1, DeviceFreeCaseMatchesEd0RowForRow) {
  const NetworkCase c = strip_devices(six_bus());
  const EdModel e0 = build_ed0(c);
  const EdModel e1 = build_ed1(c);
  EXPECT_TRUE(e0.model.structurally_equal(e1.model));
  EXPECT_EQ(e0.model.num_constraints(), e1.model.num_constraints());
}

TEST(Ed1, ZeroBudgetsFreezeDevices) {
  NetworkCase c = six_bus();
  for (auto& br : c.branches) {
    br.device.tap_adjust_budget = 0;
    br.device.shift_adjust_budget = 0;
  }
  const EdResult r0 = solve_ed(build_ed0(c), c);
  const EdResult r1 = solve_ed(build_ed1(c), c);
  ASSERT_EQ(r1.solution.status, DispatchStatus::kOptimal) << r1.error;
  for (std::size_t l = 0; l < c.branches.size(); ++l) {
    const auto& d = c.branches[l].device;
    for (int h = 0; h < c.horizon; ++h) {
      EXPECT_EQ(r1.solution.tap[l][h], d.tap_set.empty() ? 1.0 : d.initial_tap);
      EXPECT_NEAR(r1.solution.shift[l][h], d.initial_shift, 1e-9);
    }
    EXPECT_EQ(r1.solution.tap_adjustments[l], 0);
    EXPECT_EQ(r1.solution.shift_adjustments[l], 0);
  }
  EXPECT_NEAR(r1.solution.objective, r0.solution.objective, 1e-4 * r0.solution.objective);
}

TEST(Ed1, SixBusSolvesAndPassesEveryCheck) {
  const NetworkCase& c = six_bus();
  const EdResult r0 = solve_ed(build_ed0(c), c);
  const EdResult r1 = solve_ed(build_ed1(c), c);
  ASSERT_EQ(r0.solution.status, DispatchStatus::kOptimal);
  ASSERT_EQ(r1.solution.status, DispatchStatus::kOptimal) << r1.error;
  EXPECT_LE(r1.solution.gap, 1e-4);
  EXPECT_LE(r1.solution.objective, r0.solution.objective + 1e-6);
  for (const auto& s : {r0.solution, r1.solution}) {
    const CheckReport report = verify_solution(c, s);
    for (const auto& f : report.families) EXPECT_TRUE(f.pass) << f.name << ": " << f.detail;
    EXPECT_EQ(report.families.size(), 10u);
  }
}

TEST(Extract, ZeroDemandLeavesUnitsAtMinimum) {
  NetworkCase c = two_bus(100.0);
  c.horizon = 3;
  c.demand = {{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  c.reserve = {0.0, 0.0, 0.0};
  Generator g2 = c.generators[0];
  g2.id = "G2";
  g2.bus = "2";
  g2.cost_curve = {{0.0, 40.0}, {50.0, 900.0}, {100.0, 2000.0}};
  c.generators[0].cost_curve = {{0.0, 25.0}, {100.0, 1025.0}};
  c.generators.push_back(g2);
  const EdResult r = solve_ed(build_ed0(c), c);
  ASSERT_EQ(r.solution.status, DispatchStatus::kOptimal);
  for (const auto& row : r.solution.p) {
    for (double p : row) EXPECT_NEAR(p, 0.0, 1e-9);
  }
  EXPECT_NEAR(r.solution.objective, (25.0 + 40.0) * 3, 1e-9);
}

TEST(Extract, SplitTapWeightIsRejected) {
  NetworkCase c = two_bus(0.0);
  c.branches[0].device.tap_set = {0.98, 1.0, 1.02};
  c.branches[0].device.tap_step_max = 0.04;
  c.branches[0].device.tap_adjust_budget = 1;
  const EdModel ed = build_ed1(c);
  const EdResult r = solve_ed(ed, c);
  ASSERT_EQ(r.solution.status, DispatchStatus::kOptimal);
  EXPECT_NO_THROW(extract_solution(ed, r.milp.values, c));

  // Move the theta_m block mass onto taps 1 and 3 in equal parts.
  std::vector<double> x = r.milp.values;
  const AlphaBlock& m = ed.plt[0][0]->alpha_blocks()[0];
  for (VarId z : m.weights) x[z.index] = 0.0;
  x[m.weights[0].index] = 0.5;
  x[m.weights[5].index] = 0.5;
  try {
    extract_solution(ed, x, c);
    FAIL() << "expected SolutionError";
  } catch (const SolutionError& e) {
    EXPECT_NE(std::string(e.what()).find("split"), std::string::npos) << e.what();
  }
}

TEST(Extract, BalanceResidualIsRejected) {
  const NetworkCase c = two_bus(100.0);
  const EdModel ed = build_ed0(c);
  std::vector<double> x = solve_ed(ed, c).milp.values;
  x[ed.p[0][0].index] += 0.01;
  EXPECT_THROW(extract_solution(ed, x, c), SolutionError);
  x.pop_back();
  EXPECT_THROW(extract_solution(ed, x, c), SolutionError);
}

TEST(MipStart, ReproducesEd0) {
  const NetworkCase& c = six_bus();
  const EdModel ed1 = build_ed1(c);
  LpSolver lp(ed1.model);
  for (const BinaryHint& h : ed0_mip_start(ed1, c)) lp.set_bounds(h.var, h.value, h.value);
  const LpSolution s = lp.solve(nullptr);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  const EdResult r0 = solve_ed(build_ed0(c), c);
  EXPECT_NEAR(s.objective, r0.solution.objective, 1e-6 * r0.solution.objective);
}

// 100 MW from bus 1 to bus 3 over a direct line rated 50 MW and a
// two-branch path; without a shift two thirds take the direct line.
NetworkCase shifter_needed() {
  NetworkCase c = two_bus(0.0);
  c.horizon = 3;
  c.buses.push_back({"3", false, -0.6, 0.6});
  c.branches[0].id = "a";
  Branch b = c.branches[0], d = c.branches[0];
  b.id = "b";
  b.from_bus = "2";
  b.to_bus = "3";
  d.id = "d";
  d.to_bus = "3";
  d.rating = 50.0;
  d.device.shift_lo = -10.0 * kDegree;
  d.device.shift_hi = 10.0 * kDegree;
  d.device.shift_step_max = 5.0 * kDegree;
  d.device.shift_adjust_budget = 1;
  c.branches.push_back(b);
  c.branches.push_back(d);
  c.generators[0].p_max = 200.0;
  c.generators[0].ramp_up = c.generators[0].ramp_down = std::numeric_limits<double>::infinity();
  c.generators[0].cost_curve = {{0.0, 0.0}, {200.0, 2000.0}};
  c.demand = {{0, 0, 0}, {0, 0, 0}, {100, 90, 100}};
  c.reserve = {0, 0, 0};
  return c;
}

TEST(MipStart, EarlyShiftRescuesInfeasibleBaseline) {
  const NetworkCase c = shifter_needed();
  ASSERT_EQ(solve_ed(build_ed0(c), c).solution.status, DispatchStatus::kInfeasible);
  const EdModel ed1 = build_ed1(c);
  const auto hints = early_shift_mip_start(ed1, c);
  ASSERT_EQ(hints.size(), 3u);
  EXPECT_EQ(hints[0].value, 1.0);
  EXPECT_EQ(hints[1].value, 0.0);
  EXPECT_EQ(hints[2].value, 0.0);

  // No diving and no branching: the start alone supplies the schedule.
  SolveOptions options;
  options.bnb.diving = false;
  options.bnb.node_limit = 1;
  options.ed0_start = false;
  const EdResult r = solve_ed(ed1, c, options);
  ASSERT_TRUE(r.solution.has_schedule()) << to_string(r.solution.status);
  EXPECT_TRUE(verify_solution(c, r.solution).pass());
  // The shift moves once, in hour 1, and holds.
  EXPECT_EQ(r.solution.shift_adjustments[2], 1);
  EXPECT_GE(r.solution.shift[2][0], 0.05 - 1e-9);

  FormulationOptions grid;
  grid.restrict_shift_to_grid = true;
  EXPECT_TRUE(early_shift_mip_start(build_ed1(c, grid), c).empty());
  EXPECT_TRUE(early_shift_mip_start(build_ed1(six_bus()), six_bus()).size() ==
              ed0_mip_start(build_ed1(six_bus()), six_bus()).size());
}

TEST(ShiftGrid, CoversRangeInSteps) {
  BranchDevice d;
  d.shift_lo = -15.0 * kDegree;
  d.shift_hi = 15.0 * kDegree;
  d.shift_step_max = 3.0 * kDegree;
  const auto pts = shift_grid(d);
  ASSERT_EQ(pts.size(), 11u);
  EXPECT_DOUBLE_EQ(pts.front(), d.shift_lo);
  EXPECT_NEAR(pts.back(), d.shift_hi, 1e-12);
  EXPECT_NEAR(pts[5], 0.0, 1e-12);
}

TEST(Verify, DetectsEachKindOfViolation) {
  const NetworkCase& c = six_bus();
  const EdResult r = solve_ed(build_ed1(c), c);
  ASSERT_TRUE(r.solution.has_schedule());
  const DispatchSolution& s = r.solution;
  auto failing = [&](const DispatchSolution& bad, const std::string& family) {
    const CheckReport report = verify_solution(c, bad);
    const CheckFamily* f = report.find(family);
    return f != nullptr && !f->pass && !report.pass();
  };

  DispatchSolution off_grid = s;
  off_grid.tap[1][3] = 0.985;
  EXPECT_TRUE(failing(off_grid, "tap-membership"));

  DispatchSolution scaled = s;
  double load = 0.0, residual = 0.0;
  for (auto& row : scaled.p) row[5] *= 1.01;
  for (const auto& row : c.demand) load += row[5];
  const CheckReport report = verify_solution(c, scaled);
  EXPECT_FALSE(report.find("balance")->pass);
  // Per-bus residuals add up to 1% of the hour's generation, which equals load.
  for (std::size_t g = 0; g < c.generators.size(); ++g) residual += s.p[g][5] * 0.01;
  EXPECT_NEAR(residual, 0.01 * load, 1e-5);

  DispatchSolution jump = s;
  for (int h = 0; h < c.horizon; ++h) jump.shift[4][h] = (h % 2 ? 6.0 : -6.0) * kDegree;
  EXPECT_TRUE(failing(jump, "steps"));

  DispatchSolution busy = s;
  for (int h = 0; h < c.horizon; ++h) busy.shift[6][h] = (h % 2 ? 1.0 : -1.0) * kDegree;
  EXPECT_TRUE(failing(busy, "budgets"));

  DispatchSolution range = s;
  range.shift[0][0] = 1.0 * kDegree;
  EXPECT_TRUE(failing(range, "shift-range"));

  DispatchSolution bad_shape = s;
  bad_shape.p.pop_back();
  EXPECT_THROW(verify_solution(c, bad_shape), SolutionError);
}

class RandomCases : public ::testing::TestWithParam<int> {};

TEST_P(RandomCases, DominanceAndChecks) {
  std::mt19937_64 rng(7000 + GetParam());
  const NetworkCase c = oracle::random_case(rng);
  const EdResult r0 = solve_ed(build_ed0(c), c);
  const EdResult r1 = solve_ed(build_ed1(c), c);
  if (r0.solution.status == DispatchStatus::kOptimal) {
    ASSERT_EQ(r1.solution.status, DispatchStatus::kOptimal) << r1.error;
    EXPECT_LE(r1.solution.objective,
              r0.solution.objective + 1e-6 * std::max(1.0, std::abs(r0.solution.objective)));
  }
  for (const EdResult* r : {&r0, &r1}) {
    if (!r->solution.has_schedule()) continue;
    const CheckReport report = verify_solution(c, r->solution);
    for (const auto& f : report.families) EXPECT_TRUE(f.pass) << f.name << ": " << f.detail;
  }
}

TEST_P(RandomCases, FixedDevicesChangeNothing) {
  std::mt19937_64 rng(8000 + GetParam());
  oracle::RandomCaseSpec spec;
  spec.devices = false;
  const NetworkCase base = oracle::random_case(rng, spec);
  NetworkCase c = base;
  BranchDevice& d = c.branches[GetParam() % c.branches.size()].device;
  d.tap_set = {1.0};
  d.tap_adjust_budget = 3;
  const EdResult r0 = solve_ed(build_ed0(base), base);
  const EdResult r1 = solve_ed(build_ed1(c), c);
  ASSERT_EQ(r0.solution.status, r1.solution.status);
  if (r0.solution.status == DispatchStatus::kOptimal) {
    EXPECT_NEAR(r1.solution.objective, r0.solution.objective,
                1e-4 * std::max(1.0, std::abs(r0.solution.objective)));
  }
}

TEST_P(RandomCases, UncongestedCasesGainNothing) {
  std::mt19937_64 rng(9000 + GetParam());
  for (int attempt = 0; attempt < 200; ++attempt) {
    const NetworkCase c = oracle::random_case(rng);
    const EdResult r0 = solve_ed(build_ed0(c), c);
    if (r0.solution.status != DispatchStatus::kOptimal) continue;
    bool slack = true;
    for (std::size_t l = 0; l < c.branches.size(); ++l) {
      for (double f : r0.solution.flow[l]) {
        const double rating = c.branches[l].rating;
        if (rating > 0.0 && rating - std::abs(f) <= 1e-6 * c.base_mva) slack = false;
      }
    }
    for (std::size_t b = 0; b < c.buses.size(); ++b) {
      for (double th : r0.solution.theta[b]) {
        if (!c.buses[b].is_reference && c.buses[b].angle_hi - std::abs(th) <= 1e-6) slack = false;
      }
    }
    if (!slack) continue;
    const EdResult r1 = solve_ed(build_ed1(c), c);
    ASSERT_EQ(r1.solution.status, DispatchStatus::kOptimal);
    EXPECT_NEAR(r1.solution.objective, r0.solution.objective,
                1e-4 * std::max(1.0, std::abs(r0.solution.objective)));
    return;
  }
  GTEST_SKIP() << "no uncongested case drawn";
}

TEST_P(RandomCases, MatchesDeviceEnumeration) {
  std::mt19937_64 rng(10000 + GetParam());
  NetworkCase c = oracle::random_case(rng);
  while (oracle::schedule_count(c) > 1500) c = oracle::random_case(rng);
  FormulationOptions options;
  options.restrict_shift_to_grid = true;
  const EdResult r1 = solve_ed(build_ed1(c, options), c);
  const oracle::EnumerationResult best = oracle::enumerate_devices(c);
  if (std::isinf(best.best)) {
    EXPECT_EQ(r1.solution.status, DispatchStatus::kInfeasible);
    return;
  }
  ASSERT_EQ(r1.solution.status, DispatchStatus::kOptimal) << r1.error;
  EXPECT_NEAR(r1.solution.objective, best.best, 1e-4 * std::max(1.0, std::abs(best.best)))
      << best.schedules << " schedules";
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomCases, ::testing::Range(0, 24));

TEST(Variants, SegmentAdjacencyMatchesOnSingleTapCases) {
  // The segment variant admits every disjunctive point, so it is never more
  // expensive; when its optimum sits on taps the two agree.
  std::mt19937_64 rng(42);
  int compared = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const NetworkCase c = oracle::random_case(rng);
    FormulationOptions segment;
    segment.variant = EncodingVariant::kSegmentAdjacency;
    const EdModel ep = build_ed1(c, segment);
    const EdResult rp = solve_ed(ep, c);
    const EdResult rd = solve_ed(build_ed1(c), c);
    if (rd.solution.status != DispatchStatus::kOptimal) continue;
    ASSERT_TRUE(rp.milp.status == MilpStatus::kOptimal);
    EXPECT_LE(rp.milp.objective, rd.solution.objective + 1e-4 * std::abs(rd.solution.objective));
    if (rp.solution.status == DispatchStatus::kOptimal) {
      EXPECT_NEAR(rp.solution.objective, rd.solution.objective,
                  1e-4 * std::max(1.0, std::abs(rd.solution.objective)));
      ++compared;
    }
  }
  EXPECT_GT(compared, 0);
}

}  // namespace
}  // namespace edtr

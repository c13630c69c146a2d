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

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "edtr/branch_physics.hpp"

namespace edtr {
namespace {

std::string hname(const std::string& prefix, const std::string& id, int h) {
  return prefix + "_" + id + "_" + std::to_string(h + 1);
}

enum class DeviceMode { kInitial, kSchedule, kAdjustable };

class Builder {
 public:
  Builder(const NetworkCase& c, DeviceMode mode, FormulationOptions options,
          const std::vector<std::vector<double>>* taps = nullptr,
          const std::vector<std::vector<double>>* shifts = nullptr)
      : c_(c), mode_(mode), taps_(taps), shifts_(shifts), base_(c.base_mva), hours_(c.horizon) {
    ed_.adjustable = mode == DeviceMode::kAdjustable;
    ed_.options = options;
  }

  EdModel build() {
    const auto diags = validate_case(c_);
    if (!diags.empty()) {
      std::string what = "cannot build a model for an invalid case:";
      for (const auto& d : diags) what += "\n  " + d.to_string();
      throw CaseError(what, diags);
    }
    ed_.model.set_name(c_.name.empty() ? "ed" : c_.name);
    auto& meta = ed_.model.metadata();
    meta["case"] = c_.name;
    meta["horizon"] = std::to_string(hours_);
    meta["kind"] = mode_ == DeviceMode::kAdjustable ? "ed1" : "ed0";
    if (mode_ == DeviceMode::kAdjustable) meta["variant"] = to_string(ed_.options.variant);
    add_generators();
    add_angles();
    add_branches();
    add_balance();
    add_reserve();
    ed_.model.set_objective(objective_);
    return std::move(ed_);
  }

 private:
  void add_generators() {
    MilpModel& m = ed_.model;
    ed_.p.resize(c_.generators.size());
    for (std::size_t g = 0; g < c_.generators.size(); ++g) {
      const Generator& gen = c_.generators[g];
      // Curve breakpoints clipped to [p_min, p_max].
      std::vector<std::pair<double, double>> pts{{gen.p_min, generator_cost(gen, gen.p_min)}};
      for (const auto& [mw, cost] : gen.cost_curve) {
        if (mw > gen.p_min && mw < gen.p_max) pts.emplace_back(mw, cost);
      }
      if (gen.p_max > gen.p_min) pts.emplace_back(gen.p_max, generator_cost(gen, gen.p_max));

      for (int h = 0; h < hours_; ++h) {
        const VarId p = m.add_continuous(hname("p", gen.id, h), gen.p_min / base_,
                                         gen.p_max / base_);
        ed_.p[g].push_back(p);
        objective_.add_constant(pts.front().second);
        if (pts.size() > 1) {
          LinearExpr def(p);
          for (std::size_t k = 1; k < pts.size(); ++k) {
            const double len = pts[k].first - pts[k - 1].first;
            const double slope = (pts[k].second - pts[k - 1].second) / len;
            const VarId seg = m.add_continuous(
                hname("seg", gen.id, h) + "_" + std::to_string(k), 0.0, len / base_);
            def.add(seg, -1.0);
            objective_.add(seg, slope * base_);
          }
          m.add_constraint(hname("pdef", gen.id, h), def, Sense::kEqual, gen.p_min / base_);
        }
        const double up = gen.ramp_up / base_;
        const double dn = gen.ramp_down / base_;
        if (std::isinf(up) && std::isinf(dn)) continue;
        if (h == 0) {
          if (gen.initial_p) {
            const double p0 = *gen.initial_p / base_;
            m.add_interval(hname("ramp", gen.id, h), LinearExpr(p), p0 - dn, p0 + up);
          }
        } else {
          m.add_interval(hname("ramp", gen.id, h),
                         LinearExpr(p) - LinearExpr(ed_.p[g][h - 1]), -dn, up);
        }
      }
    }
  }

  void add_angles() {
    ed_.theta.resize(c_.buses.size());
    for (std::size_t b = 0; b < c_.buses.size(); ++b) {
      const Bus& bus = c_.buses[b];
      const Interval box = angle_box(b);
      for (int h = 0; h < hours_; ++h) {
        ed_.theta[b].push_back(ed_.model.add_continuous(hname("theta", bus.id, h), box.lo, box.hi));
      }
    }
  }

  Interval angle_box(std::size_t b) const {
    const Bus& bus = c_.buses[b];
    return bus.is_reference ? Interval{0.0, 0.0} : Interval{bus.angle_lo, bus.angle_hi};
  }

  double initial_tap(const BranchDevice& d) const {
    return d.tap_set.empty() ? 1.0 : d.initial_tap;
  }

  double initial_shift(const BranchDevice& d) const {
    return d.adjustable_shift() ? d.initial_shift : d.shift_lo;
  }

  void add_branches() {
    MilpModel& m = ed_.model;
    const std::size_t nl = c_.branches.size();
    ed_.flow.assign(nl, {});
    ed_.tap.assign(nl, {});
    ed_.shift.assign(nl, {});
    ed_.plt.assign(nl, std::vector<std::optional<PltEncoding>>(hours_));
    ed_.tap_indicator.assign(nl, {});
    ed_.shift_indicator.assign(nl, {});
    ed_.shift_grid.assign(nl, {});
    ed_.shift_grid_points.assign(nl, {});
    ed_.limit.assign(nl, std::vector<std::optional<RowId>>(hours_));

    for (std::size_t l = 0; l < nl; ++l) {
      const Branch& br = c_.branches[l];
      const BranchDevice& d = br.device;
      const std::size_t bm = *c_.bus_index(br.from_bus);
      const std::size_t bn = *c_.bus_index(br.to_bus);
      const bool adj = mode_ == DeviceMode::kAdjustable;
      const bool tap_adj = adj && d.adjustable_tap();
      const bool shift_adj = adj && d.adjustable_shift();
      const bool grid = shift_adj && ed_.options.restrict_shift_to_grid;
      if (grid) ed_.shift_grid_points[l] = shift_grid(d);
      LinearExpr tap_budget, shift_budget;

      for (int h = 0; h < hours_; ++h) {
        const LinearExpr tm(ed_.theta[bm][h]);
        const LinearExpr tn(ed_.theta[bn][h]);

        LinearExpr delta;
        if (shift_adj) {
          const VarId dv = m.add_continuous(hname("delta", br.id, h), d.shift_lo, d.shift_hi);
          delta = LinearExpr(dv);
          if (grid) add_grid(l, h, dv);
        } else {
          delta = LinearExpr(mode_ == DeviceMode::kSchedule ? (*shifts_)[l][h] : initial_shift(d));
        }

        LinearExpr tau, flow;
        if (tap_adj) {
          const Interval dbox = shift_adj ? Interval{d.shift_lo, d.shift_hi}
                                          : Interval{delta.constant(), delta.constant()};
          PltEncoding enc = encode_branch_flow(br.id, h + 1, tm, angle_box(bm), tn, angle_box(bn),
                                               delta, dbox, d.tap_set, br.x,
                                               ed_.options.variant, m);
          tau = LinearExpr(enc.tap_variable());
          flow = enc.flow_expression;
          ed_.plt[l][h] = std::move(enc);
        } else {
          double t = 1.0;
          if (mode_ == DeviceMode::kSchedule) {
            t = (*taps_)[l][h];
          } else if (adj) {
            t = d.fixed_tap();
          } else {
            t = initial_tap(d);
          }
          tau = LinearExpr(t);
          flow = (tm - tn - delta) * (1.0 / (t * br.x));
        }

        if (tap_adj) {
          const LinearExpr prev = h == 0 ? LinearExpr(d.initial_tap) : ed_.tap[l][h - 1];
          linearize_abs_step(prev, tau, LinearExpr(d.tap_step_max), hname("tstep", br.id, h), m);
          const VarId ind = m.add_binary(hname("itap", br.id, h));
          ed_.tap_indicator[l].push_back(ind);
          // The step row already caps the move, so I * step is a valid big-M.
          const double range = d.tap_set.back() - d.tap_set.front();
          linearize_abs_step(prev, tau, LinearExpr(ind, std::min(range, d.tap_step_max)),
                             hname("tind", br.id, h), m);
          tap_budget.add(ind, 1.0);
        }
        if (shift_adj) {
          const LinearExpr prev = h == 0 ? LinearExpr(d.initial_shift) : ed_.shift[l][h - 1];
          linearize_abs_step(prev, delta, LinearExpr(d.shift_step_max), hname("sstep", br.id, h),
                             m);
          const VarId ind = m.add_binary(hname("ishift", br.id, h));
          ed_.shift_indicator[l].push_back(ind);
          linearize_abs_step(prev, delta,
                             LinearExpr(ind, std::min(d.shift_hi - d.shift_lo, d.shift_step_max)),
                             hname("sind", br.id, h), m);
          shift_budget.add(ind, 1.0);
        }
        if (br.rating > 0.0) {
          const double lim = br.rating / base_;
          ed_.limit[l][h] = m.add_interval(hname("lim", br.id, h), flow, -lim, lim);
          if (ed_.plt[l][h] && ed_.options.tap_limit_rows &&
              ed_.options.variant == EncodingVariant::kDisjunctiveExact) {
            add_tap_limit_rows(*ed_.plt[l][h], lim, hname("limtap", br.id, h));
          }
        }
        ed_.tap[l].push_back(std::move(tau));
        ed_.shift[l].push_back(std::move(delta));
        ed_.flow[l].push_back(std::move(flow));
      }
      if (tap_adj) {
        m.add_constraint("tbud_" + br.id, tap_budget, Sense::kLessEqual, d.tap_adjust_budget);
      }
      if (shift_adj) {
        m.add_constraint("sbud_" + br.id, shift_budget, Sense::kLessEqual,
                         d.shift_adjust_budget);
      }
    }
  }

  // The flow carried by tap i alone, bounded by s_i * limit.
  void add_tap_limit_rows(const PltEncoding& enc, double lim, const std::string& name) {
    const auto& p = enc.product;
    const double sign[] = {1.0, -1.0, -1.0};
    for (std::size_t i = 0; i < p.levels.size(); ++i) {
      LinearExpr part;
      for (std::size_t b = 0; b < p.blocks.size(); ++b) {
        const AlphaBlock& block = p.blocks[b];
        part.add(block.weights[2 * i + 1], sign[b] * p.coefs[i] * block.hi);
        part.add(block.weights[2 * i], sign[b] * p.coefs[i] * block.lo);
      }
      linearize_abs_step(LinearExpr(), part, LinearExpr(p.level_binaries[i], lim),
                         name + "_" + std::to_string(i + 1), ed_.model);
    }
  }

  void add_grid(std::size_t l, int h, VarId delta) {
    const Branch& br = c_.branches[l];
    const auto& pts = ed_.shift_grid_points[l];
    LinearExpr pick(delta), one;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const VarId s = ed_.model.add_binary(hname("sg", br.id, h) + "_" + std::to_string(k + 1));
      ed_.shift_grid[l].push_back(s);
      pick.add(s, -pts[k]);
      one.add(s, 1.0);
    }
    ed_.model.add_constraint(hname("sgrid", br.id, h), pick, Sense::kEqual, 0.0);
    ed_.model.add_constraint(hname("sgone", br.id, h), one, Sense::kEqual, 1.0);
  }

  void add_balance() {
    const std::size_t nb = c_.buses.size();
    ed_.balance.assign(nb, {});
    for (int h = 0; h < hours_; ++h) {
      std::vector<LinearExpr> net(nb);
      for (std::size_t g = 0; g < c_.generators.size(); ++g) {
        net[*c_.bus_index(c_.generators[g].bus)].add(ed_.p[g][h], 1.0);
      }
      for (std::size_t l = 0; l < c_.branches.size(); ++l) {
        const Branch& br = c_.branches[l];
        net[*c_.bus_index(br.from_bus)].add(ed_.flow[l][h], -1.0);
        net[*c_.bus_index(br.to_bus)].add(ed_.flow[l][h], 1.0);
      }
      for (std::size_t b = 0; b < nb; ++b) {
        ed_.balance[b].push_back(ed_.model.add_constraint(
            hname("bal", c_.buses[b].id, h), net[b], Sense::kEqual, c_.demand[b][h] / base_));
      }
    }
  }

  void add_reserve() {
    double capacity = 0.0;
    for (const auto& g : c_.generators) capacity += g.p_max;
    for (int h = 0; h < hours_; ++h) {
      if (c_.reserve[h] <= 0.0) continue;
      LinearExpr total;
      for (std::size_t g = 0; g < c_.generators.size(); ++g) total.add(ed_.p[g][h], 1.0);
      ed_.model.add_constraint("res_" + std::to_string(h + 1), total, Sense::kLessEqual,
                               (capacity - c_.reserve[h]) / base_);
    }
  }

  const NetworkCase& c_;
  DeviceMode mode_;
  const std::vector<std::vector<double>>* taps_;
  const std::vector<std::vector<double>>* shifts_;
  double base_;
  int hours_;
  EdModel ed_;
  LinearExpr objective_;
};

std::size_t nearest_index(const std::vector<double>& values, double v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (std::abs(values[i] - v) < std::abs(values[best] - v)) best = i;
  }
  return best;
}

DispatchStatus map_status(MilpStatus s) {
  switch (s) {
    case MilpStatus::kOptimal:
      return DispatchStatus::kOptimal;
    case MilpStatus::kFeasible:
      return DispatchStatus::kFeasibleGap;
    case MilpStatus::kLimit:
      return DispatchStatus::kLimit;
    case MilpStatus::kInfeasible:
      return DispatchStatus::kInfeasible;
    case MilpStatus::kUnbounded:
      return DispatchStatus::kUnbounded;
    case MilpStatus::kNumericalError:
      return DispatchStatus::kError;
  }
  return DispatchStatus::kError;
}

int count_changes(const std::vector<double>& series, double initial, double tol) {
  int n = 0;
  double prev = initial;
  for (double v : series) {
    if (std::abs(v - prev) > tol) ++n;
    prev = v;
  }
  return n;
}

}  // namespace

std::vector<double> shift_grid(const BranchDevice& d) {
  std::vector<double> pts;
  if (!(d.shift_hi > d.shift_lo) || !(d.shift_step_max > 0.0)) return {d.shift_lo};
  const double span = d.shift_hi - d.shift_lo;
  const auto n = static_cast<int>(std::floor(span / d.shift_step_max + 1e-9));
  for (int k = 0; k <= n; ++k) pts.push_back(d.shift_lo + k * d.shift_step_max);
  return pts;
}

EdModel build_ed0(const NetworkCase& c) { return Builder(c, DeviceMode::kInitial, {}).build(); }

EdModel build_ed1(const NetworkCase& c, const FormulationOptions& options) {
  return Builder(c, DeviceMode::kAdjustable, options).build();
}

EdModel build_fixed_schedule(const NetworkCase& c,
                             const std::vector<std::vector<double>>& taps,
                             const std::vector<std::vector<double>>& shifts) {
  const auto shape_ok = [&](const std::vector<std::vector<double>>& m) {
    if (m.size() != c.branches.size()) return false;
    return std::all_of(m.begin(), m.end(), [&](const auto& row) {
      return row.size() == static_cast<std::size_t>(c.horizon);
    });
  };
  if (!shape_ok(taps) || !shape_ok(shifts)) {
    throw ModelError("device schedule must cover every branch and hour");
  }
  return Builder(c, DeviceMode::kSchedule, {}, &taps, &shifts).build();
}

std::vector<BinaryHint> ed0_mip_start(const EdModel& ed1, const NetworkCase& c) {
  std::vector<BinaryHint> hints;
  for (std::size_t l = 0; l < c.branches.size(); ++l) {
    const BranchDevice& d = c.branches[l].device;
    for (int h = 0; h < c.horizon; ++h) {
      if (const auto& enc = ed1.plt[l][h]) {
        const std::size_t i0 = nearest_index(d.tap_set, d.initial_tap);
        const auto& s = enc->tap_binaries();
        for (std::size_t i = 0; i < s.size(); ++i) hints.push_back({s[i], i == i0 ? 1.0 : 0.0});
        const auto& y = enc->segment_binaries();
        const std::size_t k0 = std::min(i0, y.empty() ? 0 : y.size() - 1);
        for (std::size_t k = 0; k < y.size(); ++k) hints.push_back({y[k], k == k0 ? 1.0 : 0.0});
      }
    }
    for (VarId v : ed1.tap_indicator[l]) hints.push_back({v, 0.0});
    for (VarId v : ed1.shift_indicator[l]) hints.push_back({v, 0.0});
    const auto& pts = ed1.shift_grid_points[l];
    if (!pts.empty()) {
      const std::size_t k0 = nearest_index(pts, d.initial_shift);
      if (std::abs(pts[k0] - d.initial_shift) <= 1e-9) {
        const std::size_t g = pts.size();
        for (std::size_t idx = 0; idx < ed1.shift_grid[l].size(); ++idx) {
          hints.push_back({ed1.shift_grid[l][idx], idx % g == k0 ? 1.0 : 0.0});
        }
      }
    }
  }
  return hints;
}

std::vector<BinaryHint> early_shift_mip_start(const EdModel& ed1, const NetworkCase& c) {
  bool any_shifter = false;
  for (std::size_t l = 0; l < c.branches.size(); ++l) {
    if (!ed1.shift_grid_points[l].empty()) return {};
    any_shifter = any_shifter || !ed1.shift_indicator[l].empty();
  }
  if (!any_shifter) return {};
  std::vector<BinaryHint> hints = ed0_mip_start(ed1, c);
  for (auto& hint : hints) {
    for (std::size_t l = 0; l < c.branches.size(); ++l) {
      const auto& ind = ed1.shift_indicator[l];
      const auto it = std::find_if(ind.begin(), ind.end(),
                                   [&](VarId v) { return v.index == hint.var.index; });
      if (it == ind.end()) continue;
      hint.value = it - ind.begin() < c.branches[l].device.shift_adjust_budget ? 1.0 : 0.0;
    }
  }
  return hints;
}

DispatchSolution extract_solution(const EdModel& ed, std::span<const double> x,
                                  const NetworkCase& c, double snap_tol) {
  if (x.size() != ed.model.num_variables()) {
    throw SolutionError("assignment size does not match the model");
  }
  const double base = c.base_mva;
  const int hours = c.horizon;
  DispatchSolution s;
  s.status = DispatchStatus::kOptimal;
  s.objective = ed.model.objective_value(x);
  s.p.assign(c.generators.size(), {});
  for (std::size_t g = 0; g < c.generators.size(); ++g) {
    for (int h = 0; h < hours; ++h) s.p[g].push_back(x[ed.p[g][h].index] * base);
  }
  s.theta.assign(c.buses.size(), {});
  for (std::size_t b = 0; b < c.buses.size(); ++b) {
    for (int h = 0; h < hours; ++h) s.theta[b].push_back(x[ed.theta[b][h].index]);
  }
  const std::size_t nl = c.branches.size();
  s.tap.assign(nl, {});
  s.shift.assign(nl, {});
  s.flow.assign(nl, {});
  s.tap_adjustments.assign(nl, 0);
  s.shift_adjustments.assign(nl, 0);
  for (std::size_t l = 0; l < nl; ++l) {
    const Branch& br = c.branches[l];
    for (int h = 0; h < hours; ++h) {
      double tau = ed.tap[l][h].evaluate(x);
      if (const auto& enc = ed.plt[l][h]) {
        const PltValues v = recover_values(*enc, x, snap_tol);
        int support = 0;
        for (double mass : v.tap_mass) support += mass > snap_tol ? 1 : 0;
        if (support > 1) {
          throw SolutionError(fmt::format(
              "branch {} hour {}: tap weight split across {} taps (tau = {:.9g})", br.id, h + 1,
              support, v.tau));
        }
        const auto& w = br.device.tap_set;
        const std::size_t i = nearest_index(w, v.tau);
        if (std::abs(w[i] - v.tau) > snap_tol) {
          throw SolutionError(fmt::format("branch {} hour {}: tap {:.9g} is not in the tap set",
                                          br.id, h + 1, v.tau));
        }
        tau = w[i];
      }
      s.tap[l].push_back(tau);
      s.shift[l].push_back(ed.shift[l][h].evaluate(x));
      s.flow[l].push_back(ed.flow[l][h].evaluate(x) * base);
    }
    const BranchDevice& d = br.device;
    s.tap_adjustments[l] = count_changes(s.tap[l], d.tap_set.empty() ? 1.0 : d.initial_tap, 1e-9);
    s.shift_adjustments[l] = count_changes(s.shift[l], d.initial_shift, 1e-7);
  }

  // Balance with flows recomputed from the snapped devices.
  const auto flows = dc_flows(c, s);
  for (int h = 0; h < hours; ++h) {
    std::vector<double> net(c.buses.size(), 0.0);
    for (std::size_t g = 0; g < c.generators.size(); ++g) {
      net[*c.bus_index(c.generators[g].bus)] += s.p[g][h];
    }
    for (std::size_t l = 0; l < nl; ++l) {
      net[*c.bus_index(c.branches[l].from_bus)] -= flows[l][h];
      net[*c.bus_index(c.branches[l].to_bus)] += flows[l][h];
    }
    for (std::size_t b = 0; b < c.buses.size(); ++b) {
      const double residual = std::abs(net[b] - c.demand[b][h]) / base;
      if (residual > 1e-6) {
        throw SolutionError(fmt::format("bus {} hour {}: balance residual {:.3e} p.u.",
                                        c.buses[b].id, h + 1, residual));
      }
    }
  }
  return s;
}

EdResult solve_ed(const EdModel& ed, const NetworkCase& c, const SolveOptions& options) {
  EdResult out;
  std::vector<std::vector<BinaryHint>> starts;
  if (ed.adjustable && options.ed0_start) starts.push_back(ed0_mip_start(ed, c));
  if (ed.adjustable && options.early_shift_start) {
    starts.push_back(early_shift_mip_start(ed, c));
  }
  out.milp = solve_milp(ed.model, options.bnb, std::span<const std::vector<BinaryHint>>(starts));
  DispatchSolution& s = out.solution;
  s.status = map_status(out.milp.status);
  if (!out.milp.values.empty() &&
      (s.status == DispatchStatus::kOptimal || s.status == DispatchStatus::kFeasibleGap)) {
    try {
      const DispatchStatus status = s.status;
      s = extract_solution(ed, out.milp.values, c);
      s.status = status;
    } catch (const std::exception& e) {
      out.error = e.what();
      s = DispatchSolution{};
      s.status = DispatchStatus::kError;
    }
  }
  s.objective = out.milp.objective;
  s.gap = out.milp.gap;
  s.nodes = out.milp.nodes;
  s.solve_time = out.milp.seconds;
  return out;
}

std::vector<std::vector<double>> dc_flows(const NetworkCase& c, const DispatchSolution& s) {
  std::vector<std::vector<double>> out(c.branches.size());
  for (std::size_t l = 0; l < c.branches.size(); ++l) {
    const Branch& br = c.branches[l];
    const std::size_t m = *c.bus_index(br.from_bus);
    const std::size_t n = *c.bus_index(br.to_bus);
    for (int h = 0; h < c.horizon; ++h) {
      out[l].push_back(c.base_mva * dc_flow(s.theta[m][h], s.theta[n][h],
                                            {s.tap[l][h], s.shift[l][h]}, br.x));
    }
  }
  return out;
}

bool CheckReport::pass() const {
  return std::all_of(families.begin(), families.end(), [](const auto& f) { return f.pass; });
}

const CheckFamily* CheckReport::find(const std::string& name) const {
  for (const auto& f : families) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

namespace {

class FamilyTracker {
 public:
  explicit FamilyTracker(std::string name) { f_.name = std::move(name); }
  // Records a violation amount; positive values above `tol` fail.
  void record(double violation, double tol, const std::string& where) {
    if (violation > f_.worst) {
      f_.worst = violation;
      if (violation > tol) f_.detail = where;
    }
    if (violation > tol) f_.pass = false;
  }
  CheckFamily take() { return std::move(f_); }

 private:
  CheckFamily f_;
};

void require_matrix(const std::vector<std::vector<double>>& m, std::size_t rows, int hours,
                    const char* what) {
  bool ok = m.size() == rows;
  for (const auto& r : m) ok = ok && r.size() == static_cast<std::size_t>(hours);
  if (!ok) throw SolutionError(std::string("schedule is missing ") + what + " values");
}

}  // namespace

CheckReport verify_solution(const NetworkCase& c, const DispatchSolution& s,
                            const CheckTolerances& tol) {
  const int hours = c.horizon;
  const double base = c.base_mva;
  require_matrix(s.p, c.generators.size(), hours, "generation");
  require_matrix(s.theta, c.buses.size(), hours, "angle");
  require_matrix(s.tap, c.branches.size(), hours, "tap");
  require_matrix(s.shift, c.branches.size(), hours, "shift");
  const auto flows = dc_flows(c, s);

  FamilyTracker balance("balance"), limits("line-limits"), member("tap-membership"),
      range("shift-range"), steps("steps"), budgets("budgets"), gens("generator-limits"),
      ramps("ramps"), reserve("reserve"), angles("angles");

  for (int h = 0; h < hours; ++h) {
    std::vector<double> net(c.buses.size(), 0.0);
    double total = 0.0, capacity = 0.0;
    for (std::size_t g = 0; g < c.generators.size(); ++g) {
      const Generator& gen = c.generators[g];
      const double p = s.p[g][h];
      net[*c.bus_index(gen.bus)] += p;
      total += p;
      capacity += gen.p_max;
      const std::string where = fmt::format("generator {} hour {}", gen.id, h + 1);
      gens.record(std::max(gen.p_min - p, p - gen.p_max) / base, tol.bounds, where);
      const double prev = h == 0 ? gen.initial_p.value_or(NAN) : s.p[g][h - 1];
      if (!std::isnan(prev)) {
        ramps.record(std::max(p - prev - gen.ramp_up, prev - p - gen.ramp_down) / base,
                     tol.bounds, where);
      }
    }
    reserve.record((c.reserve[h] - (capacity - total)) / base, tol.bounds,
                   fmt::format("hour {}", h + 1));
    for (std::size_t l = 0; l < c.branches.size(); ++l) {
      const Branch& br = c.branches[l];
      net[*c.bus_index(br.from_bus)] -= flows[l][h];
      net[*c.bus_index(br.to_bus)] += flows[l][h];
      const std::string where = fmt::format("branch {} hour {}", br.id, h + 1);
      if (br.rating > 0.0) {
        limits.record((std::abs(flows[l][h]) - br.rating) / base, tol.limit_pu, where);
      }
    }
    for (std::size_t b = 0; b < c.buses.size(); ++b) {
      const Bus& bus = c.buses[b];
      const std::string where = fmt::format("bus {} hour {}", bus.id, h + 1);
      balance.record(std::abs(net[b] - c.demand[b][h]) / base, tol.balance_pu, where);
      const double th = s.theta[b][h];
      const double lo = bus.is_reference ? 0.0 : bus.angle_lo;
      const double hi = bus.is_reference ? 0.0 : bus.angle_hi;
      angles.record(std::max(lo - th, th - hi), tol.bounds, where);
    }
  }

  for (std::size_t l = 0; l < c.branches.size(); ++l) {
    const Branch& br = c.branches[l];
    const BranchDevice& d = br.device;
    const std::vector<double> fixed{1.0};
    const auto& taps = d.tap_set.empty() ? fixed : d.tap_set;
    for (int h = 0; h < hours; ++h) {
      const std::string where = fmt::format("branch {} hour {}", br.id, h + 1);
      const double t = s.tap[l][h];
      member.record(std::abs(taps[nearest_index(taps, t)] - t), tol.membership, where);
      const double sh = s.shift[l][h];
      range.record(std::max(d.shift_lo - sh, sh - d.shift_hi), tol.bounds, where);
      const double tprev = h == 0 ? (d.tap_set.empty() ? 1.0 : d.initial_tap) : s.tap[l][h - 1];
      const double sprev = h == 0 ? d.initial_shift : s.shift[l][h - 1];
      if (d.adjustable_tap()) {
        steps.record(std::abs(t - tprev) - d.tap_step_max, tol.step, where + " tap");
      }
      if (d.adjustable_shift()) {
        steps.record(std::abs(sh - sprev) - d.shift_step_max, tol.step, where + " shift");
      }
    }
    if (d.adjustable_tap()) {
      const int n = count_changes(s.tap[l], d.initial_tap, 1e-9);
      budgets.record(n - d.tap_adjust_budget, 0.0,
                     fmt::format("branch {} tap moved in {} hours", br.id, n));
    }
    if (d.adjustable_shift()) {
      const int n = count_changes(s.shift[l], d.initial_shift, 1e-7);
      budgets.record(n - d.shift_adjust_budget, 0.0,
                     fmt::format("branch {} shift moved in {} hours", br.id, n));
    }
  }

  CheckReport report;
  for (auto* f : {&balance, &limits, &member, &range, &steps, &budgets, &gens, &ramps, &reserve,
                  &angles}) {
    report.families.push_back(f->take());
  }
  return report;
}

}  // namespace edtr

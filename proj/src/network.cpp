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

#include "edtr/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace edtr {
namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kRadPerDeg = std::numbers::pi / 180.0;
constexpr double kMemberTol = 1e-9;

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- validation

class Checker {
 public:
  void add(std::string entity, std::string rule, std::string message) {
    out_.push_back({std::move(entity), std::move(rule), std::move(message)});
  }
  void expect(bool ok, const std::string& entity, const char* rule, const std::string& msg) {
    if (!ok) add(entity, rule, msg);
  }
  std::vector<Diagnostic> take() { return std::move(out_); }

 private:
  std::vector<Diagnostic> out_;
};

template <typename T>
void check_unique_ids(const std::vector<T>& items, const char* kind, Checker& chk) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    if (!seen.insert(item.id).second) {
      chk.add(std::string(kind) + " " + item.id, "duplicate-id",
              std::string("duplicate ") + kind + " id");
    }
  }
}

void check_device(const std::string& entity, const BranchDevice& d, Checker& chk) {
  const auto& w = d.tap_set;
  for (std::size_t i = 0; i < w.size(); ++i) {
    chk.expect(w[i] > 0.0 && std::isfinite(w[i]), entity, "tap-positive",
               "tap ratio " + fmt(w[i]) + " must be positive");
    if (i == 0) continue;
    if (w[i] == w[i - 1]) {
      chk.add(entity, "duplicate-tap", "duplicate tap value " + fmt(w[i]) + " on branch");
    } else if (!(w[i] > w[i - 1])) {
      chk.add(entity, "tap-order", "tap values must be strictly increasing");
    }
  }
  chk.expect(d.shift_lo <= d.shift_hi, entity, "shift-range",
             "shifter range lower bound exceeds upper bound");
  if (w.size() > 1) {
    chk.expect(d.tap_step_max > 0.0, entity, "tap-step",
               "tap step limit must be positive for an adjustable ratio");
  }
  if (d.shift_lo < d.shift_hi) {
    chk.expect(d.shift_step_max > 0.0, entity, "shift-step",
               "shift step limit must be positive for an adjustable shifter");
  }
  chk.expect(d.tap_adjust_budget >= 0 && d.shift_adjust_budget >= 0, entity,
             "adjust-budget", "adjustment budgets must be non-negative");
  if (!w.empty()) {
    const bool member = std::any_of(w.begin(), w.end(), [&](double t) {
      return std::abs(t - d.initial_tap) <= kMemberTol;
    });
    chk.expect(member, entity, "initial-tap",
               "initial tap " + fmt(d.initial_tap) + " not in discrete set");
  }
  chk.expect(d.initial_shift >= d.shift_lo - kMemberTol &&
                 d.initial_shift <= d.shift_hi + kMemberTol,
             entity, "initial-shift", "initial shift outside shifter range");
}

void check_generator(const Generator& g, const std::set<std::string>& buses,
                     Checker& chk) {
  const std::string entity = "generator " + g.id;
  chk.expect(buses.contains(g.bus), entity, "unknown-bus", "bus '" + g.bus + "' does not exist");
  chk.expect(g.p_min >= 0.0 && g.p_min <= g.p_max && std::isfinite(g.p_max), entity,
             "capacity", "requires 0 <= p_min <= p_max");
  chk.expect(g.ramp_up >= 0.0 && g.ramp_down >= 0.0, entity, "ramp",
             "ramp limits must be non-negative");
  const auto& cc = g.cost_curve;
  if (cc.empty()) {
    chk.add(entity, "cost-breakpoints", "cost curve is empty");
    return;
  }
  bool increasing = true;
  for (std::size_t k = 1; k < cc.size(); ++k) increasing &= cc[k].first > cc[k - 1].first;
  chk.expect(increasing, entity, "cost-breakpoints",
             "cost curve breakpoints must be strictly increasing");
  const double tol = kMemberTol * std::max(1.0, g.p_max);
  chk.expect(cc.front().first <= g.p_min + tol && cc.back().first >= g.p_max - tol,
             entity, "cost-span", "cost curve must span [p_min, p_max]");
  if (!increasing) return;
  for (std::size_t k = 2; k < cc.size(); ++k) {
    const double s0 = (cc[k - 1].second - cc[k - 2].second) / (cc[k - 1].first - cc[k - 2].first);
    const double s1 = (cc[k].second - cc[k - 1].second) / (cc[k].first - cc[k - 1].first);
    if (s1 < s0 - 1e-9 * std::max(1.0, std::abs(s0))) {
      chk.add(entity, "cost-convexity", "cost curve slopes must be non-decreasing");
      break;
    }
  }
}

// ------------------------------------------------------------------- parsing

class Parser {
 public:
  NetworkCase parse(const Json& root) {
    object(root, "case", {"name", "base_mva", "horizon", "buses", "branches", "generators",
                          "demand", "reserve"});
    NetworkCase c;
    c.name = root.contains("name") ? string(root["name"], "name") : "case";
    c.base_mva = root.contains("base_mva") ? number(root["base_mva"], "base_mva") : 100.0;
    c.horizon = integer(required(root, "horizon", "case"), "horizon");
    const Json& buses = array(required(root, "buses", "case"), "buses");
    for (std::size_t i = 0; i < buses.size(); ++i) {
      c.buses.push_back(bus(buses[i], "buses[" + std::to_string(i) + "]"));
    }
    const Json& branches = array(required(root, "branches", "case"), "branches");
    for (std::size_t i = 0; i < branches.size(); ++i) {
      c.branches.push_back(branch(branches[i], "branches[" + std::to_string(i) + "]"));
    }
    const Json& gens = array(required(root, "generators", "case"), "generators");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      c.generators.push_back(generator(gens[i], "generators[" + std::to_string(i) + "]"));
    }
    demand(root, c);
    reserve(root, c);
    return c;
  }

 private:
  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw CaseError("case field '" + path + "': " + what);
  }

  static void object(const Json& j, const std::string& path,
                     std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, _] : j.items()) {
      if (std::none_of(allowed.begin(), allowed.end(),
                       [&](const char* a) { return key == a; })) {
        fail(path + "." + key, "unknown field");
      }
    }
  }

  static const Json& required(const Json& j, const char* key, const std::string& path) {
    if (!j.contains(key)) fail(path == "case" ? key : path + "." + key, "missing required field");
    return j[key];
  }

  static const Json& array(const Json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected a list");
    return j;
  }

  static double number(const Json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "expected a finite number");
    return v;
  }

  static int integer(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    const auto v = j.get<long long>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      fail(path, "integer out of range");
    }
    return static_cast<int>(v);
  }

  static std::string string(const Json& j, const std::string& path) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_number_integer()) return std::to_string(j.get<long long>());
    fail(path, "expected a string");
  }

  static bool boolean(const Json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
  }

  static std::pair<double, double> pair(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "expected a [low, high] pair");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
  }

  static double opt_number(const Json& j, const char* key, const std::string& path,
                           double fallback) {
    return j.contains(key) ? number(j[key], path + "." + key) : fallback;
  }

  static Bus bus(const Json& j, const std::string& path) {
    object(j, path, {"id", "is_reference", "angle_bounds"});
    Bus b;
    b.id = string(required(j, "id", path), path + ".id");
    if (j.contains("is_reference")) b.is_reference = boolean(j["is_reference"], path + ".is_reference");
    if (j.contains("angle_bounds")) {
      const auto [lo, hi] = pair(j["angle_bounds"], path + ".angle_bounds");
      b.angle_lo = lo * kRadPerDeg;
      b.angle_hi = hi * kRadPerDeg;
    }
    return b;
  }

  static BranchDevice device(const Json& j, const std::string& path) {
    object(j, path, {"tap_set", "shifter_range", "tap_step_max", "shift_step_max",
                     "tap_adjust_budget", "shift_adjust_budget", "initial_tap",
                     "initial_shift"});
    BranchDevice d;
    if (j.contains("tap_set")) {
      const Json& taps = array(j["tap_set"], path + ".tap_set");
      for (std::size_t i = 0; i < taps.size(); ++i) {
        d.tap_set.push_back(number(taps[i], path + ".tap_set[" + std::to_string(i) + "]"));
      }
    }
    if (j.contains("shifter_range")) {
      const auto [lo, hi] = pair(j["shifter_range"], path + ".shifter_range");
      d.shift_lo = lo * kRadPerDeg;
      d.shift_hi = hi * kRadPerDeg;
    }
    d.tap_step_max = opt_number(j, "tap_step_max", path, 0.0);
    d.shift_step_max = opt_number(j, "shift_step_max", path, 0.0) * kRadPerDeg;
    if (j.contains("tap_adjust_budget")) {
      d.tap_adjust_budget = integer(j["tap_adjust_budget"], path + ".tap_adjust_budget");
    }
    if (j.contains("shift_adjust_budget")) {
      d.shift_adjust_budget = integer(j["shift_adjust_budget"], path + ".shift_adjust_budget");
    }
    d.initial_tap = opt_number(j, "initial_tap", path, 1.0);
    d.initial_shift = opt_number(j, "initial_shift", path, 0.0) * kRadPerDeg;
    return d;
  }

  static Branch branch(const Json& j, const std::string& path) {
    object(j, path, {"id", "from_bus", "to_bus", "x", "r", "b", "rating", "device"});
    Branch br;
    br.id = string(required(j, "id", path), path + ".id");
    br.from_bus = string(required(j, "from_bus", path), path + ".from_bus");
    br.to_bus = string(required(j, "to_bus", path), path + ".to_bus");
    br.x = number(required(j, "x", path), path + ".x");
    br.r = opt_number(j, "r", path, 0.0);
    br.b = opt_number(j, "b", path, 0.0);
    br.rating = opt_number(j, "rating", path, 0.0);
    if (j.contains("device")) br.device = device(j["device"], path + ".device");
    return br;
  }

  static Generator generator(const Json& j, const std::string& path) {
    object(j, path, {"id", "bus", "p_min", "p_max", "ramp_up", "ramp_down", "initial_p",
                     "cost_curve"});
    Generator g;
    g.id = string(required(j, "id", path), path + ".id");
    g.bus = string(required(j, "bus", path), path + ".bus");
    g.p_min = opt_number(j, "p_min", path, 0.0);
    g.p_max = number(required(j, "p_max", path), path + ".p_max");
    g.ramp_up = opt_number(j, "ramp_up", path, kInfinity);
    g.ramp_down = opt_number(j, "ramp_down", path, kInfinity);
    if (j.contains("initial_p")) g.initial_p = number(j["initial_p"], path + ".initial_p");
    const Json& curve = array(required(j, "cost_curve", path), path + ".cost_curve");
    for (std::size_t k = 0; k < curve.size(); ++k) {
      const std::string p = path + ".cost_curve[" + std::to_string(k) + "]";
      if (!curve[k].is_array() || curve[k].size() != 2) fail(p, "expected a [MW, $/h] pair");
      g.cost_curve.emplace_back(number(curve[k][0], p + "[0]"), number(curve[k][1], p + "[1]"));
    }
    return g;
  }

  static void demand(const Json& root, NetworkCase& c) {
    c.demand.assign(c.buses.size(), std::vector<double>(std::max(c.horizon, 0), 0.0));
    if (!root.contains("demand")) return;
    const Json& d = root["demand"];
    if (!d.is_object()) fail("demand", "expected an object keyed by bus id");
    for (const auto& [bus, values] : d.items()) {
      const std::string path = "demand." + bus;
      const auto idx = c.bus_index(bus);
      if (!idx) fail(path, "unknown bus id");
      array(values, path);
      std::vector<double> row;
      for (std::size_t h = 0; h < values.size(); ++h) {
        row.push_back(number(values[h], path + "[" + std::to_string(h) + "]"));
      }
      c.demand[*idx] = std::move(row);
    }
  }

  static void reserve(const Json& root, NetworkCase& c) {
    const std::size_t h = std::max(c.horizon, 0);
    if (!root.contains("reserve")) {
      c.reserve.assign(h, 0.0);
      return;
    }
    const Json& r = root["reserve"];
    if (r.is_number()) {
      c.reserve.assign(h, number(r, "reserve"));
      return;
    }
    array(r, "reserve");
    for (std::size_t k = 0; k < r.size(); ++k) {
      c.reserve.push_back(number(r[k], "reserve[" + std::to_string(k) + "]"));
    }
  }
};

OrderedJson degrees_pair(double lo, double hi) {
  return OrderedJson::array({lo / kRadPerDeg, hi / kRadPerDeg});
}

}  // namespace

std::optional<std::size_t> NetworkCase::bus_index(std::string_view id) const {
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (buses[i].id == id) return i;
  }
  return std::nullopt;
}

std::vector<Diagnostic> validate_case(const NetworkCase& c) {
  Checker chk;
  chk.expect(c.horizon >= 1, "case", "horizon", "horizon must be at least 1 hour");
  chk.expect(c.base_mva > 0.0 && std::isfinite(c.base_mva), "case", "base-mva",
             "base_mva must be positive");
  chk.expect(!c.buses.empty(), "case", "no-buses", "case has no buses");
  check_unique_ids(c.buses, "bus", chk);
  check_unique_ids(c.branches, "branch", chk);
  check_unique_ids(c.generators, "generator", chk);

  const auto refs = std::count_if(c.buses.begin(), c.buses.end(),
                                  [](const Bus& b) { return b.is_reference; });
  chk.expect(refs == 1, "case", "reference-bus",
             "exactly one reference bus required, found " + std::to_string(refs));
  std::set<std::string> bus_ids;
  for (const auto& b : c.buses) {
    bus_ids.insert(b.id);
    chk.expect(b.angle_lo < b.angle_hi, "bus " + b.id, "angle-bounds",
               "angle lower bound must be below upper bound");
  }

  for (const auto& br : c.branches) {
    const std::string entity = "branch " + br.id;
    chk.expect(br.x > 0.0, entity, "reactance", "reactance x must be positive");
    chk.expect(br.from_bus != br.to_bus, entity, "self-loop", "self-loop branch");
    chk.expect(bus_ids.contains(br.from_bus), entity, "unknown-bus",
               "from bus '" + br.from_bus + "' does not exist");
    chk.expect(bus_ids.contains(br.to_bus), entity, "unknown-bus",
               "to bus '" + br.to_bus + "' does not exist");
    chk.expect(br.rating >= 0.0, entity, "rating", "rating must be non-negative");
    check_device(entity, br.device, chk);
  }
  for (const auto& g : c.generators) check_generator(g, bus_ids, chk);

  const auto hours = static_cast<std::size_t>(std::max(c.horizon, 0));
  bool shape_ok = c.demand.size() == c.buses.size();
  for (const auto& row : c.demand) shape_ok &= row.size() == hours;
  chk.expect(shape_ok, "case", "demand-shape", "demand must list every bus for every hour");
  bool finite = true;
  for (const auto& row : c.demand) {
    for (double d : row) finite &= std::isfinite(d);
  }
  chk.expect(finite, "case", "demand-value", "demand values must be finite");
  chk.expect(c.reserve.size() == hours, "case", "reserve",
             "reserve must have one value per hour");
  chk.expect(std::all_of(c.reserve.begin(), c.reserve.end(),
                         [](double r) { return r >= 0.0 && std::isfinite(r); }),
             "case", "reserve", "reserve requirements must be non-negative");
  return chk.take();
}

NetworkCase load_case(std::string_view text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw CaseError(std::string("case file is not valid JSON: ") + e.what());
  }
  NetworkCase c = Parser().parse(root);
  auto diags = validate_case(c);
  if (!diags.empty()) {
    std::string what = "invalid case:";
    for (const auto& d : diags) what += "\n  " + d.to_string();
    throw CaseError(what, std::move(diags));
  }
  return c;
}

NetworkCase load_case_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CaseError("cannot open case file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_case(buf.str());
}

std::string serialize_case(const NetworkCase& c) {
  OrderedJson root;
  root["name"] = c.name;
  root["base_mva"] = c.base_mva;
  root["horizon"] = c.horizon;
  OrderedJson buses = OrderedJson::array();
  for (const auto& b : c.buses) {
    OrderedJson jb;
    jb["id"] = b.id;
    if (b.is_reference) jb["is_reference"] = true;
    if (b.angle_lo != -kDefaultAngleBound || b.angle_hi != kDefaultAngleBound) {
      jb["angle_bounds"] = degrees_pair(b.angle_lo, b.angle_hi);
    }
    buses.push_back(std::move(jb));
  }
  root["buses"] = std::move(buses);

  OrderedJson branches = OrderedJson::array();
  const BranchDevice none;
  for (const auto& br : c.branches) {
    OrderedJson jb;
    jb["id"] = br.id;
    jb["from_bus"] = br.from_bus;
    jb["to_bus"] = br.to_bus;
    jb["x"] = br.x;
    if (br.r != 0.0) jb["r"] = br.r;
    if (br.b != 0.0) jb["b"] = br.b;
    jb["rating"] = br.rating;
    if (br.device != none) {
      const auto& d = br.device;
      OrderedJson jd;
      if (!d.tap_set.empty()) jd["tap_set"] = d.tap_set;
      jd["shifter_range"] = degrees_pair(d.shift_lo, d.shift_hi);
      jd["tap_step_max"] = d.tap_step_max;
      jd["shift_step_max"] = d.shift_step_max / kRadPerDeg;
      jd["tap_adjust_budget"] = d.tap_adjust_budget;
      jd["shift_adjust_budget"] = d.shift_adjust_budget;
      jd["initial_tap"] = d.initial_tap;
      jd["initial_shift"] = d.initial_shift / kRadPerDeg;
      jb["device"] = std::move(jd);
    }
    branches.push_back(std::move(jb));
  }
  root["branches"] = std::move(branches);

  OrderedJson gens = OrderedJson::array();
  for (const auto& g : c.generators) {
    OrderedJson jg;
    jg["id"] = g.id;
    jg["bus"] = g.bus;
    jg["p_min"] = g.p_min;
    jg["p_max"] = g.p_max;
    if (std::isfinite(g.ramp_up)) jg["ramp_up"] = g.ramp_up;
    if (std::isfinite(g.ramp_down)) jg["ramp_down"] = g.ramp_down;
    if (g.initial_p) jg["initial_p"] = *g.initial_p;
    OrderedJson curve = OrderedJson::array();
    for (const auto& [p, f] : g.cost_curve) curve.push_back({p, f});
    jg["cost_curve"] = std::move(curve);
    gens.push_back(std::move(jg));
  }
  root["generators"] = std::move(gens);

  OrderedJson demand = OrderedJson::object();
  for (std::size_t i = 0; i < c.buses.size() && i < c.demand.size(); ++i) {
    const auto& row = c.demand[i];
    if (std::any_of(row.begin(), row.end(), [](double d) { return d != 0.0; })) {
      demand[c.buses[i].id] = row;
    }
  }
  root["demand"] = std::move(demand);
  const bool flat = std::adjacent_find(c.reserve.begin(), c.reserve.end(),
                                       std::not_equal_to<>()) == c.reserve.end();
  if (flat && !c.reserve.empty()) {
    root["reserve"] = c.reserve.front();
  } else {
    root["reserve"] = c.reserve;
  }
  return root.dump(2) + "\n";
}

double generator_cost(const Generator& g, double p) {
  const auto& cc = g.cost_curve;
  if (cc.empty()) return 0.0;
  if (cc.size() == 1) return cc.front().second;
  std::size_t k = 1;
  while (k + 1 < cc.size() && p > cc[k].first) ++k;
  const auto [p0, f0] = cc[k - 1];
  const auto [p1, f1] = cc[k];
  return f0 + (f1 - f0) * (p - p0) / (p1 - p0);
}

}  // namespace edtr

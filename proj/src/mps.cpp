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

#include "edtr/mps.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <initializer_list>
#include <regex>
#include <unordered_map>
#include <unordered_set>

namespace edtr {
namespace {

constexpr double kMpsInfinity = 1e30;

void append_number(std::string& out, double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw MpsError(0, "cannot format number");
  out.append(buf, end);
}

// Indented data line: fields separated by single spaces, then an optional
// number.
void data_line(std::string& out, std::initializer_list<std::string_view> fields,
               std::optional<double> value) {
  out += "   ";
  for (auto f : fields) {
    out += ' ';
    out += f;
  }
  if (value) {
    out += ' ';
    append_number(out, *value);
  }
  out += '\n';
}

void check_name(std::string_view name, std::string_view what) {
  if (name.empty()) throw MpsError(0, "empty " + std::string(what) + " name");
  if (name.size() > kMaxMpsNameLength) {
    throw MpsError(0, std::string(what) + " name longer than " +
                          std::to_string(kMaxMpsNameLength) + " characters: '" +
                          std::string(name.substr(0, 32)) + "...'");
  }
  if (std::any_of(name.begin(), name.end(),
                  [](unsigned char c) { return std::isspace(c) != 0; })) {
    throw MpsError(0, std::string(what) + " name contains whitespace: '" +
                          std::string(name) + "'");
  }
}

std::string_view sense_code(Sense s) {
  switch (s) {
    case Sense::kLessEqual:
      return "L";
    case Sense::kGreaterEqual:
      return "G";
    case Sense::kEqual:
      return "E";
  }
  return "E";
}

std::string objective_row_name(const MilpModel& model) {
  std::string name = "obj";
  for (int k = 1; model.find_constraint(name); ++k) {
    name = "obj_" + std::to_string(k);
  }
  return name;
}

void write_bounds(std::string& out, const Variable& v) {
  const std::string_view n = v.name;
  if (v.kind == VarKind::kBinary) {
    data_line(out, {"BV", "BND", n}, std::nullopt);
    if (v.lower == v.upper) {
      data_line(out, {"FX", "BND", n}, v.lower);
      return;
    }
    if (v.lower != 0.0) data_line(out, {"LO", "BND", n}, v.lower);
    if (v.upper != 1.0) data_line(out, {"UP", "BND", n}, v.upper);
    return;
  }
  if (v.lower == v.upper) {
    data_line(out, {"FX", "BND", n}, v.lower);
    return;
  }
  const bool lo_inf = std::isinf(v.lower);
  const bool up_inf = std::isinf(v.upper);
  if (lo_inf && up_inf) {
    data_line(out, {"FR", "BND", n}, std::nullopt);
    return;
  }
  if (lo_inf) {
    data_line(out, {"MI", "BND", n}, std::nullopt);
  } else if (v.lower != 0.0) {
    data_line(out, {"LO", "BND", n}, v.lower);
  }
  if (!up_inf) data_line(out, {"UP", "BND", n}, v.upper);
}

}  // namespace

std::string export_mps(const MilpModel& model) {
  const auto& vars = model.variables();
  const auto& rows = model.constraints();
  for (const auto& v : vars) check_name(v.name, "column");
  for (const auto& r : rows) check_name(r.name, "row");
  if (model.name().find_first_of("\r\n") != std::string::npos) {
    throw MpsError(0, "model name contains a line break");
  }
  const std::string obj = objective_row_name(model);

  std::vector<std::vector<std::pair<int, double>>> by_col(vars.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& t : rows[i].terms) {
      by_col[t.var.index].emplace_back(static_cast<int>(i), t.coef);
    }
  }
  std::vector<double> cost(vars.size(), 0.0);
  for (const auto& t : model.objective().terms()) cost[t.var.index] = t.coef;

  std::string out;
  out.reserve(48 * (vars.size() * 4 + rows.size()));
  out += "NAME " + model.name() + "\n";
  out += "ROWS\n";
  out += " N " + obj + "\n";
  for (const auto& r : rows) {
    out += ' ';
    out += sense_code(r.sense);
    out += ' ';
    out += r.name;
    out += '\n';
  }

  out += "COLUMNS\n";
  for (std::size_t j = 0; j < vars.size(); ++j) {
    // Columns without nonzeros still need one entry to be declared.
    if (cost[j] != 0.0 || by_col[j].empty()) {
      data_line(out, {vars[j].name, obj}, cost[j]);
    }
    for (const auto& [i, a] : by_col[j]) {
      data_line(out, {vars[j].name, rows[i].name}, a);
    }
  }

  out += "RHS\n";
  if (model.objective().constant() != 0.0) {
    data_line(out, {"RHS", obj}, -model.objective().constant());
  }
  for (const auto& r : rows) {
    if (r.rhs != 0.0) data_line(out, {"RHS", r.name}, r.rhs);
  }

  out += "RANGES\n";
  for (const auto& r : rows) {
    if (r.range) data_line(out, {"RNG", r.name}, *r.range);
  }

  out += "BOUNDS\n";
  for (const auto& v : vars) write_bounds(out, v);
  out += "ENDATA\n";
  return out;
}

namespace {

enum class Section { kNone, kName, kObjSense, kRows, kColumns, kRhs, kRanges, kBounds, kEnd };

struct RowRec {
  std::string name;
  Sense sense = Sense::kEqual;
  double rhs = 0.0;
  std::optional<double> range;
  LinearExpr expr;
};

struct ColRec {
  std::string name;
  bool integer = false;
  bool binary_bound = false;  // BV seen
  bool lower_set = false;
  bool upper_set = false;
  double lower = 0.0;
  double upper = kInf;
  double cost = 0.0;
};

class MpsReader {
 public:
  explicit MpsReader(std::string_view text) : text_(text) {}

  MilpModel read() {
    std::size_t pos = 0;
    while (pos <= text_.size() && section_ != Section::kEnd) {
      std::size_t eol = text_.find('\n', pos);
      if (eol == std::string_view::npos) eol = text_.size();
      std::string_view line = text_.substr(pos, eol - pos);
      pos = eol + 1;
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      process(line);
      if (eol == text_.size()) break;
    }
    if (!seen_columns_ || cols_.empty()) {
      throw MpsError(0, "COLUMNS section is empty");
    }
    return build();
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw MpsError(line_no_, what); }

  static std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      out.push_back(line.substr(i, j - i));
      i = j;
    }
    return out;
  }

  double number(std::string_view tok) const {
    double v = 0.0;
    const char* first = tok.data();
    if (!tok.empty() && tok.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      fail("invalid number '" + std::string(tok) + "'");
    }
    if (v >= kMpsInfinity) return kInf;
    if (v <= -kMpsInfinity) return -kInf;
    return v;
  }

  void process(std::string_view line) {
    if (line.empty() || line.front() == '*') return;
    auto tok = split(line);
    if (tok.empty()) return;
    const bool header = !std::isspace(static_cast<unsigned char>(line.front()));
    if (header) {
      start_section(tok, line);
      return;
    }
    switch (section_) {
      case Section::kObjSense:
        objsense(tok[0]);
        break;
      case Section::kRows:
        row_entry(tok);
        break;
      case Section::kColumns:
        column_entry(tok);
        break;
      case Section::kRhs:
        rhs_entry(tok, /*ranges=*/false);
        break;
      case Section::kRanges:
        rhs_entry(tok, /*ranges=*/true);
        break;
      case Section::kBounds:
        bound_entry(tok);
        break;
      default:
        fail("data line outside of a section");
    }
  }

  void start_section(const std::vector<std::string_view>& tok, std::string_view line) {
    const std::string_view s = tok[0];
    if (s == "NAME") {
      section_ = Section::kName;
      std::string_view rest = line.substr(4);
      const auto b = rest.find_first_not_of(" \t");
      name_ = b == std::string_view::npos ? "" : std::string(rest.substr(b));
      while (!name_.empty() && std::isspace(static_cast<unsigned char>(name_.back()))) {
        name_.pop_back();
      }
    } else if (s == "OBJSENSE") {
      section_ = Section::kObjSense;
      if (tok.size() > 1) objsense(tok[1]);
    } else if (s == "ROWS") {
      section_ = Section::kRows;
    } else if (s == "COLUMNS") {
      section_ = Section::kColumns;
      seen_columns_ = true;
    } else if (s == "RHS") {
      section_ = Section::kRhs;
    } else if (s == "RANGES") {
      section_ = Section::kRanges;
    } else if (s == "BOUNDS") {
      section_ = Section::kBounds;
    } else if (s == "ENDATA") {
      section_ = Section::kEnd;
    } else {
      fail("unsupported section '" + std::string(s) + "'");
    }
  }

  void objsense(std::string_view s) {
    if (s == "MAX" || s == "MAXIMIZE") {
      maximize_ = true;
    } else if (s == "MIN" || s == "MINIMIZE") {
      maximize_ = false;
    } else {
      fail("unknown OBJSENSE '" + std::string(s) + "'");
    }
  }

  void row_entry(const std::vector<std::string_view>& tok) {
    if (tok.size() != 2) fail("ROWS entry needs a type and a name");
    const std::string name(tok[1]);
    if (row_index_.contains(name) || name == obj_name_ || free_rows_.contains(name)) {
      fail("duplicate row '" + name + "'");
    }
    const std::string_view t = tok[0];
    if (t == "N") {
      if (obj_name_.empty()) {
        obj_name_ = name;
      } else {
        free_rows_.insert(name);  // extra free rows carry no information
      }
      return;
    }
    Sense sense;
    if (t == "L") {
      sense = Sense::kLessEqual;
    } else if (t == "G") {
      sense = Sense::kGreaterEqual;
    } else if (t == "E") {
      sense = Sense::kEqual;
    } else {
      fail("unknown row type '" + std::string(t) + "'");
    }
    row_index_.emplace(name, static_cast<int>(rows_.size()));
    rows_.push_back(RowRec{name, sense, 0.0, std::nullopt, {}});
  }

  int column(std::string_view name, bool create) {
    auto it = col_index_.find(std::string(name));
    if (it != col_index_.end()) return it->second;
    if (!create) fail("unknown column '" + std::string(name) + "'");
    const int id = static_cast<int>(cols_.size());
    col_index_.emplace(std::string(name), id);
    ColRec rec;
    rec.name = std::string(name);
    rec.integer = in_integer_block_;
    cols_.push_back(std::move(rec));
    return id;
  }

  // Returns the row index, -1 for the objective, -2 for an ignored free row.
  int row(std::string_view name) const {
    if (name == obj_name_) return -1;
    auto it = row_index_.find(std::string(name));
    if (it != row_index_.end()) return it->second;
    if (free_rows_.contains(std::string(name))) return -2;
    fail("unknown row '" + std::string(name) + "'");
  }

  void column_entry(const std::vector<std::string_view>& tok) {
    if (tok.size() >= 3 && tok[1] == "'MARKER'") {
      if (tok[2] == "'INTORG'") {
        in_integer_block_ = true;
      } else if (tok[2] == "'INTEND'") {
        in_integer_block_ = false;
      } else {
        fail("unknown marker " + std::string(tok[2]));
      }
      return;
    }
    if (tok.size() != 3 && tok.size() != 5) fail("COLUMNS entry needs 3 or 5 fields");
    const int j = column(tok[0], true);
    for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
      const int i = row(tok[k]);
      const double v = number(tok[k + 1]);
      if (i == -2) continue;
      const auto key = (static_cast<std::uint64_t>(i + 1) << 32) | static_cast<std::uint32_t>(j);
      if (!seen_entries_.insert(key).second) {
        fail("duplicate entry for column '" + cols_[j].name + "' in row '" +
             std::string(tok[k]) + "'");
      }
      if (i == -1) {
        cols_[j].cost = v;
      } else {
        rows_[i].expr.add(VarId{j}, v);
      }
    }
  }

  void rhs_entry(const std::vector<std::string_view>& tok, bool ranges) {
    // The set name is optional in free format: 2 or 4 fields omit it.
    const std::size_t first = tok.size() % 2 == 1 ? 1 : 0;
    if (tok.size() < 2 || tok.size() > 5) fail("malformed RHS/RANGES entry");
    for (std::size_t k = first; k + 1 < tok.size(); k += 2) {
      const int i = row(tok[k]);
      const double v = number(tok[k + 1]);
      if (i == -2) continue;
      if (ranges) {
        if (i == -1) fail("RANGES entry on the objective row");
        rows_[i].range = v;
      } else if (i == -1) {
        objective_constant_ = -v;
      } else {
        rows_[i].rhs = v;
      }
    }
  }

  void bound_entry(const std::vector<std::string_view>& tok) {
    if (tok.size() < 2) fail("malformed BOUNDS entry");
    const std::string_view type = tok[0];
    const bool needs_value = type == "UP" || type == "LO" || type == "FX" ||
                             type == "LI" || type == "UI";
    // Free format allows the bound set name to be omitted.
    std::size_t c = 2;
    if (needs_value ? tok.size() == 3 : tok.size() == 2) c = 1;
    if (c >= tok.size()) fail("malformed BOUNDS entry");
    ColRec& col = cols_[column(tok[c], false)];
    const double v = needs_value ? (c + 1 < tok.size() ? number(tok[c + 1])
                                                       : (fail("bound value missing"), 0.0))
                                 : 0.0;
    if (type == "UP" || type == "UI") {
      col.upper = v;
      col.upper_set = true;
      if (v < 0.0 && !col.lower_set && col.lower == 0.0) col.lower = -kInf;
      if (type == "UI") col.integer = true;
    } else if (type == "LO" || type == "LI") {
      col.lower = v;
      col.lower_set = true;
      if (type == "LI") col.integer = true;
    } else if (type == "FX") {
      col.lower = col.upper = v;
      col.lower_set = col.upper_set = true;
    } else if (type == "FR") {
      col.lower = -kInf;
      col.upper = kInf;
      col.lower_set = col.upper_set = true;
    } else if (type == "MI") {
      col.lower = -kInf;
      col.lower_set = true;
    } else if (type == "PL") {
      col.upper = kInf;
      col.upper_set = true;
    } else if (type == "BV") {
      col.integer = true;
      col.binary_bound = true;
      col.lower = 0.0;
      col.upper = 1.0;
      col.lower_set = col.upper_set = true;
    } else {
      fail("unsupported bound type '" + std::string(type) + "'");
    }
  }

  MilpModel build() {
    MilpModel model(name_.empty() ? "model" : name_);
    LinearExpr objective(objective_constant_);
    for (auto& c : cols_) {
      VarKind kind = VarKind::kContinuous;
      if (c.integer) {
        // Integer columns without an explicit upper bound default to binary.
        if (!c.upper_set) c.upper = 1.0;
        if (c.lower < 0.0 || c.upper > 1.0) {
          throw MpsError(0, "general integer column '" + c.name + "' is not supported");
        }
        kind = VarKind::kBinary;
      }
      try {
        const VarId v = model.add_variable(c.name, kind, c.lower, c.upper);
        objective.add(v, c.cost);
      } catch (const ModelError& e) {
        throw MpsError(0, e.what());
      }
    }
    if (maximize_) objective *= -1.0;
    model.set_objective(objective);
    for (auto& r : rows_) {
      try {
        model.add_constraint(r.name, r.expr, r.sense, r.rhs, r.range);
      } catch (const ModelError& e) {
        throw MpsError(0, e.what());
      }
    }
    return model;
  }

  std::string_view text_;
  int line_no_ = 0;
  Section section_ = Section::kNone;
  std::string name_;
  std::string obj_name_;
  bool maximize_ = false;
  bool seen_columns_ = false;
  bool in_integer_block_ = false;
  double objective_constant_ = 0.0;
  std::vector<RowRec> rows_;
  std::vector<ColRec> cols_;
  std::unordered_map<std::string, int> row_index_;
  std::unordered_map<std::string, int> col_index_;
  std::unordered_set<std::string> free_rows_;
  std::unordered_set<std::uint64_t> seen_entries_;
};

std::map<std::string, std::string> xml_attributes(const std::string& tag) {
  static const std::regex attr(R"re(([A-Za-z_][\w.-]*)\s*=\s*"([^"]*)")re");
  std::map<std::string, std::string> out;
  for (auto it = std::sregex_iterator(tag.begin(), tag.end(), attr);
       it != std::sregex_iterator(); ++it) {
    out[(*it)[1]] = (*it)[2];
  }
  return out;
}

double xml_number(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw MpsError(0, "invalid number '" + s + "' in solution file");
  }
  return v;
}

}  // namespace

MilpModel import_mps(std::string_view text) { return MpsReader(text).read(); }

ExternalSolution read_cplex_sol(std::string_view text) {
  ExternalSolution sol;
  const std::string s(text);
  static const std::regex tag(R"re(<\s*(header|variable)\b([^>]*)>)re");
  for (auto it = std::sregex_iterator(s.begin(), s.end(), tag);
       it != std::sregex_iterator(); ++it) {
    const auto attrs = xml_attributes((*it)[2]);
    if ((*it)[1] == "header") {
      if (auto a = attrs.find("objectiveValue"); a != attrs.end()) {
        sol.objective = xml_number(a->second);
      }
      if (auto a = attrs.find("solutionStatusString"); a != attrs.end()) {
        sol.status = a->second;
      }
      continue;
    }
    const auto name = attrs.find("name");
    const auto value = attrs.find("value");
    if (name == attrs.end() || value == attrs.end()) {
      throw MpsError(0, "solution <variable> without name or value");
    }
    sol.values[name->second] = xml_number(value->second);
  }
  if (sol.values.empty()) throw MpsError(0, "solution file lists no variables");
  return sol;
}

std::vector<double> assignment_from_names(
    const MilpModel& model, const std::map<std::string, double>& values) {
  std::vector<double> out;
  out.reserve(model.num_variables());
  for (const auto& v : model.variables()) {
    auto it = values.find(v.name);
    if (it == values.end()) {
      throw ModelError("solution has no value for variable '" + v.name + "'");
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace edtr

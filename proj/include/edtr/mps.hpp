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

// Free-format MPS reader/writer and a reader for CPLEX-style XML solution
// files. The written layout is described in docs/mps-format.md.

#ifndef EDTR_MPS_HPP_
#define EDTR_MPS_HPP_

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "edtr/milp_model.hpp"

namespace edtr {

class MpsError : public std::runtime_error {
 public:
  MpsError(int line, const std::string& what)
      : std::runtime_error(line > 0 ? "MPS line " + std::to_string(line) + ": " + what
                                    : "MPS: " + what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

inline constexpr std::size_t kMaxMpsNameLength = 255;

// Serializes `model`. Output depends only on the model contents, so equal
// models give identical bytes. Throws MpsError on names that are empty,
// longer than kMaxMpsNameLength or contain whitespace.
std::string export_mps(const MilpModel& model);

// Parses free-format MPS. Integer columns (MARKER INTORG or BV/LI/UI bounds)
// must end up with bounds inside [0, 1] and become binaries. OBJSENSE MAX is
// folded into a minimization by negating the objective.
MilpModel import_mps(std::string_view text);

struct ExternalSolution {
  std::optional<double> objective;
  std::string status;
  std::map<std::string, double> values;
};

// Reads `<variable name="..." value="..."/>` entries and the header
// objectiveValue / solutionStatusString attributes of a CPLEX .sol file.
ExternalSolution read_cplex_sol(std::string_view text);

// Orders named values by the model's variables. Throws ModelError when a
// model variable is missing from `values`.
std::vector<double> assignment_from_names(
    const MilpModel& model, const std::map<std::string, double>& values);

}  // namespace edtr

#endif  // EDTR_MPS_HPP_

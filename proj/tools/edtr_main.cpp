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

// edtr run CASE [--mode ed0|ed1|both] ...   solve and report
// edtr check CASE SCHEDULE                  verify a schedule CSV
//
// Exit codes: 0 optimal (check: all families pass), 1 invalid input,
// 2 infeasible or unbounded, 3 limit reached, 4 solver or check failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "edtr/branch_physics.hpp"
#include "edtr/formulation.hpp"
#include "edtr/mps.hpp"
#include "edtr/network.hpp"
#include "edtr/report.hpp"

namespace fs = std::filesystem;

namespace {

enum ExitCode { kOk = 0, kInvalid = 1, kInfeasible = 2, kLimit = 3, kFailure = 4 };

int exit_code(edtr::DispatchStatus s) {
  switch (s) {
    case edtr::DispatchStatus::kOptimal:
      return kOk;
    case edtr::DispatchStatus::kInfeasible:
    case edtr::DispatchStatus::kUnbounded:
      return kInfeasible;
    case edtr::DispatchStatus::kFeasibleGap:
    case edtr::DispatchStatus::kLimit:
      return kLimit;
    case edtr::DispatchStatus::kError:
      break;
  }
  return kFailure;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

void print_case_error(const edtr::CaseError& e) {
  std::cerr << "invalid case: " << e.what() << "\n";
  for (const auto& d : e.diagnostics()) std::cerr << "  " << d.to_string() << "\n";
}

struct RunArgs {
  std::string case_path;
  std::string mode = "both";
  double gap = 1e-4;
  std::string variant = "disjunctive";
  std::string export_mps;
  double time_limit = 0.0;
  std::string out_dir = "out";
  bool shift_grid = false;
};

int cmd_run(const RunArgs& args) {
  edtr::NetworkCase c;
  std::vector<std::pair<std::string, edtr::EdModel>> models;
  try {
    c = edtr::load_case_file(args.case_path);
    edtr::FormulationOptions options;
    options.variant = args.variant == "segment" ? edtr::EncodingVariant::kSegmentAdjacency
                                              : edtr::EncodingVariant::kDisjunctiveExact;
    options.restrict_shift_to_grid = args.shift_grid;
    if (args.mode != "ed1") models.emplace_back("ED0", edtr::build_ed0(c));
    if (args.mode != "ed0") models.emplace_back("ED1", edtr::build_ed1(c, options));
  } catch (const edtr::CaseError& e) {
    print_case_error(e);
    return kInvalid;
  }

  fs::create_directories(args.out_dir);
  if (!args.export_mps.empty()) {
    // The last model is ED1 unless only ED0 was requested; ED0 goes next to it.
    for (const auto& [name, ed] : models) {
      fs::path path = args.export_mps;
      if (name == "ED0" && models.size() > 1) {
        path.replace_filename(path.stem().string() + "_ed0" + path.extension().string());
      }
      write_file(path, edtr::export_mps(ed.model));
    }
  }

  edtr::SolveOptions solve;
  solve.bnb.relative_gap = args.gap;
  if (args.time_limit > 0.0) solve.bnb.time_limit = args.time_limit;
  std::vector<std::future<edtr::EdResult>> pending;
  for (const auto& entry : models) {
    pending.push_back(std::async(std::launch::async, [&c, &solve, &entry] {
      return edtr::solve_ed(entry.second, c, solve);
    }));
  }

  edtr::RunReport report;
  report.case_id = c.name;
  report.gap = args.gap;
  for (std::size_t k = 0; k < models.size(); ++k) {
    edtr::EdResult r = pending[k].get();
    edtr::VariantRun run;
    run.name = models[k].first;
    run.solution = std::move(r.solution);
    run.error = r.error;
    if (run.solution.has_schedule()) {
      run.checks = edtr::verify_solution(c, run.solution);
      run.max_dc_rel_err = edtr::dc_error_report(c, run.solution, false).max_rel_err;
    }
    report.runs.push_back(std::move(run));
  }

  // Files are written only after every solve has finished.
  for (const auto& run : report.runs) {
    const fs::path dir = fs::path(args.out_dir) / (run.name == "ED0" ? "ed0" : "ed1");
    fs::create_directories(dir);
    const auto& s = run.solution;
    if (!s.has_schedule()) continue;
    write_file(dir / "generation.csv", render([&](auto& os) { write_generation_csv(c, s, os); }));
    write_file(dir / "devices.csv", render([&](auto& os) { write_devices_csv(c, s, os); }));
    write_file(dir / "flows.csv", render([&](auto& os) { write_flows_csv(c, s, os); }));
    write_file(dir / "schedule.csv", render([&](auto& os) { write_schedule_csv(c, s, os); }));
    write_file(dir / "dc_error.csv", render([&](auto& os) {
                 edtr::write_dc_error_csv(edtr::dc_error_report(c, s, false), os);
               }));
  }
  const std::string text = render([&](auto& os) { write_report_text(report, os); });
  write_file(fs::path(args.out_dir) / "report.txt", text);
  write_file(fs::path(args.out_dir) / "report.csv",
             render([&](auto& os) { write_report_csv(report, os); }));
  std::cout << text;

  // In mode both the adjustable model decides the exit code.
  return exit_code(report.runs.back().solution.status);
}

int check_one(const edtr::NetworkCase& c, const fs::path& schedule) {
  std::ifstream in(schedule);
  if (!in) {
    std::cerr << "cannot read " << schedule << "\n";
    return kInvalid;
  }
  edtr::DispatchSolution s;
  try {
    s = edtr::read_schedule_csv(c, in);
  } catch (const edtr::SolutionError& e) {
    std::cerr << e.what() << "\n";
    return kInvalid;
  }
  const edtr::CheckReport report = edtr::verify_solution(c, s);
  std::cout << schedule.string() << "\n";
  for (const auto& f : report.families) {
    std::cout << "  " << (f.pass ? "pass " : "FAIL ") << f.name;
    if (!f.pass) std::cout << " (worst " << f.worst << "): " << f.detail;
    std::cout << "\n";
  }
  const edtr::DcErrorReport dc = edtr::dc_error_report(c, s, false);
  std::cout << "  DC vs AC flow: max relative deviation " << dc.max_rel_err << "\n";
  return report.pass() ? kOk : kFailure;
}

int cmd_check(const std::string& case_path, const std::string& target) {
  edtr::NetworkCase c;
  try {
    c = edtr::load_case_file(case_path);
  } catch (const edtr::CaseError& e) {
    print_case_error(e);
    return kInvalid;
  }
  // A run directory holds ed0/ and ed1/ subdirectories with a schedule each.
  std::vector<fs::path> files;
  if (fs::is_directory(target)) {
    for (const char* sub : {"", "ed0", "ed1"}) {
      const fs::path p = fs::path(target) / sub / "schedule.csv";
      if (fs::exists(p)) files.push_back(p);
    }
    if (files.empty()) {
      std::cerr << "no schedule.csv under " << target << "\n";
      return kInvalid;
    }
  } else {
    files.emplace_back(target);
  }
  int worst = kOk;
  for (const auto& f : files) worst = std::max(worst, check_one(c, f));
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-period economic dispatch with adjustable tap changers and phase shifters"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Solve ED0 and/or ED1 and write a report");
  run_cmd->add_option("case", run.case_path, "Case file (JSON)")->required();
  run_cmd->add_option("--mode", run.mode, "ed0, ed1 or both")
      ->check(CLI::IsMember({"ed0", "ed1", "both"}));
  run_cmd->add_option("--gap", run.gap, "Relative termination gap")->check(CLI::Range(0.0, 1.0));
  run_cmd->add_option("--variant", run.variant, "Tap encoding: disjunctive or segment")
      ->check(CLI::IsMember({"disjunctive", "segment"}));
  run_cmd->add_option("--export-mps", run.export_mps, "Write the model(s) in MPS format");
  run_cmd->add_option("--time-limit", run.time_limit, "Seconds per model (0 = none)");
  run_cmd->add_option("--out-dir", run.out_dir, "Output directory");
  run_cmd->add_flag("--shift-grid", run.shift_grid, "Restrict shifts to the step grid");

  std::string check_case, check_target;
  CLI::App* check_cmd = app.add_subcommand("check", "Verify a schedule against a case");
  check_cmd->add_option("case", check_case, "Case file (JSON)")->required();
  check_cmd->add_option("schedule", check_target, "schedule.csv or a run directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInvalid;
  }
  try {
    if (*run_cmd) return cmd_run(run);
    return cmd_check(check_case, check_target);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

// Copyright 2026 The teamstruct Authors.
//
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

// teamstruct command-line front end.
//
//   teamstruct solve-team FILE [--out PATH]
//   teamstruct solve-game FILE [--out PATH]
//   teamstruct design FILE [--k K] [--method M] [--kind KIND] [--parallel W]
//   teamstruct benchmark [--n --N --m --p --q --k --trials --seed] [--out CSV]
//   teamstruct counterexample [--format json|csv] [--out PATH]
//
// Exit codes: 0 success, 2 input or validation error, 3 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <string>

#include "teamstruct/teamstruct.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct ReportDeleter {
  void operator()(ts_report* r) const { ts_report_free(r); }
};
struct ProblemDeleter {
  void operator()(ts_problem* p) const { ts_problem_free(p); }
};
using ReportPtr = std::unique_ptr<ts_report, ReportDeleter>;
using ProblemPtr = std::unique_ptr<ts_problem, ProblemDeleter>;

int ExitCodeFor(ts_status status) {
  switch (status) {
    case TS_OK:
      return kExitOk;
    case TS_ERR_NUMERICAL:
      return kExitNumerical;
    case TS_ERR_INVALID_INPUT:
    case TS_ERR_TOO_LARGE:
      return kExitInput;
    default:
      return kExitNumerical;
  }
}

bool WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return static_cast<bool>(std::cout);
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

std::optional<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

ProblemPtr LoadProblem(const std::string& path, int* exit_code) {
  const auto text = ReadFile(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    *exit_code = kExitInput;
    return nullptr;
  }
  ts_problem* problem = nullptr;
  const ts_status status =
      ts_problem_parse(text->data(), text->size(), &problem);
  if (status != TS_OK) {
    std::cerr << "error: " << ts_last_error() << "\n";
    *exit_code = ExitCodeFor(status);
    return nullptr;
  }
  return ProblemPtr(problem);
}

// Writes the report (success or numerical error report) and maps the status.
int Finish(ts_status status, ts_report* raw, const std::string& out_path,
           bool csv = false) {
  ReportPtr report(raw);
  if (status != TS_OK) std::cerr << "error: " << ts_last_error() << "\n";
  if (report) {
    const std::string text = csv && status == TS_OK
                                 ? ts_report_csv(report.get())
                                 : ts_report_json(report.get());
    if (!WriteText(out_path, text)) return kExitInput;
  }
  return ExitCodeFor(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static LQ team and game solver with information design"};
  app.set_version_flag("--version", std::string(ts_version()));
  app.require_subcommand(1);

  std::string file;
  std::string out_path;
  int parallel = 0;

  auto* solve_team = app.add_subcommand("solve-team", "Solve a team problem");
  solve_team->add_option("file", file, "Problem file")->required();
  solve_team->add_option("--out", out_path, "Report path (default stdout)");

  auto* solve_game = app.add_subcommand("solve-game", "Solve a two-team game");
  solve_game->add_option("file", file, "Problem file")->required();
  solve_game->add_option("--out", out_path, "Report path (default stdout)");

  int k = -1;
  std::string method;
  std::string kind;
  auto* design = app.add_subcommand("design", "Select k candidate links");
  design->add_option("file", file, "Problem file")->required();
  design->add_option("--k", k, "Number of links to add")
      ->check(CLI::NonNegativeNumber);
  design->add_option("--method", method, "greedy, exhaustive or both")
      ->check(CLI::IsMember({"greedy", "exhaustive", "both"}));
  design->add_option("--kind", kind, "team or blue-in-game")
      ->check(CLI::IsMember({"team", "blue-in-game"}));
  design
      ->add_option("--parallel", parallel,
                   "Concurrent evaluations (default: all cores)")
      ->check(CLI::PositiveNumber);
  design->add_option("--out", out_path, "Report path (default stdout)");

  ts_benchmark_config bench;
  ts_benchmark_config_init(&bench);
  std::string report_path;
  auto* benchmark =
      app.add_subcommand("benchmark", "Greedy vs exhaustive trials");
  benchmark->add_option("--n", bench.n, "State dimension")
      ->capture_default_str();
  benchmark->add_option("--N", bench.agents, "Agents")->capture_default_str();
  benchmark->add_option("--m", bench.decisions, "Decisions per agent")
      ->capture_default_str();
  benchmark->add_option("--p", bench.measurements, "Measurements per agent")
      ->capture_default_str();
  benchmark
      ->add_option("--q", bench.candidates_per_agent, "Candidates per agent")
      ->capture_default_str();
  benchmark->add_option("--k", bench.k, "Links to add")->capture_default_str();
  benchmark->add_option("--trials", bench.trials, "Number of trials")
      ->capture_default_str();
  benchmark->add_option("--seed", bench.seed, "Base seed")
      ->envname("TEAMSTRUCT_SEED");
  benchmark
      ->add_option("--parallel", parallel,
                   "Concurrent evaluations (default: all cores)")
      ->check(CLI::PositiveNumber);
  benchmark->add_option("--out", out_path, "CSV path (default: no CSV)");
  benchmark->add_option("--report", report_path,
                        "Report path (default stdout)");

  std::string format = "json";
  auto* counterexample =
      app.add_subcommand("counterexample", "Emit the non-supermodular fixture");
  counterexample->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  counterexample->add_option("--out", out_path, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  int exit_code = kExitOk;
  ts_report* report = nullptr;

  if (*solve_team || *solve_game) {
    ProblemPtr problem = LoadProblem(file, &exit_code);
    if (!problem) return exit_code;
    const ts_status status = *solve_team
                                 ? ts_solve_team(problem.get(), &report)
                                 : ts_solve_game(problem.get(), &report);
    return Finish(status, report, out_path);
  }

  if (*design) {
    ProblemPtr problem = LoadProblem(file, &exit_code);
    if (!problem) return exit_code;
    ts_design_options options;
    ts_design_options_init(&options);
    options.k = k;
    options.parallel = parallel;
    if (method == "greedy") options.method = TS_METHOD_GREEDY;
    if (method == "exhaustive") options.method = TS_METHOD_EXHAUSTIVE;
    if (method == "both") options.method = TS_METHOD_BOTH;
    if (kind == "team") options.kind = TS_DESIGN_TEAM;
    if (kind == "blue-in-game") options.kind = TS_DESIGN_BLUE_IN_GAME;
    const ts_status status = ts_design(problem.get(), &options, &report);
    return Finish(status, report, out_path);
  }

  if (*benchmark) {
    bench.parallel = parallel;
    const ts_status status = ts_benchmark(&bench, &report);
    ReportPtr owned(report);
    if (status != TS_OK) {
      std::cerr << "error: " << ts_last_error() << "\n";
      if (owned) WriteText(report_path, ts_report_json(owned.get()));
      return ExitCodeFor(status);
    }
    if (!out_path.empty() && !WriteText(out_path, ts_report_csv(owned.get()))) {
      return kExitInput;
    }
    return WriteText(report_path, ts_report_json(owned.get())) ? kExitOk
                                                               : kExitInput;
  }

  const ts_status status = ts_counterexample(&report);
  return Finish(status, report, out_path, format == "csv");
}

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

#include "report.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "game_solver.hpp"
#include "team_solver.hpp"

namespace teamstruct {
namespace {

using nlohmann::json;

json Versions() {
  return {{"teamstruct", kVersion},
          {"report_format", kReportFormat},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)}};
}

json Blocks(const std::vector<Matrix>& blocks) {
  json out = json::array();
  for (const auto& b : blocks) out.push_back(MatrixToJson(b));
  return out;
}

json StrategyJson(const TeamStrategy& s, const char* mean_key,
                  const char* estimate_key) {
  return {{mean_key, Blocks(s.A)}, {estimate_key, Blocks(s.B)}};
}

json DesignResultJson(const DesignResult& r) {
  return {{"selected", r.selected},
          {"values", r.values},
          {"final_value", r.final_value},
          {"evaluations", r.evaluations}};
}

json SupermodularityJson(const SupermodularityReport& r) {
  json out = {{"violated", r.violated},
              {"margin", r.margin},
              {"four_set_margin", r.four_set_margin},
              {"checked", r.checked},
              {"witness_a", r.witness_a},
              {"witness_b", r.witness_b}};
  out["witness_element"] =
      r.witness_element ? json(*r.witness_element) : json(nullptr);
  return out;
}

Report NewReport(const std::string& command, const std::string& input_digest) {
  Report report;
  report.body["command"] = command;
  report.body["input_digest"] = input_digest;
  report.body["versions"] = Versions();
  return report;
}

std::string SubsetLabel(const std::vector<CandidateId>& ids) {
  if (ids.empty()) return "J(empty)";
  std::string label = "J({";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    label += (i ? ";" : "") + std::to_string(ids[i]);
  }
  return label + "})";
}

}  // namespace

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 15]);
  }
  return out;
}

std::string ContentDigest(const json& doc) {
  return "sha256:" + Sha256Hex(doc.dump());
}

std::string FormatNumber(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

json Report::Document() const {
  json doc = body;
  doc["report_digest"] = ContentDigest(body);
  doc["volatile"] = volatile_section;
  return doc;
}

std::string Report::Json() const { return Document().dump(2) + "\n"; }

const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid-input";
    case ErrorCode::kNoUniqueSolution:
      return "no-unique-solution";
    case ErrorCode::kTooLarge:
      return "too-large";
  }
  return "unknown";
}

Report ErrorReport(const std::string& command, const std::string& input_digest,
                   const Error& error) {
  Report report = NewReport(command, input_digest);
  report.body["error"] = {{"code", ErrorCodeName(error.code())},
                          {"message", error.what()}};
  json diagnostics = json::object();
  if (error.condition_estimate()) {
    const double cond = *error.condition_estimate();
    // JSON has no infinity; exactly singular systems report "inf".
    diagnostics["condition_estimate"] =
        std::isfinite(cond) ? json(cond) : json("inf");
  }
  report.body["diagnostics"] = diagnostics;
  return report;
}

Report SolveTeamReport(const ProblemFile& file,
                       const std::string& input_digest) {
  Report report = NewReport("solve-team", input_digest);
  const TeamProblem problem = file.Team();
  TeamDiagnostics diag;
  const TeamStrategy strategy = SolveTeam(problem, &diag);
  report.body["results"] = {{"strategy", StrategyJson(strategy, "A", "B")},
                            {"value", TeamValue(problem, strategy)}};
  report.body["diagnostics"] = {
      {"mean_residual", diag.mean_residual},
      {"estimate_residual", diag.estimate_residual},
      {"condition_estimate", diag.condition_estimate}};
  return report;
}

Report SolveGameReport(const ProblemFile& file,
                       const std::string& input_digest) {
  Report report = NewReport("solve-game", input_digest);
  const GameProblem problem = file.Game();
  GameDiagnostics diag;
  const GameStrategy strategy = SolveGame(problem, &diag);
  const GameValues values = EvaluateGame(problem, strategy);
  json results = {{"strategy",
                   {{"blue", StrategyJson(strategy.blue, "A", "B")},
                    {"red", StrategyJson(strategy.red, "C", "D")}}},
                  {"values", {{"J1", values.blue}, {"J2", values.red}}}};
  if (file.game->zero_sum) {
    const GameValues full = ZeroSumValues(problem, strategy);
    results["zero_sum_values"] = {{"J1", full.blue}, {"J2", full.red}};
  }
  report.body["results"] = std::move(results);
  report.body["diagnostics"] = {
      {"mean_residual", diag.mean_residual},
      {"estimate_residual", diag.estimate_residual},
      {"condition_estimate", diag.condition_estimate},
      {"nash_fixed_point_residual", NashFixedPointResidual(problem, strategy)}};
  return report;
}

Report DesignReport(const ProblemFile& file, const DesignRequest& request,
                    const std::string& input_digest) {
  Report report = NewReport("design", input_digest);
  const DesignProblem problem = file.Design(request.kind);
  const DesignOptions options{request.parallelism};
  report.body["arguments"] = {{"k", request.k},
                              {"method", DesignMethodName(request.method)},
                              {"kind", DesignKindName(request.kind)}};
  report.volatile_section["parallel"] = request.parallelism;

  json results;
  results["baseline_value"] = EvaluateModification(problem, {});
  std::optional<DesignResult> greedy;
  std::optional<DesignResult> exhaustive;
  if (request.method != DesignMethod::kExhaustive) {
    greedy = GreedyDesign(problem, request.k, options);
    results["greedy"] = DesignResultJson(*greedy);
    report.volatile_section["greedy_seconds"] = greedy->wall_time;
  }
  if (request.method != DesignMethod::kGreedy) {
    exhaustive = ExhaustiveDesign(problem, request.k, options);
    results["exhaustive"] = DesignResultJson(*exhaustive);
    report.volatile_section["exhaustive_seconds"] = exhaustive->wall_time;
  }
  if (greedy && exhaustive) {
    const double diff =
        std::max(0.0, greedy->final_value - exhaustive->final_value);
    const double scale = std::abs(exhaustive->final_value);
    results["gap"] = scale > 1e-12 ? diff / scale : diff;
    results["gap_is_absolute"] = !(scale > 1e-12);
  }
  report.body["results"] = std::move(results);
  return report;
}

Report BenchmarkReport(const BenchmarkConfig& config,
                       const DesignOptions& options) {
  Report report = NewReport("benchmark", "");
  report.body["arguments"] = {{"n", config.n},
                              {"N", config.agents},
                              {"m", config.decisions},
                              {"p", config.measurements},
                              {"q", config.candidates_per_agent},
                              {"k", config.k},
                              {"trials", config.trials},
                              {"seed", config.seed}};
  const ExperimentStats stats = RunBenchmark(config, options);

  json trials = json::array();
  json times = json::array();
  std::ostringstream csv;
  csv << "trial,J_greedy,J_opt,gap,t_greedy,t_exh\n";
  double sum_greedy = 0.0;
  double sum_opt = 0.0;
  for (const auto& rec : stats.records) {
    json row = {{"trial", rec.trial}, {"failed", rec.failed}};
    if (rec.failed) {
      row["error"] = rec.error;
      csv << rec.trial << ",,,,,\n";
    } else {
      row["J_greedy"] = rec.greedy_value;
      row["J_opt"] = rec.optimal_value;
      row["gap"] = rec.gap;
      row["absolute_gap"] = rec.absolute_gap;
      row["greedy_selected"] = rec.greedy_selected;
      row["optimal_selected"] = rec.optimal_selected;
      times.push_back({{"trial", rec.trial},
                       {"t_greedy", rec.greedy_seconds},
                       {"t_exh", rec.exhaustive_seconds}});
      sum_greedy += rec.greedy_value;
      sum_opt += rec.optimal_value;
      csv << rec.trial << ',' << FormatNumber(rec.greedy_value) << ','
          << FormatNumber(rec.optimal_value) << ',' << FormatNumber(rec.gap)
          << ',' << FormatNumber(rec.greedy_seconds) << ','
          << FormatNumber(rec.exhaustive_seconds) << '\n';
    }
    trials.push_back(std::move(row));
  }
  const int ok = stats.trials - stats.failed;
  // Summary row: mean values, worst gap and total times.
  csv << "summary," << FormatNumber(ok ? sum_greedy / ok : 0.0) << ','
      << FormatNumber(ok ? sum_opt / ok : 0.0) << ','
      << FormatNumber(stats.worst_gap) << ',' << FormatNumber(stats.time_greedy)
      << ',' << FormatNumber(stats.time_exhaustive) << '\n';
  report.csv = csv.str();

  report.body["results"] = {{"trials", stats.trials},
                            {"failed", stats.failed},
                            {"fraction_optimal", stats.fraction_optimal},
                            {"worst_gap", stats.worst_gap},
                            {"mean_gap", stats.mean_gap},
                            {"per_trial", std::move(trials)}};
  report.volatile_section = {{"time_greedy", stats.time_greedy},
                             {"time_exhaustive", stats.time_exhaustive},
                             {"speedup", stats.speedup},
                             {"parallel", options.parallelism},
                             {"per_trial", std::move(times)}};
  return report;
}

ProblemFile CounterexampleFile() {
  auto [team, candidates] = CounterexampleInstance();
  ProblemFile file;
  file.prior = team.prior;
  file.agents = team.structure;
  file.objective = team.objective;
  file.candidates = candidates;
  file.design.kind = DesignKind::kTeam;
  file.design.k = 2;
  file.design.method = DesignMethod::kBoth;
  return file;
}

Report CounterexampleReport() {
  const ProblemFile file = CounterexampleFile();
  const json problem_json = ProblemFileToJson(file);
  Report report = NewReport("counterexample", ContentDigest(problem_json));
  const DesignProblem problem = file.Design(DesignKind::kTeam);

  std::ostringstream csv;
  csv << "quantity,value\n";
  json subsets = json::array();
  const std::vector<std::vector<CandidateId>> order = {{}, {0}, {1}, {0, 1}};
  for (const auto& ids : order) {
    Modification mod;
    mod.selected.insert(ids.begin(), ids.end());
    const double value = EvaluateModification(problem, mod);
    subsets.push_back({{"subset", ids}, {"value", value}});
    csv << SubsetLabel(ids) << ',' << FormatNumber(value) << '\n';
  }
  const SupermodularityReport sm = CheckSupermodularity(problem);
  csv << "supermodularity_margin," << FormatNumber(sm.margin) << '\n'
      << "four_set_margin," << FormatNumber(sm.four_set_margin) << '\n'
      << "violated," << (sm.violated ? 1 : 0) << '\n';
  report.csv = csv.str();
  report.body["results"] = {{"problem", problem_json},
                            {"subset_values", std::move(subsets)},
                            {"supermodularity", SupermodularityJson(sm)}};
  return report;
}

}  // namespace teamstruct

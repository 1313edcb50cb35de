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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Runs at full size (200 benchmark trials, 10^6 Monte Carlo
// samples), so it takes a while.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "design.hpp"
#include "experiments.hpp"
#include "game_solver.hpp"
#include "parallel.hpp"
#include "team_solver.hpp"
#include "test_util.hpp"

namespace teamstruct::testing {
namespace {

using nlohmann::json;

// Collects failures for one criterion; the first few are echoed.
class Check {
 public:
  void Expect(bool ok, const std::string& what) {
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++count_;
  }
  bool ok() const { return count_ == 0; }
  std::string Summary() const {
    std::ostringstream s;
    s << count_ << " failure(s)";
    for (const auto& f : failures_) s << "; " << f;
    return s.str();
  }

 private:
  std::vector<std::string> failures_;
  int count_ = 0;
};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Returns the detail line; sets *ok.
using Criterion = std::function<std::string(bool* ok)>;

std::string CounterexampleExactness(bool* ok) {
  const auto start = Clock::now();
  auto [team, cands] = CounterexampleInstance();
  const DesignProblem problem{team, cands};
  const double expected[] = {-2.0, -2.5, -2.5, -4.0};
  Check check;
  for (unsigned mask = 0; mask < 4; ++mask) {
    const double v = SubsetValue(problem, mask);
    check.Expect(std::abs(v - expected[mask]) <= 1e-9,
                 "J(mask " + std::to_string(mask) + ") = " + Num(v));
  }
  const SupermodularityReport sm = CheckSupermodularity(problem);
  check.Expect(sm.violated && std::abs(sm.margin - 1.0) <= 1e-9,
               "margin " + Num(sm.margin));
  const double seconds = Since(start);
  check.Expect(seconds < 1.0, "runtime " + Num(seconds) + " s");
  *ok = check.ok();
  return *ok ? "values (-2, -2.5, -2.5, -4), margin " + Num(sm.margin) + ", " +
                   Num(seconds) + " s"
             : check.Summary();
}

std::string BenchmarkReplication(bool* ok) {
  BenchmarkConfig config;  // n=10, N=4, m=3, p=2, q=2, k=4, 200 trials
  const ExperimentStats stats = RunBenchmark(config, DesignOptions{1});
  Check check;
  check.Expect(stats.failed == 0, std::to_string(stats.failed) + " failed");
  check.Expect(stats.fraction_optimal >= 0.6,
               "fraction_optimal " + Num(stats.fraction_optimal));
  check.Expect(stats.worst_gap <= 0.5, "worst_gap " + Num(stats.worst_gap));
  check.Expect(stats.speedup >= 10.0, "speedup " + Num(stats.speedup));
  for (const auto& rec : stats.records) {
    check.Expect(rec.optimal_value <= rec.greedy_value + 1e-9,
                 "dominance trial " + std::to_string(rec.trial));
  }
  *ok = check.ok();
  const std::string detail =
      "trials " + std::to_string(stats.trials) + ", fraction_optimal " +
      Num(stats.fraction_optimal) + ", worst_gap " + Num(stats.worst_gap) +
      ", speedup " + Num(stats.speedup) + "x";
  return *ok ? detail : detail + "; " + check.Summary();
}

std::string Stationarity(bool* ok) {
  Rng rng(101);
  Check check;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rng.Uniform(2, 8);
    const int agents = rng.Uniform(1, 4);
    const TeamProblem team = RandomTeam(rng, n, agents);
    const TeamStrategy s = SolveTeam(team);
    const TeamDiagnostics r = TeamStationarityResiduals(team, s);
    worst = std::max({worst, r.mean_residual, r.estimate_residual});
    check.Expect(r.mean_residual <= 1e-8 && r.estimate_residual <= 1e-8,
                 "residual trial " + std::to_string(trial));
    const double best = TeamValue(team, s);
    for (std::size_t i = 0; i < s.B.size(); ++i) {
      for (int k = 0; k < 5; ++k) {
        TeamStrategy t = s;
        Matrix d = rng.Normal(t.B[i].rows(), t.B[i].cols());
        t.B[i] += 1e-3 * d / d.norm();
        check.Expect(
            TeamValue(team, t) >= best,
            "perturbation decreased value, trial " + std::to_string(trial));
      }
    }
  }
  *ok = check.ok();
  return *ok ? "50 instances, worst relative residual " + Num(worst)
             : check.Summary();
}

std::string MonteCarloEquivalence(bool* ok) {
  Check check;
  std::vector<double> z(20);
  std::vector<std::string> errors(20);
  Rng rng(202);
  std::vector<TeamProblem> teams;
  for (int trial = 0; trial < 20; ++trial) {
    teams.push_back(RandomTeam(rng, rng.Uniform(2, 6), rng.Uniform(1, 3)));
  }
  ParallelFor(teams.size(), DefaultParallelism(), [&](std::size_t t) {
    const TeamStrategy s = SolveTeam(teams[t]);
    const MonteCarloEstimate mc = MonteCarloValue(teams[t], s, 1000000, 7 + t);
    z[t] = std::abs(mc.mean - TeamValue(teams[t], s)) / mc.standard_error;
  });
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    worst = std::max(worst, z[t]);
    check.Expect(z[t] <= 3.0, "instance " + std::to_string(t) + " at " +
                                  Num(z[t]) + " standard errors");
  }
  TeamStrategy zero = SolveTeam(teams[0]);
  for (auto& a : zero.A) a.setZero();
  for (auto& b : zero.B) b.setZero();
  check.Expect(TeamValue(teams[0], zero) == 0.0, "zero strategy value");
  check.Expect(MonteCarloValue(teams[0], zero, 1000, 1).mean == 0.0,
               "zero strategy Monte Carlo");
  *ok = check.ok();
  return *ok ? "20 instances x 1e6 samples, worst |z| " + Num(worst) +
                   "; zero strategy exactly 0"
             : check.Summary();
}

std::string NashVerification(bool* ok) {
  Rng rng(303);
  Check check;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const GameProblem g = RandomGame(rng, rng.Uniform(2, 6), rng.Uniform(1, 3),
                                     rng.Uniform(1, 3));
    const double res = NashFixedPointResidual(g, SolveGame(g));
    worst = std::max(worst, res);
    check.Expect(res <= 1e-8, "fixed point trial " + std::to_string(trial));
  }
  for (int trial = 0; trial < 5; ++trial) {
    const GameProblem g = RandomGame(rng, 4, 2, 2, 0.0);
    const GameValues v = NashValues(g);
    const auto& o = g.objective;
    const double blue =
        OptimalTeamValue({g.prior, g.blue, {o.Q1, o.P1, o.blue_dims}});
    const double red =
        OptimalTeamValue({g.prior, g.red, {o.Q2, o.P2, o.red_dims}});
    check.Expect(
        std::abs(v.blue - blue) <= 1e-9 && std::abs(v.red - red) <= 1e-9,
        "decoupled trial " + std::to_string(trial));
  }
  const Matrix one = Matrix::Ones(1, 1);
  GameProblem scalar;
  scalar.prior = {Vector::Zero(1), one};
  scalar.blue.channels = {{one, Matrix::Zero(1, 1)}};
  scalar.red.channels = {{one, Matrix::Zero(1, 1)}};
  scalar.objective = ZeroSumGame(one, one, one, one, {1}, {1});
  const GameStrategy s = SolveGame(scalar);
  const GameValues full = ZeroSumValues(scalar, s);
  check.Expect(std::abs(s.blue.B[0](0, 0) + 0.5) <= 1e-9 &&
                   std::abs(s.red.B[0](0, 0) + 0.5) <= 1e-9,
               "scalar coefficients");
  check.Expect(
      std::abs(full.blue + 0.25) <= 1e-9 && std::abs(full.red - 0.25) <= 1e-9,
      "scalar values " + Num(full.blue) + ", " + Num(full.red));
  *ok = check.ok();
  return *ok ? "20 games, worst fixed-point residual " + Num(worst) +
                   "; decoupled games match team optima; scalar (-1/2, -1/2), "
                   "(-1/4, 1/4)"
             : check.Summary();
}

std::string Monotonicity(bool* ok) {
  Rng rng(404);
  Check check;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.Uniform(2, 6);
    const int agents = rng.Uniform(1, 3);
    const int count = rng.Uniform(3, 6);
    const DesignProblem p{RandomTeam(rng, n, agents),
                          RandomCandidates(rng, n, agents, count)};
    std::vector<CandidateId> order = p.candidates.Ids();
    std::shuffle(order.begin(), order.end(), rng.engine());
    // Chain: empty, first cut, second cut, everything.
    const int c1 = rng.Uniform(1, count - 2);
    const int c2 = rng.Uniform(c1 + 1, count - 1);
    Modification mod;
    double previous = EvaluateModification(p, mod);
    for (int cut : {c1, c2, count}) {
      mod.selected = {order.begin(), order.begin() + cut};
      const double v = EvaluateModification(p, mod);
      check.Expect(v <= previous + 1e-9, "trial " + std::to_string(trial));
      previous = v;
    }
  }
  *ok = check.ok();
  return *ok ? "20 instances, nested chains non-increasing" : check.Summary();
}

std::string DominanceDeterminism(bool* ok) {
  Rng rng(505);
  Check check;
  int instances = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const bool game = trial % 2 == 1;
    DesignProblem p;
    if (game) {
      p = {RandomGame(rng, 5, 3, 2), RandomCandidates(rng, 5, 3, 7)};
    } else {
      p = {RandomTeam(rng, 6, 3), RandomCandidates(rng, 6, 3, 8)};
    }
    for (int k = 1; k <= 3; ++k) {
      const DesignResult g1 = GreedyDesign(p, k, DesignOptions{1});
      const DesignResult gn = GreedyDesign(p, k, DesignOptions{4});
      const DesignResult e = ExhaustiveDesign(p, k, DesignOptions{4});
      ++instances;
      check.Expect(e.final_value <= g1.final_value + 1e-9,
                   "dominance trial " + std::to_string(trial));
      check.Expect(g1.selected == gn.selected && g1.values == gn.values,
                   "parallel mismatch trial " + std::to_string(trial));
    }
  }
  // Through the front end as well.
  const auto a = RunCli({"design", DataPath("decoupled_game.json"), "--method",
                         "greedy", "--parallel", "1"});
  const auto b = RunCli({"design", DataPath("decoupled_game.json"), "--method",
                         "greedy", "--parallel", "8"});
  check.Expect(a.exit_code == 0 && b.exit_code == 0, "cli exit code");
  if (a.exit_code == 0 && b.exit_code == 0) {
    check.Expect(json::parse(a.out)["results"] == json::parse(b.out)["results"],
                 "cli greedy output differs across --parallel");
  }
  *ok = check.ok();
  return *ok ? std::to_string(instances) +
                   " team/game designs; greedy identical for parallel 1 and N"
             : check.Summary();
}

std::string CliRoundTrip(bool* ok) {
  Check check;
  const auto r = RunCli({"design", DataPath("counterexample.json"), "--k", "2",
                         "--method", "both"});
  check.Expect(r.exit_code == 0, "design exit " + std::to_string(r.exit_code));
  if (r.exit_code == 0) {
    const json res = json::parse(r.out)["results"];
    check.Expect(std::abs(res["baseline_value"].get<double>() + 2.0) <= 1e-9,
                 "baseline");
    check.Expect(
        std::abs(res["greedy"]["values"][0].get<double>() + 2.5) <= 1e-9,
        "greedy first step");
    check.Expect(
        std::abs(res["greedy"]["final_value"].get<double>() + 4.0) <= 1e-9,
        "greedy final");
    check.Expect(
        std::abs(res["exhaustive"]["final_value"].get<double>() + 4.0) <= 1e-9,
        "exhaustive final");
    check.Expect(res["gap"].get<double>() == 0.0, "gap");
  }
  const auto ce = RunCli({"counterexample", "--format", "csv"});
  check.Expect(
      ce.exit_code == 0 && ce.out.find("J({0;1}),-4\n") != std::string::npos &&
          ce.out.find("supermodularity_margin,1\n") != std::string::npos,
      "counterexample csv");
  const auto bad = RunCli({"solve-team", DataPath("bad_dims.json")});
  check.Expect(bad.exit_code == 2 && bad.out.empty(),
               "schema violation exit " + std::to_string(bad.exit_code));
  const auto bad_k = RunCli({"benchmark", "--k", "9"});
  check.Expect(bad_k.exit_code == 2 && bad_k.out.empty(), "benchmark --k 9");
  *ok = check.ok();
  return *ok ? "design --k 2 --method both gives -2, -2.5, -4, gap 0; "
               "schema violations exit 2 with empty stdout"
             : check.Summary();
}

}  // namespace
}  // namespace teamstruct::testing

int main() {
  using teamstruct::testing::Criterion;
  const std::vector<std::pair<const char*, Criterion>> criteria = {
      {"counterexample-exactness",
       teamstruct::testing::CounterexampleExactness},
      {"benchmark-replication", teamstruct::testing::BenchmarkReplication},
      {"stationarity", teamstruct::testing::Stationarity},
      {"oracle-equivalence", teamstruct::testing::MonteCarloEquivalence},
      {"nash-verification", teamstruct::testing::NashVerification},
      {"monotonicity", teamstruct::testing::Monotonicity},
      {"dominance-determinism", teamstruct::testing::DominanceDeterminism},
      {"cli-round-trip", teamstruct::testing::CliRoundTrip},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    bool ok = false;
    std::string detail;
    try {
      detail = run(&ok);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    failed += ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

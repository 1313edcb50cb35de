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

#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "error.hpp"

namespace teamstruct {
namespace {

constexpr int kMaxRedraws = 10;

Matrix GaussianMatrix(std::mt19937_64& rng, Eigen::Index rows,
                      Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  // Row-major draw order keeps instances stable if storage order changes.
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = normal(rng);
  }
  return m;
}

double SymmetricCondition(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues()(0);
  const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

}  // namespace

std::pair<TeamProblem, CandidateSet> CounterexampleInstance() {
  TeamProblem problem;
  problem.prior.mean = Vector::Zero(2);
  problem.prior.covariance = Matrix::Identity(2, 2);
  problem.objective.Q.resize(2, 2);
  problem.objective.Q << 1, 1, 1, 1;
  problem.objective.P.resize(2, 2);
  problem.objective.P << 1, -0.5, -0.5, 1;
  problem.objective.dims = {1, 1};
  Channel channel;
  channel.H.resize(1, 2);
  channel.H << 1, 0;
  channel.R = Matrix::Zero(1, 1);
  problem.structure.channels = {channel, channel};

  CandidateSet candidates;
  for (int agent = 0; agent < 2; ++agent) {
    CandidateLink link;
    link.id = agent;
    link.agent = agent;
    link.h.resize(2);
    link.h << 0, 1;
    link.r = 0.0;
    candidates.links.push_back(link);
  }
  return {problem, candidates};
}

void ValidateBenchmarkConfig(const BenchmarkConfig& config) {
  if (config.n <= 0) ThrowInvalid("n: must be positive");
  if (config.agents <= 0) ThrowInvalid("N: must be positive");
  if (config.decisions <= 0) ThrowInvalid("m: must be positive");
  if (config.measurements <= 0) ThrowInvalid("p: must be positive");
  if (config.candidates_per_agent <= 0) ThrowInvalid("q: must be positive");
  if (config.k <= 0) ThrowInvalid("k: must be positive");
  if (config.trials <= 0) ThrowInvalid("trials: must be positive");
  const int ground = config.agents * config.candidates_per_agent;
  if (config.k > ground) {
    ThrowInvalid("k: " + std::to_string(config.k) + " exceeds the " +
                 std::to_string(ground) + " available candidates");
  }
}

std::pair<TeamProblem, CandidateSet> RandomInstance(
    const BenchmarkConfig& config, std::uint64_t trial_seed) {
  ValidateBenchmarkConfig(config);
  const int n = config.n;
  const int total = config.agents * config.decisions;
  for (int redraw = 0; redraw <= kMaxRedraws; ++redraw) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(trial_seed),
                      static_cast<std::uint32_t>(trial_seed >> 32),
                      static_cast<std::uint32_t>(redraw)};
    std::mt19937_64 rng(seq);

    TeamProblem problem;
    const Matrix p_root = GaussianMatrix(rng, total, total);
    const Matrix x_root = GaussianMatrix(rng, n, n);
    problem.objective.P = p_root.transpose() * p_root;
    problem.prior.covariance = x_root.transpose() * x_root;
    problem.prior.mean = Vector::Zero(n);
    problem.objective.Q = GaussianMatrix(rng, total, n);
    problem.objective.dims.assign(config.agents, config.decisions);
    for (int i = 0; i < config.agents; ++i) {
      Channel channel;
      channel.H = GaussianMatrix(rng, config.measurements, n);
      const Matrix r_root =
          GaussianMatrix(rng, config.measurements, config.measurements);
      channel.R = r_root.transpose() * r_root;
      problem.structure.channels.push_back(std::move(channel));
    }
    CandidateSet candidates;
    for (int i = 0; i < config.agents; ++i) {
      for (int j = 0; j < config.candidates_per_agent; ++j) {
        CandidateLink link;
        link.id = static_cast<CandidateId>(i) * config.candidates_per_agent + j;
        link.agent = i;
        link.h = GaussianMatrix(rng, n, 1);
        const double g = GaussianMatrix(rng, 1, 1)(0, 0);
        link.r = g * g;
        candidates.links.push_back(std::move(link));
      }
    }
    if (SymmetricCondition(problem.objective.P) <= kMaxConditionEstimate) {
      return {std::move(problem), std::move(candidates)};
    }
  }
  throw Error(ErrorCode::kNoUniqueSolution,
              "random instance: P stayed numerically singular after " +
                  std::to_string(kMaxRedraws) + " redraws");
}

ExperimentStats RunBenchmark(const BenchmarkConfig& config,
                             const DesignOptions& options) {
  ValidateBenchmarkConfig(config);
  const double subsets = BinomialCount(
      static_cast<std::size_t>(config.agents) * config.candidates_per_agent,
      config.k);
  if (subsets > kMaxExhaustiveSubsets) {
    throw Error(ErrorCode::kTooLarge,
                "benchmark: exhaustive search would enumerate too many "
                "subsets; reduce k or the candidate count");
  }

  ExperimentStats stats;
  stats.records.resize(config.trials);
  for (int t = 0; t < config.trials; ++t) {
    TrialRecord& rec = stats.records[t];
    rec.trial = t;
    try {
      auto [team, candidates] =
          RandomInstance(config, static_cast<std::uint64_t>(t));
      DesignProblem problem{std::move(team), std::move(candidates)};
      const DesignResult greedy = GreedyDesign(problem, config.k, options);
      const DesignResult exhaustive =
          ExhaustiveDesign(problem, config.k, options);
      rec.greedy_value = greedy.final_value;
      rec.optimal_value = exhaustive.final_value;
      rec.greedy_seconds = greedy.wall_time;
      rec.exhaustive_seconds = exhaustive.wall_time;
      rec.greedy_selected = greedy.selected;
      rec.optimal_selected = exhaustive.selected;
      const double diff = std::max(0.0, rec.greedy_value - rec.optimal_value);
      if (std::abs(rec.optimal_value) > 1e-12) {
        rec.gap = diff / std::abs(rec.optimal_value);
      } else {
        rec.gap = diff;
        rec.absolute_gap = true;
      }
    } catch (const Error& e) {
      rec.failed = true;
      rec.error = e.what();
    }
  }

  // Reduce in trial order.
  stats.trials = config.trials;
  int ok = 0;
  int optimal = 0;
  double gap_sum = 0.0;
  for (const auto& rec : stats.records) {
    if (rec.failed) {
      ++stats.failed;
      continue;
    }
    ++ok;
    if (rec.gap <= kOptimalGapTolerance) ++optimal;
    gap_sum += rec.gap;
    stats.worst_gap = std::max(stats.worst_gap, rec.gap);
    stats.time_greedy += rec.greedy_seconds;
    stats.time_exhaustive += rec.exhaustive_seconds;
  }
  if (ok > 0) {
    stats.fraction_optimal = static_cast<double>(optimal) / ok;
    stats.mean_gap = gap_sum / ok;
  }
  if (stats.time_greedy > 0.0) {
    stats.speedup = stats.time_exhaustive / stats.time_greedy;
  }
  return stats;
}

}  // namespace teamstruct

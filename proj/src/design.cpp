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

#include "design.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "coupled_system.hpp"
#include "error.hpp"
#include "parallel.hpp"

namespace teamstruct {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string FormatIds(const std::vector<CandidateId>& ids) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << (i ? "," : "") << ids[i];
  }
  out << "}";
  return out.str();
}

[[noreturn]] void RethrowWithModification(const Error& e,
                                          std::vector<CandidateId> ids) {
  std::sort(ids.begin(), ids.end());
  throw Error(e.code(), "modification " + FormatIds(ids) + ": " + e.what(),
              e.condition_estimate());
}

const GaussianPrior& PriorOf(const DesignProblem& problem) {
  return std::visit(
      [](const auto& p) -> const GaussianPrior& { return p.prior; },
      problem.base);
}

const InformationStructure& DesignableOf(const DesignProblem& problem) {
  if (const auto* team = std::get_if<TeamProblem>(&problem.base)) {
    return team->structure;
  }
  return std::get<GameProblem>(problem.base).blue;
}

Channel AppendLink(const Channel& channel, const CandidateLink& link) {
  const Eigen::Index p = channel.H.rows();
  Channel out;
  out.H.resize(p + 1, channel.H.cols());
  out.H.topRows(p) = channel.H;
  out.H.row(p) = link.h.transpose();
  out.R = Matrix::Zero(p + 1, p + 1);
  out.R.topLeftCorner(p, p) = channel.R;
  out.R(p, p) = link.r;
  return out;
}

// Either base problem written as the stacked stationarity system, with the
// designable team first. Used by the incremental greedy path.
struct JointForm {
  GaussianPrior prior;
  InformationStructure fixed;  // red channels; empty for team problems
  Matrix coupling;
  Matrix rhs;
  std::vector<int> dims;
  std::vector<int> designable_dims;
  std::vector<int> fixed_dims;
  Matrix Q1;
  Matrix P1;
  Matrix R1;  // fixed x designable; empty for team problems
  Matrix mean_coeffs;
};

JointForm MakeJointForm(const DesignProblem& problem) {
  JointForm form;
  if (const auto* team = std::get_if<TeamProblem>(&problem.base)) {
    form.prior = team->prior;
    form.coupling = team->objective.P;
    form.rhs = -team->objective.Q;
    form.dims = team->objective.dims;
    form.designable_dims = team->objective.dims;
    form.Q1 = team->objective.Q;
    form.P1 = team->objective.P;
  } else {
    const auto& game = std::get<GameProblem>(problem.base);
    const auto& obj = game.objective;
    const int blue_total = TotalDim(obj.blue_dims);
    const int red_total = TotalDim(obj.red_dims);
    const int total = blue_total + red_total;
    form.prior = game.prior;
    form.fixed = game.red;
    form.coupling.resize(total, total);
    form.coupling << obj.P1, obj.R1.transpose(), obj.R2, obj.P2;
    form.rhs.resize(total, game.prior.dim());
    form.rhs << -obj.Q1, -obj.Q2;
    form.dims = obj.blue_dims;
    form.dims.insert(form.dims.end(), obj.red_dims.begin(), obj.red_dims.end());
    form.designable_dims = obj.blue_dims;
    form.fixed_dims = obj.red_dims;
    form.Q1 = obj.Q1;
    form.P1 = obj.P1;
    form.R1 = obj.R1;
  }
  form.mean_coeffs =
      SolveChecked(form.coupling, form.rhs, "mean coefficients").solution;
  return form;
}

// Designable team's expected cost for stacked joint coefficients.
double JointValue(const JointForm& form, const InformationStructure& designable,
                  const std::vector<EstimationGain>& gains,
                  const Matrix& estimate_coeffs) {
  const int own = TotalDim(form.designable_dims);
  const std::size_t own_agents = form.designable_dims.size();
  const std::vector<EstimationGain> own_gains(gains.begin(),
                                              gains.begin() + own_agents);
  double value = internal::QuadraticValue(
      form.prior, form.Q1, form.P1, form.designable_dims, designable, own_gains,
      form.mean_coeffs.topRows(own), estimate_coeffs.topRows(own));
  if (!form.fixed_dims.empty()) {
    const int other = TotalDim(form.fixed_dims);
    const std::vector<EstimationGain> other_gains(gains.begin() + own_agents,
                                                  gains.end());
    const Vector& xbar = form.prior.mean;
    const Vector u_mean = form.mean_coeffs.topRows(own) * xbar;
    const Vector v_mean = form.mean_coeffs.bottomRows(other) * xbar;
    const Matrix own_filtered = internal::FilteredGains(
        estimate_coeffs.topRows(own), form.designable_dims, own_gains);
    const Matrix other_filtered = internal::FilteredGains(
        estimate_coeffs.bottomRows(other), form.fixed_dims, other_gains);
    value += v_mean.dot(form.R1 * u_mean) +
             (form.R1 * own_filtered * form.prior.covariance *
              other_filtered.transpose())
                 .trace();
  }
  return value;
}

std::vector<Matrix> GainMatrices(const std::vector<EstimationGain>& gains) {
  std::vector<Matrix> out;
  out.reserve(gains.size());
  for (const auto& g : gains) out.push_back(g.M);
  return out;
}

std::uint64_t ExactBinomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
  }
  return result;
}

// Lexicographic combination of `k` positions out of `n` with the given rank.
std::vector<std::size_t> UnrankCombination(std::size_t n, std::size_t k,
                                           std::uint64_t rank) {
  std::vector<std::size_t> combo;
  combo.reserve(k);
  std::size_t next = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t c = next;; ++c) {
      const std::uint64_t count = ExactBinomial(n - c - 1, k - i - 1);
      if (rank < count) {
        combo.push_back(c);
        next = c + 1;
        break;
      }
      rank -= count;
    }
  }
  return combo;
}

bool NextCombination(std::vector<std::size_t>& combo, std::size_t n) {
  const std::size_t k = combo.size();
  for (std::size_t i = k; i-- > 0;) {
    if (combo[i] < n - k + i) {
      ++combo[i];
      for (std::size_t j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
      return true;
    }
  }
  return false;
}

void CheckCardinality(const DesignProblem& problem, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > problem.candidates.size()) {
    ThrowInvalid("k: must be between 0 and the number of candidates (" +
                 std::to_string(problem.candidates.size()) + "), got " +
                 std::to_string(k));
  }
}

}  // namespace

double BinomialCount(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double result = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(result);
}

void ValidateDesignProblem(const DesignProblem& problem) {
  std::visit(
      [](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, TeamProblem>) {
          ValidateTeamProblem(p);
        } else {
          ValidateGameProblem(p);
        }
      },
      problem.base);
  ValidateCandidates(problem.candidates, PriorOf(problem).dim(),
                     DesignableOf(problem).size());
}

double EvaluateModification(const DesignProblem& problem,
                            const Modification& mod) {
  ValidateModification(problem.candidates, mod);
  try {
    if (const auto* team = std::get_if<TeamProblem>(&problem.base)) {
      TeamProblem modified = *team;
      modified.structure =
          ApplyModification(team->structure, problem.candidates, mod);
      return OptimalTeamValue(modified);
    }
    GameProblem modified = std::get<GameProblem>(problem.base);
    modified.blue = ApplyModification(modified.blue, problem.candidates, mod);
    return NashValues(modified).blue;
  } catch (const Error& e) {
    RethrowWithModification(
        e, std::vector<CandidateId>(mod.selected.begin(), mod.selected.end()));
  }
}

DesignResult GreedyDesign(const DesignProblem& problem, int k,
                          const DesignOptions& options) {
  const auto start = Clock::now();
  ValidateDesignProblem(problem);
  CheckCardinality(problem, k);
  DesignResult result;
  if (k == 0) {
    result.final_value = EvaluateModification(problem, {});
    result.wall_time = Seconds(start);
    return result;
  }

  const auto& links = problem.candidates.links;
  std::vector<CandidateId> selected;
  JointForm form;
  std::optional<EstimateSystemSolver> solver;
  try {
    form = MakeJointForm(problem);
  } catch (const Error& e) {
    RethrowWithModification(e, {});
  }
  InformationStructure current = DesignableOf(problem);
  std::vector<EstimationGain> gains = ChannelGains(form.prior, current);
  for (auto& g : ChannelGains(form.prior, form.fixed)) gains.push_back(g);
  try {
    solver.emplace(form.coupling, form.dims, GainMatrices(gains), form.rhs);
  } catch (const Error& e) {
    RethrowWithModification(e, {});
  }

  struct Candidate {
    Channel channel;
    EstimationGain gain;
    double value = 0.0;
  };
  std::vector<bool> used(links.size(), false);
  for (int step = 0; step < k; ++step) {
    std::vector<std::size_t> remaining;
    for (std::size_t c = 0; c < links.size(); ++c) {
      if (!used[c]) remaining.push_back(c);
    }
    std::vector<Candidate> evaluated(remaining.size());
    ParallelFor(remaining.size(), options.parallelism, [&](std::size_t j) {
      const CandidateLink& link = links[remaining[j]];
      const auto agent = static_cast<std::size_t>(link.agent);
      Candidate& cand = evaluated[j];
      cand.channel = AppendLink(current.channels[agent], link);
      cand.gain = PosteriorGain(form.prior, cand.channel);
      std::vector<EstimationGain> trial_gains = gains;
      trial_gains[agent] = cand.gain;
      std::optional<Matrix> coeffs = solver->SolveWithGain(agent, cand.gain.M);
      if (!coeffs) {
        try {
          coeffs = SolveEstimateSystem(form.coupling, form.dims,
                                       GainMatrices(trial_gains), form.rhs,
                                       "estimate coefficients")
                       .solution;
        } catch (const Error& e) {
          auto ids = selected;
          ids.push_back(link.id);
          RethrowWithModification(e, ids);
        }
      }
      InformationStructure trial = current;
      trial.channels[agent] = cand.channel;
      cand.value = JointValue(form, trial, trial_gains, *coeffs);
    });
    result.evaluations += static_cast<std::int64_t>(remaining.size());

    double best = std::numeric_limits<double>::infinity();
    for (const auto& cand : evaluated) best = std::min(best, cand.value);
    std::size_t pick = remaining.size();
    for (std::size_t j = 0; j < remaining.size(); ++j) {
      if (evaluated[j].value > best + kTieTolerance) continue;
      if (pick == remaining.size() ||
          links[remaining[j]].id < links[remaining[pick]].id) {
        pick = j;
      }
    }
    const CandidateLink& chosen = links[remaining[pick]];
    const auto agent = static_cast<std::size_t>(chosen.agent);
    used[remaining[pick]] = true;
    selected.push_back(chosen.id);
    result.values.push_back(evaluated[pick].value);
    current.channels[agent] = evaluated[pick].channel;
    gains[agent] = evaluated[pick].gain;
    if (step + 1 < k) {
      try {
        solver->CommitGain(agent, gains[agent].M);
      } catch (const Error& e) {
        RethrowWithModification(e, selected);
      }
    }
  }
  result.selected = selected;
  result.final_value = result.values.back();
  result.wall_time = Seconds(start);
  return result;
}

DesignResult ExhaustiveDesign(const DesignProblem& problem, int k,
                              const DesignOptions& options) {
  const auto start = Clock::now();
  ValidateDesignProblem(problem);
  CheckCardinality(problem, k);
  const std::size_t n = problem.candidates.size();
  const double count = BinomialCount(n, k);
  if (count > kMaxExhaustiveSubsets) {
    std::ostringstream msg;
    msg << "exhaustive search over " << count
        << " subsets exceeds the limit of " << kMaxExhaustiveSubsets
        << "; use the greedy method instead";
    throw Error(ErrorCode::kTooLarge, msg.str());
  }
  const auto total = static_cast<std::uint64_t>(count);

  // Positions sorted by id so that rank order is lexicographic in ids.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  const auto& links = problem.candidates.links;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return links[a].id < links[b].id;
  });
  auto to_modification = [&](const std::vector<std::size_t>& combo) {
    Modification mod;
    for (std::size_t pos : combo) mod.selected.insert(links[order[pos]].id);
    return mod;
  };

  constexpr std::uint64_t kChunk = 64;
  const std::uint64_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<double> values(total);
  ParallelFor(chunks, options.parallelism, [&](std::size_t chunk) {
    const std::uint64_t first = chunk * kChunk;
    const std::uint64_t last = std::min(total, first + kChunk);
    auto combo = UnrankCombination(n, k, first);
    for (std::uint64_t rank = first; rank < last; ++rank) {
      values[rank] = EvaluateModification(problem, to_modification(combo));
      NextCombination(combo, n);
    }
  });

  const double best = *std::min_element(values.begin(), values.end());
  std::uint64_t pick = 0;
  while (values[pick] > best + kTieTolerance) ++pick;

  DesignResult result;
  for (std::size_t pos : UnrankCombination(n, k, pick)) {
    result.selected.push_back(links[order[pos]].id);
  }
  result.final_value = values[pick];
  result.values = {result.final_value};
  result.evaluations = static_cast<std::int64_t>(total);
  result.wall_time = Seconds(start);
  return result;
}

SupermodularityReport CheckSupermodularity(const DesignProblem& problem,
                                           std::size_t max_ground_size,
                                           const DesignOptions& options) {
  ValidateDesignProblem(problem);
  const std::size_t n = problem.candidates.size();
  if (n > max_ground_size || n >= 63) {
    throw Error(ErrorCode::kTooLarge, "supermodularity check: ground set of " +
                                          std::to_string(n) +
                                          " candidates exceeds the limit of " +
                                          std::to_string(max_ground_size));
  }
  const auto& links = problem.candidates.links;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  auto to_ids = [&](std::uint64_t mask) {
    std::vector<CandidateId> ids;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) ids.push_back(links[i].id);
    }
    return ids;
  };
  std::vector<double> f(subsets);
  ParallelFor(subsets, options.parallelism, [&](std::size_t mask) {
    Modification mod;
    for (CandidateId id : to_ids(mask)) mod.selected.insert(id);
    f[mask] = EvaluateModification(problem, mod);
  });

  SupermodularityReport report;
  report.margin = 0.0;
  bool have_witness = false;
  std::uint64_t best_a = 0;
  std::uint64_t best_b = 0;
  std::size_t best_s = 0;
  for (std::uint64_t b = 0; b < subsets; ++b) {
    for (std::size_t s = 0; s < n; ++s) {
      if (b >> s & 1) continue;
      const std::uint64_t bit = std::uint64_t{1} << s;
      // Proper subsets A of B; A == B makes the inequality an identity.
      for (std::uint64_t a = b;; a = (a - 1) & b) {
        if (a != b) {
          const double margin = f[a | bit] - f[a] - f[b | bit] + f[b];
          ++report.checked;
          if (!have_witness || margin > report.margin) {
            have_witness = true;
            report.margin = margin;
            best_a = a;
            best_b = b;
            best_s = s;
          }
        }
        if (a == 0) break;
      }
    }
  }
  if (have_witness) {
    report.witness_a = to_ids(best_a);
    report.witness_b = to_ids(best_b);
    report.witness_element = links[best_s].id;
    const std::uint64_t a_prime = best_a | (std::uint64_t{1} << best_s);
    report.four_set_margin =
        f[a_prime] + f[best_b] - f[a_prime | best_b] - f[a_prime & best_b];
  }
  report.violated = report.margin > kTieTolerance;
  return report;
}

}  // namespace teamstruct

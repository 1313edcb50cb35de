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

#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <limits>

#include "error.hpp"
#include "experiments.hpp"
#include "oracle_fixtures.hpp"
#include "test_util.hpp"

namespace teamstruct {
namespace {

using testing::Rng;
using testing::SubsetValue;
using testing::ToMatrix;
using testing::ToVector;

DesignProblem Counterexample() {
  auto [team, cands] = CounterexampleInstance();
  return DesignProblem{team, cands};
}

DesignProblem OracleDesign() {
  TeamProblem team;
  team.prior = {Vector::Zero(3), ToMatrix(oracle::kDesignCov)};
  team.structure.channels = {{ToMatrix(oracle::kDesignH0),
                              Matrix::Constant(1, 1, oracle::kDesignR[0])},
                             {ToMatrix(oracle::kDesignH1),
                              Matrix::Constant(1, 1, oracle::kDesignR[1])}};
  team.objective = {
      ToMatrix(oracle::kDesignQ), ToMatrix(oracle::kDesignP), {1, 1}};
  CandidateSet c;
  c.links = {{0, oracle::kDesignCandAgent0, ToVector(oracle::kDesignCandH0),
              oracle::kDesignCandR0},
             {1, oracle::kDesignCandAgent1, ToVector(oracle::kDesignCandH1),
              oracle::kDesignCandR1},
             {2, oracle::kDesignCandAgent2, ToVector(oracle::kDesignCandH2),
              oracle::kDesignCandR2}};
  return DesignProblem{team, c};
}

DesignProblem RandomTeamDesign(Rng& rng, int n, int agents, int candidates) {
  TeamProblem team = testing::RandomTeam(rng, n, agents);
  return DesignProblem{team,
                       testing::RandomCandidates(rng, n, agents, candidates)};
}

DesignProblem RandomGameDesign(Rng& rng, int n, int candidates) {
  GameProblem game = testing::RandomGame(rng, n, 2, 2);
  return DesignProblem{game, testing::RandomCandidates(rng, n, 2, candidates)};
}

// Largest violation of f(A+s) - f(A) <= f(B+s) - f(B) over A ⊆ B, s ∉ B,
// from a table of subset values.
double BruteForceMargin(const std::vector<double>& f, int ground) {
  double worst = -std::numeric_limits<double>::infinity();
  const unsigned full = (1U << ground) - 1;
  for (unsigned b = 0; b <= full; ++b) {
    for (unsigned a = b;; a = (a - 1) & b) {
      for (int s = 0; s < ground; ++s) {
        if (b >> s & 1U) continue;
        const unsigned bit = 1U << s;
        worst = std::max(worst, f[a | bit] - f[a] - f[b | bit] + f[b]);
      }
      if (a == 0) break;
    }
  }
  return worst;
}

TEST(EvaluateModificationTest, CounterexampleValues) {
  const DesignProblem p = Counterexample();
  EXPECT_NEAR(SubsetValue(p, 0), -2.0, 1e-12);
  EXPECT_NEAR(SubsetValue(p, 1), -2.5, 1e-12);
  EXPECT_NEAR(SubsetValue(p, 2), -2.5, 1e-12);
  EXPECT_NEAR(SubsetValue(p, 3), -4.0, 1e-12);
}

TEST(EvaluateModificationTest, MatchesOracleTable) {
  const DesignProblem p = OracleDesign();
  for (unsigned mask = 0; mask < 8; ++mask) {
    EXPECT_NEAR(SubsetValue(p, mask), oracle::kDesignSubsetValues[mask], 1e-10)
        << "mask " << mask;
  }
}

TEST(EvaluateModificationTest, PureAndRepeatable) {
  Rng rng(31);
  const DesignProblem p = RandomTeamDesign(rng, 5, 3, 5);
  EXPECT_EQ(SubsetValue(p, 0b10110), SubsetValue(p, 0b10110));
}

TEST(EvaluateModificationTest, DecoupledGameMatchesTeam) {
  Rng rng(32);
  GameProblem game = testing::RandomGame(rng, 4, 2, 2, 0.0);
  const CandidateSet cands = testing::RandomCandidates(rng, 4, 2, 3);
  const auto& o = game.objective;
  const TeamProblem team{game.prior, game.blue, {o.Q1, o.P1, o.blue_dims}};
  const DesignProblem as_game{game, cands};
  const DesignProblem as_team{team, cands};
  for (unsigned mask = 0; mask < 8; ++mask) {
    EXPECT_NEAR(SubsetValue(as_game, mask), SubsetValue(as_team, mask), 1e-9);
  }
}

TEST(EvaluateModificationTest, UnknownIdIsInvalid) {
  Modification mod;
  mod.selected = {5};
  EXPECT_THROW(EvaluateModification(Counterexample(), mod), Error);
}

TEST(GreedyDesignTest, CounterexampleFullSet) {
  const DesignResult r = GreedyDesign(Counterexample(), 2);
  EXPECT_EQ(r.selected, (std::vector<CandidateId>{0, 1}));
  ASSERT_EQ(r.values.size(), 2u);
  EXPECT_NEAR(r.values[0], -2.5, 1e-12);
  EXPECT_NEAR(r.final_value, -4.0, 1e-12);
  EXPECT_EQ(r.evaluations, 3);
}

TEST(GreedyDesignTest, TieBreaksBySmallestId) {
  const DesignResult r = GreedyDesign(Counterexample(), 1);
  EXPECT_EQ(r.selected, (std::vector<CandidateId>{0}));
  EXPECT_NEAR(r.final_value, -2.5, 1e-12);

  // Reversing the id labels flips the pick to the other link.
  DesignProblem swapped = Counterexample();
  swapped.candidates.links[0].id = 9;
  swapped.candidates.links[1].id = 4;
  EXPECT_EQ(GreedyDesign(swapped, 1).selected, (std::vector<CandidateId>{4}));
}

TEST(GreedyDesignTest, ZeroBudgetReturnsBaseline) {
  const DesignResult r = GreedyDesign(Counterexample(), 0);
  EXPECT_TRUE(r.selected.empty());
  EXPECT_TRUE(r.values.empty());
  EXPECT_NEAR(r.final_value, -2.0, 1e-12);
  EXPECT_EQ(r.evaluations, 0);
}

TEST(GreedyDesignTest, BudgetAboveGroundSetIsInvalid) {
  try {
    GreedyDesign(Counterexample(), 3);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidInput);
  }
}

TEST(GreedyDesignTest, ValuesMatchOracleAndCountCalls) {
  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const DesignProblem p = trial % 2 == 0 ? RandomTeamDesign(rng, 5, 3, 6)
                                           : RandomGameDesign(rng, 4, 6);
    const int k = 4;
    const DesignResult r = GreedyDesign(p, k);
    ASSERT_EQ(r.selected.size(), static_cast<std::size_t>(k));
    EXPECT_EQ(r.evaluations, 6 + 5 + 4 + 3);
    Modification prefix;
    for (int t = 0; t < k; ++t) {
      prefix.selected.insert(r.selected[t]);
      const double exact = EvaluateModification(p, prefix);
      EXPECT_LE(testing::RelativeDiff(r.values[t], exact), 1e-12)
          << "trial " << trial << " step " << t;
    }
    EXPECT_EQ(r.final_value, r.values.back());
    if (p.kind() == DesignKind::kTeam) {
      for (int t = 1; t < k; ++t)
        EXPECT_LE(r.values[t], r.values[t - 1] + 1e-9);
    }
  }
}

TEST(GreedyDesignTest, SelectsTheOneStepMinimizer) {
  // Each greedy step must pick the best single addition given the prefix,
  // checked against the full oracle.
  Rng rng(34);
  const DesignProblem p = RandomTeamDesign(rng, 4, 2, 5);
  const DesignResult r = GreedyDesign(p, 3);
  Modification prefix;
  for (CandidateId chosen : r.selected) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& link : p.candidates.links) {
      if (prefix.selected.count(link.id)) continue;
      Modification m = prefix;
      m.selected.insert(link.id);
      best = std::min(best, EvaluateModification(p, m));
    }
    prefix.selected.insert(chosen);
    EXPECT_LE(EvaluateModification(p, prefix), best + 1e-9);
  }
}

TEST(GreedyDesignTest, ParallelIsDeterministic) {
  Rng rng(35);
  for (int trial = 0; trial < 4; ++trial) {
    const DesignProblem p = trial % 2 == 0 ? RandomTeamDesign(rng, 6, 4, 8)
                                           : RandomGameDesign(rng, 4, 6);
    const DesignResult serial = GreedyDesign(p, 3, DesignOptions{1});
    const DesignResult parallel = GreedyDesign(p, 3, DesignOptions{4});
    EXPECT_EQ(serial.selected, parallel.selected);
    EXPECT_EQ(serial.values, parallel.values);
    EXPECT_EQ(serial.final_value, parallel.final_value);
  }
}

TEST(GreedyDesignTest, DuplicateCandidatesAreAllowed) {
  DesignProblem p = Counterexample();
  CandidateLink dup = p.candidates.links[0];
  dup.id = 7;
  p.candidates.links.push_back(dup);
  const DesignResult r = GreedyDesign(p, 3);
  EXPECT_EQ(r.selected.size(), 3u);
  EXPECT_NEAR(r.final_value, -4.0, 1e-12);
}

TEST(ExhaustiveDesignTest, CounterexampleSingleLink) {
  const DesignResult r = ExhaustiveDesign(Counterexample(), 1);
  EXPECT_EQ(r.selected, (std::vector<CandidateId>{0}));
  EXPECT_NEAR(r.final_value, -2.5, 1e-12);
  EXPECT_EQ(r.evaluations, 2);
}

TEST(ExhaustiveDesignTest, FullBudgetSelectsEverything) {
  const DesignResult r = ExhaustiveDesign(Counterexample(), 2);
  EXPECT_EQ(r.selected, (std::vector<CandidateId>{0, 1}));
  EXPECT_NEAR(r.final_value, -4.0, 1e-12);
  EXPECT_EQ(r.evaluations, 1);
}

TEST(ExhaustiveDesignTest, MatchesOracleTable) {
  const DesignProblem p = OracleDesign();
  for (int k = 0; k <= 3; ++k) {
    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < 8; ++mask) {
      if (std::popcount(mask) == k) {
        best = std::min(best, oracle::kDesignSubsetValues[mask]);
      }
    }
    EXPECT_NEAR(ExhaustiveDesign(p, k).final_value, best, 1e-10) << k;
  }
}

TEST(ExhaustiveDesignTest, DominatesGreedyAndCounts) {
  Rng rng(36);
  for (int trial = 0; trial < 6; ++trial) {
    const DesignProblem p = trial % 2 == 0 ? RandomTeamDesign(rng, 5, 3, 7)
                                           : RandomGameDesign(rng, 4, 6);
    const int n = static_cast<int>(p.candidates.size());
    for (int k = 0; k <= 3; ++k) {
      const DesignResult g = GreedyDesign(p, k);
      const DesignResult e = ExhaustiveDesign(p, k);
      EXPECT_LE(e.final_value, g.final_value + 1e-9);
      EXPECT_EQ(e.evaluations, static_cast<std::int64_t>(BinomialCount(n, k)));
      EXPECT_TRUE(std::is_sorted(e.selected.begin(), e.selected.end()));
    }
  }
}

TEST(ExhaustiveDesignTest, ParallelIsDeterministic) {
  Rng rng(37);
  const DesignProblem p = RandomTeamDesign(rng, 5, 3, 8);
  const DesignResult a = ExhaustiveDesign(p, 3, DesignOptions{1});
  const DesignResult b = ExhaustiveDesign(p, 3, DesignOptions{3});
  EXPECT_EQ(a.selected, b.selected);
  EXPECT_EQ(a.final_value, b.final_value);
}

TEST(ExhaustiveDesignTest, TiesPickLexicographicallySmallest) {
  // Four identical uninformative links: every subset has the same value.
  DesignProblem p = Counterexample();
  p.candidates.links.clear();
  for (CandidateId id : {8, 3, 5, 1}) {
    p.candidates.links.push_back({id, 0, Vector::Zero(2), 1.0});
  }
  EXPECT_EQ(ExhaustiveDesign(p, 2).selected, (std::vector<CandidateId>{1, 3}));
  EXPECT_EQ(GreedyDesign(p, 2).selected, (std::vector<CandidateId>{1, 3}));
}

TEST(ExhaustiveDesignTest, GuardRejectsHugeSearch) {
  DesignProblem p = Counterexample();
  p.candidates.links.clear();
  for (CandidateId id = 0; id < 60; ++id) {
    p.candidates.links.push_back({id, 0, Vector::Zero(2), 1.0});
  }
  try {
    ExhaustiveDesign(p, 30);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooLarge);
  }
}

TEST(SupermodularityTest, CounterexampleViolates) {
  const SupermodularityReport r = CheckSupermodularity(Counterexample());
  EXPECT_TRUE(r.violated);
  EXPECT_NEAR(r.margin, 1.0, 1e-9);
  EXPECT_NEAR(r.four_set_margin, 1.0, 1e-9);
  EXPECT_GT(r.checked, 0);
}

TEST(SupermodularityTest, SingleCandidateIsVacuous) {
  DesignProblem p = Counterexample();
  p.candidates.links.pop_back();
  const SupermodularityReport r = CheckSupermodularity(p);
  EXPECT_FALSE(r.violated);
  EXPECT_EQ(r.checked, 0);
}

TEST(SupermodularityTest, AgreesWithBruteForceOnOracleTable) {
  const DesignProblem p = OracleDesign();
  const SupermodularityReport r = CheckSupermodularity(p);
  const double margin = BruteForceMargin(oracle::kDesignSubsetValues, 3);
  EXPECT_EQ(r.violated, margin > 1e-9);
  if (r.violated) EXPECT_NEAR(r.margin, margin, 1e-9);
}

TEST(SupermodularityTest, AgreesWithBruteForceOnRandomInstances) {
  Rng rng(38);
  for (int trial = 0; trial < 10; ++trial) {
    const DesignProblem p = RandomTeamDesign(rng, 3, 2, 3);
    std::vector<double> f(8);
    for (unsigned mask = 0; mask < 8; ++mask) f[mask] = SubsetValue(p, mask);
    const double margin = BruteForceMargin(f, 3);
    const SupermodularityReport r = CheckSupermodularity(p);
    EXPECT_EQ(r.violated, margin > 1e-9) << trial;
    if (r.violated) {
      EXPECT_NEAR(r.margin, margin, 1e-9);
      ASSERT_TRUE(r.witness_element.has_value());
    }
  }
}

TEST(SupermodularityTest, GroundSetLimit) {
  DesignProblem p = Counterexample();
  EXPECT_THROW(CheckSupermodularity(p, 1), Error);
}

}  // namespace
}  // namespace teamstruct

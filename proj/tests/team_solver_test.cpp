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

#include "team_solver.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "error.hpp"
#include "experiments.hpp"
#include "oracle_fixtures.hpp"
#include "test_util.hpp"

namespace teamstruct {
namespace {

using testing::Rng;
using testing::ToMatrix;
using testing::ToVector;

TeamProblem OracleTeam() {
  TeamProblem p;
  p.prior = {ToVector(oracle::kTeamMean), ToMatrix(oracle::kTeamCov)};
  p.structure.channels = {
      {ToMatrix(oracle::kTeamH0), ToMatrix(oracle::kTeamR0)},
      {ToMatrix(oracle::kTeamH1), ToMatrix(oracle::kTeamR1)}};
  p.objective = {ToMatrix(oracle::kTeamQ), ToMatrix(oracle::kTeamP), {1, 2}};
  return p;
}

TEST(SolveTeamTest, CounterexampleBaseline) {
  const TeamProblem team = CounterexampleInstance().first;
  const TeamStrategy s = SolveTeam(team);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(s.A[i](0, 0), -2.0, 1e-12);
    EXPECT_NEAR(s.A[i](0, 1), -2.0, 1e-12);
    EXPECT_NEAR(s.B[i](0, 0), -2.0, 1e-12);
    EXPECT_NEAR(s.B[i](0, 1), -1.0, 1e-12);
  }
  EXPECT_NEAR(TeamValue(team, s), -2.0, 1e-12);
}

TEST(SolveTeamTest, MatchesMeasurementSpaceOracle) {
  const TeamProblem team = OracleTeam();
  const TeamStrategy s = SolveTeam(team);
  EXPECT_NEAR(TeamValue(team, s), oracle::kTeamValue, 1e-10);
  // The oracle's rule is u_i = c_i + L_i y_i; ours is
  // A_i xbar + B_i K_i (y_i - H_i xbar).
  const auto gains = ChannelGains(team.prior, team.structure);
  const std::vector<Matrix> measurement = {
      ToMatrix(oracle::kTeamMeasurementGain0),
      ToMatrix(oracle::kTeamMeasurementGain1)};
  const std::vector<Vector> offset = {ToVector(oracle::kTeamOffset0),
                                      ToVector(oracle::kTeamOffset1)};
  const Vector& xbar = team.prior.mean;
  for (int i = 0; i < 2; ++i) {
    const Matrix l = s.B[i] * gains[i].K;
    const Vector c = s.A[i] * xbar - l * team.structure.channels[i].H * xbar;
    EXPECT_LE((l - measurement[i]).cwiseAbs().maxCoeff(), 1e-8) << i;
    EXPECT_LE((c - offset[i]).cwiseAbs().maxCoeff(), 1e-8) << i;
  }
}

TEST(SolveTeamTest, BlockDiagonalCostDecouples) {
  Rng rng(11);
  TeamProblem team = testing::RandomTeam(rng, 4, 3);
  const auto off = BlockOffsets(team.objective.dims);
  Matrix p = Matrix::Zero(team.objective.P.rows(), team.objective.P.cols());
  for (std::size_t i = 0; i < 3; ++i) {
    const int m = team.objective.dims[i];
    p.block(off[i], off[i], m, m) = rng.Spd(m);
  }
  team.objective.P = p;
  const TeamStrategy s = SolveTeam(team);
  for (std::size_t i = 0; i < 3; ++i) {
    const int m = team.objective.dims[i];
    const Matrix expected = -p.block(off[i], off[i], m, m).inverse() *
                            team.objective.Q.middleRows(off[i], m);
    EXPECT_LE((s.B[i] - expected).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((s.A[i] - expected).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SolveTeamTest, FullInformationClosedForm) {
  TeamProblem team;
  const Matrix cov = OracleTeam().prior.covariance;
  team.prior = {Vector::Zero(3), cov};
  team.structure.channels = {{Matrix::Identity(3, 3), Matrix::Zero(3, 3)}};
  team.objective = {
      ToMatrix(oracle::kFullInfoQ), ToMatrix(oracle::kFullInfoP), {2}};
  EXPECT_NEAR(OptimalTeamValue(team), oracle::kFullInfoValue, 1e-10);
}

TEST(SolveTeamTest, StationarityResiduals) {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const TeamProblem team = testing::RandomTeam(rng, 4, 2);
    TeamDiagnostics diag;
    const TeamStrategy s = SolveTeam(team, &diag);
    EXPECT_LE(diag.mean_residual, 1e-8);
    EXPECT_LE(diag.estimate_residual, 1e-8);
    const TeamDiagnostics check = TeamStationarityResiduals(team, s);
    EXPECT_LE(check.estimate_residual, 1e-8);
  }
}

TEST(SolveTeamTest, PerturbationNeverImproves) {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const TeamProblem team = testing::RandomTeam(rng, 4, 3);
    const TeamStrategy s = SolveTeam(team);
    const double best = TeamValue(team, s);
    for (std::size_t i = 0; i < s.B.size(); ++i) {
      TeamStrategy t = s;
      Matrix d = rng.Normal(t.B[i].rows(), t.B[i].cols());
      t.B[i] += 1e-3 * d / d.norm();
      EXPECT_GE(TeamValue(team, t), best - 1e-12);
    }
  }
}

TEST(SolveTeamTest, Homogeneity) {
  Rng rng(14);
  TeamProblem team = testing::RandomTeam(rng, 4, 2, /*zero_mean=*/true);
  const TeamStrategy s = SolveTeam(team);
  const double v = TeamValue(team, s);
  const double alpha = 2.5;
  team.objective.Q *= alpha;
  const TeamStrategy scaled = SolveTeam(team);
  EXPECT_NEAR(TeamValue(team, scaled), alpha * alpha * v,
              1e-10 * std::abs(alpha * alpha * v));
  for (std::size_t i = 0; i < s.B.size(); ++i) {
    EXPECT_LE((scaled.B[i] - alpha * s.B[i]).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((scaled.A[i] - alpha * s.A[i]).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SolveTeamTest, PermutationEquivariance) {
  Rng rng(15);
  const TeamProblem team = testing::RandomTeam(rng, 4, 3);
  const std::vector<std::size_t> perm = {2, 0, 1};
  TeamProblem permuted = team;
  const auto off = BlockOffsets(team.objective.dims);
  const int total = TotalDim(team.objective.dims);
  std::vector<int> rows;
  for (std::size_t k = 0; k < 3; ++k) {
    const std::size_t i = perm[k];
    permuted.structure.channels[k] = team.structure.channels[i];
    permuted.objective.dims[k] = team.objective.dims[i];
    for (int r = 0; r < team.objective.dims[i]; ++r) {
      rows.push_back(static_cast<int>(off[i]) + r);
    }
  }
  Matrix sel = Matrix::Zero(total, total);
  for (int r = 0; r < total; ++r) sel(r, rows[r]) = 1;
  permuted.objective.Q = sel * team.objective.Q;
  permuted.objective.P = sel * team.objective.P * sel.transpose();
  const TeamStrategy a = SolveTeam(team);
  const TeamStrategy b = SolveTeam(permuted);
  EXPECT_NEAR(TeamValue(team, a), TeamValue(permuted, b), 1e-10);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_LE((a.B[perm[k]] - b.B[k]).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE((a.A[perm[k]] - b.A[k]).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SolveTeamTest, SingularCostReportsCondition) {
  TeamProblem team = CounterexampleInstance().first;
  team.objective.P << 1, 1, 1, 1 + 1e-15;
  try {
    SolveTeam(team);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    // Either the PD check or the conditioning check rejects it.
    EXPECT_TRUE(e.code() == ErrorCode::kInvalidInput ||
                e.code() == ErrorCode::kNoUniqueSolution);
  }
}

TEST(SolveTeamTest, DimensionMismatchIsInvalid) {
  TeamProblem team = CounterexampleInstance().first;
  team.objective.dims = {2};
  EXPECT_THROW(SolveTeam(team), Error);
}

TEST(TeamValueTest, ZeroStrategyIsZero) {
  Rng rng(16);
  const TeamProblem team = testing::RandomTeam(rng, 3, 2);
  TeamStrategy zero = SolveTeam(team);
  for (auto& a : zero.A) a.setZero();
  for (auto& b : zero.B) b.setZero();
  EXPECT_EQ(TeamValue(team, zero), 0.0);
  const MonteCarloEstimate mc = MonteCarloValue(team, zero, 1000, 1);
  EXPECT_EQ(mc.mean, 0.0);
  EXPECT_EQ(mc.standard_error, 0.0);
}

TEST(TeamValueTest, CounterexampleMonteCarlo) {
  const TeamProblem team = CounterexampleInstance().first;
  const TeamStrategy s = SolveTeam(team);
  const MonteCarloEstimate mc = MonteCarloValue(team, s, 200000, 42);
  EXPECT_LE(std::abs(mc.mean + 2.0), 3 * mc.standard_error);
}

TEST(TeamValueTest, MonteCarloIsDeterministic) {
  Rng rng(17);
  const TeamProblem team = testing::RandomTeam(rng, 3, 2);
  const TeamStrategy s = SolveTeam(team);
  const MonteCarloEstimate a = MonteCarloValue(team, s, 5000, 9);
  const MonteCarloEstimate b = MonteCarloValue(team, s, 5000, 9);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.standard_error, b.standard_error);
}

TEST(TeamValueTest, MonteCarloAgreesOnRandomInstances) {
  Rng rng(18);
  for (int trial = 0; trial < 3; ++trial) {
    const TeamProblem team = testing::RandomTeam(rng, 3, 2);
    const TeamStrategy s = SolveTeam(team);
    const MonteCarloEstimate mc = MonteCarloValue(team, s, 100000, trial);
    EXPECT_LE(std::abs(mc.mean - TeamValue(team, s)), 3 * mc.standard_error);
  }
}

TEST(TeamValueTest, NonOptimalStrategyMonteCarlo) {
  Rng rng(19);
  const TeamProblem team = testing::RandomTeam(rng, 3, 2);
  TeamStrategy s = SolveTeam(team);
  for (auto& b : s.B) b += rng.Normal(b.rows(), b.cols());
  const MonteCarloEstimate mc = MonteCarloValue(team, s, 100000, 3);
  EXPECT_LE(std::abs(mc.mean - TeamValue(team, s)), 3 * mc.standard_error);
}

TEST(TeamValueTest, MoreInformationNeverHurts) {
  Rng rng(20);
  for (int trial = 0; trial < 10; ++trial) {
    TeamProblem team = testing::RandomTeam(rng, 4, 2);
    const CandidateSet cands = testing::RandomCandidates(rng, 4, 2, 4);
    double previous = OptimalTeamValue(team);
    const InformationStructure base = team.structure;
    Modification mod;
    for (CandidateId id = 0; id < 4; ++id) {
      mod.selected.insert(id);
      team.structure = ApplyModification(base, cands, mod);
      const double v = OptimalTeamValue(team);
      EXPECT_LE(v, previous + 1e-9);
      previous = v;
    }
  }
}

}  // namespace
}  // namespace teamstruct

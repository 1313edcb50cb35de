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

// Domain types for static LQ team problems: the Gaussian prior, per-agent
// observation channels, candidate information links and objectives, plus
// the Gaussian conditioning gains every agent uses.

#ifndef TEAMSTRUCT_MODEL_HPP_
#define TEAMSTRUCT_MODEL_HPP_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "linalg.hpp"

namespace teamstruct {

// Environment state x ~ N(mean, covariance). The covariance is centred,
// i.e. E[(x - mean)(x - mean)^T].
struct GaussianPrior {
  Vector mean;
  Matrix covariance;

  Eigen::Index dim() const { return mean.size(); }
};

// z = H x + w with w ~ N(0, R), independent of everything else.
struct Channel {
  Matrix H;
  Matrix R;

  Eigen::Index rows() const { return H.rows(); }
};

// One channel per agent of a team.
struct InformationStructure {
  std::vector<Channel> channels;

  std::size_t size() const { return channels.size(); }
};

using CandidateId = std::int64_t;

// A single observation row h^T x + w, w ~ N(0, r), that may be appended to
// the channel of `agent`.
struct CandidateLink {
  CandidateId id = 0;
  int agent = 0;
  Vector h;
  double r = 0.0;
};

struct CandidateSet {
  std::vector<CandidateLink> links;

  std::size_t size() const { return links.size(); }
  const CandidateLink* Find(CandidateId id) const;
  std::vector<CandidateId> Ids() const;
};

struct Modification {
  std::set<CandidateId> selected;
};

// Team cost u^T Q x + 1/2 u^T P u with u partitioned by `dims`.
struct TeamObjective {
  Matrix Q;
  Matrix P;
  std::vector<int> dims;
};

// Affine rule u_i = A_i mean + B_i (xhat_i - mean), per agent.
struct TeamStrategy {
  std::vector<Matrix> A;
  std::vector<Matrix> B;
};

// K = X H^T (H X H^T + R)^+ and M = K H.
struct EstimationGain {
  Matrix K;
  Matrix M;
};

// Starting row of each block and the total, e.g. {2, 3} -> {0, 2, 5}.
std::vector<Eigen::Index> BlockOffsets(const std::vector<int>& dims);
int TotalDim(const std::vector<int>& dims);

void ValidatePrior(const GaussianPrior& prior);
// `h_name` / `r_name` label the two matrices in error messages.
void ValidateChannel(const Channel& channel, Eigen::Index state_dim,
                     const std::string& what, const std::string& h_name = "H",
                     const std::string& r_name = "R");
void ValidateStructure(const InformationStructure& structure,
                       Eigen::Index state_dim, const std::string& what,
                       bool allow_empty = false,
                       const std::string& h_name = "H",
                       const std::string& r_name = "R");
void ValidateCandidates(const CandidateSet& candidates, Eigen::Index state_dim,
                        std::size_t num_agents);
void ValidateModification(const CandidateSet& candidates,
                          const Modification& mod);
// Q is (sum dims) x state_dim and P symmetric positive definite.
// Names are the field paths used in error messages.
void ValidateQuadraticBlocks(const Matrix& Q, const Matrix& P,
                             const std::vector<int>& dims,
                             Eigen::Index state_dim, const std::string& q_name,
                             const std::string& p_name,
                             const std::string& dims_name);

EstimationGain PosteriorGain(const GaussianPrior& prior,
                             const Channel& channel);

// E[x | z] for a single channel observation z.
Vector ConditionalMean(const GaussianPrior& prior, const Channel& channel,
                       const Vector& z);

// Appends every selected link to its agent's channel in candidate-set order,
// extending R block-diagonally.
InformationStructure ApplyModification(const InformationStructure& structure,
                                       const CandidateSet& candidates,
                                       const Modification& mod);

// Candidates minus the links selected in `mod`.
CandidateSet RemoveSelected(const CandidateSet& candidates,
                            const Modification& mod);

}  // namespace teamstruct

#endif  // TEAMSTRUCT_MODEL_HPP_

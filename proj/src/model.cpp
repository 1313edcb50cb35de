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

#include "model.hpp"

#include <numeric>
#include <unordered_set>

#include "error.hpp"

namespace teamstruct {

const CandidateLink* CandidateSet::Find(CandidateId id) const {
  for (const auto& link : links) {
    if (link.id == id) return &link;
  }
  return nullptr;
}

std::vector<CandidateId> CandidateSet::Ids() const {
  std::vector<CandidateId> ids;
  ids.reserve(links.size());
  for (const auto& link : links) ids.push_back(link.id);
  return ids;
}

std::vector<Eigen::Index> BlockOffsets(const std::vector<int>& dims) {
  std::vector<Eigen::Index> offsets(dims.size() + 1, 0);
  for (std::size_t i = 0; i < dims.size(); ++i) {
    offsets[i + 1] = offsets[i] + dims[i];
  }
  return offsets;
}

int TotalDim(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 0);
}

void ValidatePrior(const GaussianPrior& prior) {
  const Eigen::Index n = prior.dim();
  if (n == 0) ThrowInvalid("prior.mean: state dimension must be positive");
  if (prior.covariance.rows() != n || prior.covariance.cols() != n) {
    ThrowInvalid("prior.covariance: expected " + std::to_string(n) + "x" +
                 std::to_string(n));
  }
  RequireSymmetricPsd(prior.covariance, "prior.covariance");
}

void ValidateChannel(const Channel& channel, Eigen::Index state_dim,
                     const std::string& what, const std::string& h_name,
                     const std::string& r_name) {
  if (channel.H.cols() != state_dim) {
    ThrowInvalid(what + "." + h_name + ": expected " +
                 std::to_string(state_dim) + " columns, got " +
                 std::to_string(channel.H.cols()));
  }
  const Eigen::Index p = channel.H.rows();
  if (channel.R.rows() != p || channel.R.cols() != p) {
    ThrowInvalid(what + "." + r_name + ": expected " + std::to_string(p) + "x" +
                 std::to_string(p));
  }
  RequireSymmetricPsd(channel.R, what + "." + r_name);
}

void ValidateStructure(const InformationStructure& structure,
                       Eigen::Index state_dim, const std::string& what,
                       bool allow_empty, const std::string& h_name,
                       const std::string& r_name) {
  if (structure.channels.empty() && !allow_empty) {
    ThrowInvalid(what + ": at least one agent is required");
  }
  for (std::size_t i = 0; i < structure.channels.size(); ++i) {
    ValidateChannel(structure.channels[i], state_dim,
                    what + "[" + std::to_string(i) + "]", h_name, r_name);
  }
}

void ValidateCandidates(const CandidateSet& candidates, Eigen::Index state_dim,
                        std::size_t num_agents) {
  std::unordered_set<CandidateId> seen;
  for (std::size_t c = 0; c < candidates.links.size(); ++c) {
    const auto& link = candidates.links[c];
    const std::string where = "candidates[" + std::to_string(c) + "]";
    if (!seen.insert(link.id).second) {
      ThrowInvalid(where + ".id: duplicate id " + std::to_string(link.id));
    }
    if (link.agent < 0 || static_cast<std::size_t>(link.agent) >= num_agents) {
      ThrowInvalid(where + ".agent: index " + std::to_string(link.agent) +
                   " out of range");
    }
    if (link.h.size() != state_dim) {
      ThrowInvalid(where + ".h: expected length " + std::to_string(state_dim));
    }
    if (!(link.r >= 0.0)) ThrowInvalid(where + ".r: must be nonnegative");
  }
}

void ValidateModification(const CandidateSet& candidates,
                          const Modification& mod) {
  for (CandidateId id : mod.selected) {
    if (candidates.Find(id) == nullptr) {
      ThrowInvalid("modification: unknown candidate id " + std::to_string(id));
    }
  }
}

void ValidateQuadraticBlocks(const Matrix& Q, const Matrix& P,
                             const std::vector<int>& dims,
                             Eigen::Index state_dim, const std::string& q_name,
                             const std::string& p_name,
                             const std::string& dims_name) {
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] <= 0) {
      ThrowInvalid(dims_name + "[" + std::to_string(i) + "]: must be positive");
    }
  }
  const int total = TotalDim(dims);
  if (Q.rows() != total || Q.cols() != state_dim) {
    ThrowInvalid(q_name + ": expected " + std::to_string(total) + "x" +
                 std::to_string(state_dim) + ", got " +
                 std::to_string(Q.rows()) + "x" + std::to_string(Q.cols()));
  }
  if (P.rows() != total || P.cols() != total) {
    ThrowInvalid(p_name + ": expected " + std::to_string(total) + "x" +
                 std::to_string(total));
  }
  RequireSymmetricPd(P, p_name);
}

EstimationGain PosteriorGain(const GaussianPrior& prior,
                             const Channel& channel) {
  const Eigen::Index n = prior.dim();
  if (channel.H.cols() != n || channel.R.rows() != channel.H.rows() ||
      channel.R.cols() != channel.H.rows() || prior.covariance.rows() != n) {
    ThrowInvalid("posterior gain: channel dimensions do not match the prior");
  }
  const Matrix& X = prior.covariance;
  const Matrix cross = X * channel.H.transpose();  // n x p
  const Matrix innovation = channel.H * cross + channel.R;
  EstimationGain gain;
  gain.K = cross * SymmetricPseudoInverse(innovation);
  gain.M = gain.K * channel.H;
  return gain;
}

Vector ConditionalMean(const GaussianPrior& prior, const Channel& channel,
                       const Vector& z) {
  if (z.size() != channel.H.rows()) {
    ThrowInvalid("conditional mean: observation has length " +
                 std::to_string(z.size()) + ", channel has " +
                 std::to_string(channel.H.rows()) + " rows");
  }
  const EstimationGain gain = PosteriorGain(prior, channel);
  return prior.mean + gain.K * (z - channel.H * prior.mean);
}

InformationStructure ApplyModification(const InformationStructure& structure,
                                       const CandidateSet& candidates,
                                       const Modification& mod) {
  ValidateModification(candidates, mod);
  InformationStructure result = structure;
  if (mod.selected.empty()) return result;

  std::vector<std::vector<const CandidateLink*>> added(structure.size());
  for (const auto& link : candidates.links) {
    if (!mod.selected.count(link.id)) continue;
    if (link.agent < 0 ||
        static_cast<std::size_t>(link.agent) >= structure.size()) {
      ThrowInvalid("modification: candidate " + std::to_string(link.id) +
                   " targets unknown agent " + std::to_string(link.agent));
    }
    added[link.agent].push_back(&link);
  }
  for (std::size_t i = 0; i < structure.size(); ++i) {
    if (added[i].empty()) continue;
    const Channel& old = structure.channels[i];
    const Eigen::Index p = old.H.rows();
    const Eigen::Index extra = static_cast<Eigen::Index>(added[i].size());
    const Eigen::Index n = old.H.cols();
    Channel grown;
    grown.H.resize(p + extra, n);
    grown.R = Matrix::Zero(p + extra, p + extra);
    grown.H.topRows(p) = old.H;
    grown.R.topLeftCorner(p, p) = old.R;
    for (Eigen::Index e = 0; e < extra; ++e) {
      const CandidateLink& link = *added[i][e];
      if (link.h.size() != n) {
        ThrowInvalid("modification: candidate " + std::to_string(link.id) +
                     " has the wrong state dimension");
      }
      grown.H.row(p + e) = link.h.transpose();
      grown.R(p + e, p + e) = link.r;
    }
    result.channels[i] = std::move(grown);
  }
  return result;
}

CandidateSet RemoveSelected(const CandidateSet& candidates,
                            const Modification& mod) {
  CandidateSet rest;
  for (const auto& link : candidates.links) {
    if (!mod.selected.count(link.id)) rest.links.push_back(link);
  }
  return rest;
}

}  // namespace teamstruct

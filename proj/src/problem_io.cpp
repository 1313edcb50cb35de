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

#include "problem_io.hpp"

#include <cmath>
#include <initializer_list>
#include <limits>
#include <set>

#include "error.hpp"

namespace teamstruct {
namespace {

using nlohmann::json;

std::string Child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string Index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& RequireObject(const json& j, const std::string& path,
                          std::initializer_list<const char*> allowed) {
  if (!j.is_object()) ThrowInvalid(path + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& item : j.items()) {
    if (!keys.count(item.key())) {
      ThrowInvalid(Child(path, item.key()) + ": unknown field");
    }
  }
  return j;
}

const json& Field(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) ThrowInvalid(Child(path, key) + ": missing field");
  return *it;
}

double ReadNumber(const json& j, const std::string& path) {
  if (!j.is_number()) ThrowInvalid(path + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) ThrowInvalid(path + ": must be finite");
  return v;
}

int ReadInt(const json& j, const std::string& path) {
  if (!j.is_number_integer()) ThrowInvalid(path + ": expected an integer");
  const auto v = j.get<std::int64_t>();
  if (v < std::numeric_limits<int>::min() ||
      v > std::numeric_limits<int>::max()) {
    ThrowInvalid(path + ": integer out of range");
  }
  return static_cast<int>(v);
}

Vector ReadVector(const json& j, const std::string& path) {
  if (!j.is_array()) ThrowInvalid(path + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = ReadNumber(j[i], Index(path, i));
  }
  return v;
}

// An empty array is a 0 x `empty_cols` matrix.
Matrix ReadMatrix(const json& j, const std::string& path,
                  Eigen::Index empty_cols = 0) {
  if (!j.is_array()) ThrowInvalid(path + ": expected an array of rows");
  if (j.empty()) return Matrix(0, empty_cols);
  std::size_t cols = 0;
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array()) {
      ThrowInvalid(Index(path, r) + ": expected an array of numbers");
    }
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) {
      ThrowInvalid(Index(path, r) + ": expected " + std::to_string(cols) +
                   " entries, got " + std::to_string(j[r].size()));
    }
  }
  Matrix m(static_cast<Eigen::Index>(j.size()),
           static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          ReadNumber(j[r][c], Index(Index(path, r), c));
    }
  }
  return m;
}

std::vector<int> ReadDims(const json& j, const std::string& path) {
  if (!j.is_array()) ThrowInvalid(path + ": expected an array of integers");
  std::vector<int> dims;
  for (std::size_t i = 0; i < j.size(); ++i) {
    dims.push_back(ReadInt(j[i], Index(path, i)));
  }
  return dims;
}

InformationStructure ReadChannels(const json& j, const std::string& path,
                                  const char* h_key, const char* r_key,
                                  Eigen::Index n) {
  if (!j.is_array()) ThrowInvalid(path + ": expected an array");
  InformationStructure structure;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = Index(path, i);
    const json& obj = RequireObject(j[i], at, {h_key, r_key});
    Channel channel;
    channel.H = ReadMatrix(Field(obj, at, h_key), Child(at, h_key), n);
    channel.R = ReadMatrix(Field(obj, at, r_key), Child(at, r_key));
    structure.channels.push_back(std::move(channel));
  }
  return structure;
}

json ChannelsToJson(const InformationStructure& structure, const char* h_key,
                    const char* r_key) {
  json out = json::array();
  for (const auto& ch : structure.channels) {
    out.push_back({{h_key, MatrixToJson(ch.H)}, {r_key, MatrixToJson(ch.R)}});
  }
  return out;
}

}  // namespace

const char* DesignKindName(DesignKind kind) {
  return kind == DesignKind::kTeam ? "team" : "blue-in-game";
}

const char* DesignMethodName(DesignMethod method) {
  switch (method) {
    case DesignMethod::kGreedy:
      return "greedy";
    case DesignMethod::kExhaustive:
      return "exhaustive";
    case DesignMethod::kBoth:
      return "both";
  }
  return "greedy";
}

std::optional<DesignKind> ParseDesignKind(std::string_view name) {
  if (name == "team") return DesignKind::kTeam;
  if (name == "blue-in-game") return DesignKind::kBlueInGame;
  return std::nullopt;
}

std::optional<DesignMethod> ParseDesignMethod(std::string_view name) {
  if (name == "greedy") return DesignMethod::kGreedy;
  if (name == "exhaustive") return DesignMethod::kExhaustive;
  if (name == "both") return DesignMethod::kBoth;
  return std::nullopt;
}

json MatrixToJson(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json VectorToJson(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

ProblemFile ParseProblemFile(const json& doc) {
  RequireObject(
      doc, "",
      {"prior", "agents", "objective", "game", "candidates", "design"});
  ProblemFile file;

  const json& prior =
      RequireObject(Field(doc, "", "prior"), "prior", {"mean", "covariance"});
  file.prior.mean = ReadVector(Field(prior, "prior", "mean"), "prior.mean");
  file.prior.covariance =
      ReadMatrix(Field(prior, "prior", "covariance"), "prior.covariance");
  ValidatePrior(file.prior);
  const Eigen::Index n = file.prior.dim();

  file.agents = ReadChannels(Field(doc, "", "agents"), "agents", "H", "R", n);
  ValidateStructure(file.agents, n, "agents");

  if (doc.contains("objective")) {
    const json& obj =
        RequireObject(doc["objective"], "objective", {"Q", "P", "dims"});
    TeamObjective objective;
    objective.Q = ReadMatrix(Field(obj, "objective", "Q"), "objective.Q", n);
    objective.P = ReadMatrix(Field(obj, "objective", "P"), "objective.P");
    objective.dims =
        ReadDims(Field(obj, "objective", "dims"), "objective.dims");
    file.objective = std::move(objective);
  }
  if (doc.contains("game")) {
    const json& g =
        RequireObject(doc["game"], "game",
                      {"Q1", "P1", "R1", "Q2", "P2", "R2", "blue_dims",
                       "red_dims", "red_agents", "zero_sum"});
    GameSection game;
    auto& obj = game.objective;
    obj.blue_dims = ReadDims(Field(g, "game", "blue_dims"), "game.blue_dims");
    obj.red_dims = ReadDims(Field(g, "game", "red_dims"), "game.red_dims");
    const Eigen::Index blue_total = TotalDim(obj.blue_dims);
    obj.Q1 = ReadMatrix(Field(g, "game", "Q1"), "game.Q1", n);
    obj.P1 = ReadMatrix(Field(g, "game", "P1"), "game.P1");
    obj.R1 = ReadMatrix(Field(g, "game", "R1"), "game.R1", blue_total);
    obj.Q2 = ReadMatrix(Field(g, "game", "Q2"), "game.Q2", n);
    obj.P2 = ReadMatrix(Field(g, "game", "P2"), "game.P2");
    obj.R2 = ReadMatrix(Field(g, "game", "R2"), "game.R2", blue_total);
    game.red = ReadChannels(Field(g, "game", "red_agents"), "game.red_agents",
                            "G", "T", n);
    if (g.contains("zero_sum")) {
      if (!g["zero_sum"].is_boolean()) {
        ThrowInvalid("game.zero_sum: expected a boolean");
      }
      game.zero_sum = g["zero_sum"].get<bool>();
    }
    file.game = std::move(game);
  }
  if (!file.objective && !file.game) {
    ThrowInvalid("objective: a team objective or a game section is required");
  }

  if (doc.contains("candidates")) {
    const json& list = doc["candidates"];
    if (!list.is_array()) ThrowInvalid("candidates: expected an array");
    for (std::size_t c = 0; c < list.size(); ++c) {
      const std::string at = Index("candidates", c);
      const json& obj = RequireObject(list[c], at, {"id", "agent", "h", "r"});
      CandidateLink link;
      link.id = obj.contains("id") ? ReadInt(obj["id"], Child(at, "id"))
                                   : static_cast<CandidateId>(c);
      link.agent = ReadInt(Field(obj, at, "agent"), Child(at, "agent"));
      link.h = ReadVector(Field(obj, at, "h"), Child(at, "h"));
      link.r = ReadNumber(Field(obj, at, "r"), Child(at, "r"));
      file.candidates.links.push_back(std::move(link));
    }
    ValidateCandidates(file.candidates, n, file.agents.size());
  }

  if (doc.contains("design")) {
    const json& d =
        RequireObject(doc["design"], "design", {"kind", "k", "method"});
    if (d.contains("kind")) {
      if (!d["kind"].is_string() ||
          !(file.design.kind = ParseDesignKind(d["kind"].get<std::string>()))) {
        ThrowInvalid("design.kind: expected \"team\" or \"blue-in-game\"");
      }
    }
    if (d.contains("k")) file.design.k = ReadInt(d["k"], "design.k");
    if (d.contains("method")) {
      if (!d["method"].is_string() || !(file.design.method = ParseDesignMethod(
                                            d["method"].get<std::string>()))) {
        ThrowInvalid(
            "design.method: expected \"greedy\", \"exhaustive\" or \"both\"");
      }
    }
  }

  // Cross-checks of every section against the prior and agent list.
  if (file.objective) ValidateTeamProblem(file.Team());
  if (file.game) {
    const GameProblem game = file.Game();
    ValidateGameProblem(game);
    if (file.game->zero_sum &&
        (MaxAbs(game.objective.Q2) != 0.0 ||
         MaxAbs(game.objective.R1 + game.objective.R2) != 0.0)) {
      ThrowInvalid("game.zero_sum: requires Q2 = 0 and R2 = -R1");
    }
  }
  return file;
}

ProblemFile ParseProblemText(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    ThrowInvalid(std::string("problem file: malformed JSON: ") + e.what());
  }
  return ParseProblemFile(doc);
}

TeamProblem ProblemFile::Team() const {
  if (!objective) ThrowInvalid("objective: missing field");
  return TeamProblem{prior, agents, *objective};
}

GameProblem ProblemFile::Game() const {
  if (!game) ThrowInvalid("game: missing field");
  return GameProblem{prior, agents, game->red, game->objective};
}

DesignProblem ProblemFile::Design(DesignKind kind) const {
  DesignProblem problem;
  if (kind == DesignKind::kTeam) {
    problem.base = Team();
  } else {
    problem.base = Game();
  }
  problem.candidates = candidates;
  return problem;
}

json ProblemFileToJson(const ProblemFile& file) {
  json doc;
  doc["prior"] = {{"mean", VectorToJson(file.prior.mean)},
                  {"covariance", MatrixToJson(file.prior.covariance)}};
  doc["agents"] = ChannelsToJson(file.agents, "H", "R");
  if (file.objective) {
    doc["objective"] = {{"Q", MatrixToJson(file.objective->Q)},
                        {"P", MatrixToJson(file.objective->P)},
                        {"dims", file.objective->dims}};
  }
  if (file.game) {
    const auto& obj = file.game->objective;
    doc["game"] = {{"Q1", MatrixToJson(obj.Q1)},
                   {"P1", MatrixToJson(obj.P1)},
                   {"R1", MatrixToJson(obj.R1)},
                   {"Q2", MatrixToJson(obj.Q2)},
                   {"P2", MatrixToJson(obj.P2)},
                   {"R2", MatrixToJson(obj.R2)},
                   {"blue_dims", obj.blue_dims},
                   {"red_dims", obj.red_dims},
                   {"red_agents", ChannelsToJson(file.game->red, "G", "T")},
                   {"zero_sum", file.game->zero_sum}};
  }
  json candidates = json::array();
  for (const auto& link : file.candidates.links) {
    candidates.push_back({{"id", link.id},
                          {"agent", link.agent},
                          {"h", VectorToJson(link.h)},
                          {"r", link.r}});
  }
  doc["candidates"] = std::move(candidates);
  json design = json::object();
  if (file.design.kind) design["kind"] = DesignKindName(*file.design.kind);
  if (file.design.k) design["k"] = *file.design.k;
  if (file.design.method) {
    design["method"] = DesignMethodName(*file.design.method);
  }
  if (!design.empty()) doc["design"] = std::move(design);
  return doc;
}

}  // namespace teamstruct

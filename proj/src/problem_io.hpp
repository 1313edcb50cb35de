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

// JSON problem files: strict parsing with field-path error messages, and
// the inverse serialization.
//
// Matrices are row-major nested arrays of finite numbers, vectors are flat
// arrays. Unknown fields are rejected.

#ifndef TEAMSTRUCT_PROBLEM_IO_HPP_
#define TEAMSTRUCT_PROBLEM_IO_HPP_

#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>

#include "design.hpp"
#include "game_solver.hpp"
#include "model.hpp"
#include "team_solver.hpp"

namespace teamstruct {

enum class DesignMethod { kGreedy, kExhaustive, kBoth };

struct GameSection {
  GameObjective objective;
  InformationStructure red;
  // The objective encodes a zero-sum kernel (Q2 = 0, R2 = -R1).
  bool zero_sum = false;
};

struct DesignSection {
  std::optional<DesignKind> kind;
  std::optional<int> k;
  std::optional<DesignMethod> method;
};

struct ProblemFile {
  GaussianPrior prior;
  InformationStructure agents;
  std::optional<TeamObjective> objective;
  std::optional<GameSection> game;
  CandidateSet candidates;
  DesignSection design;

  TeamProblem Team() const;
  GameProblem Game() const;
  DesignProblem Design(DesignKind kind) const;
};

// Throws Error(kInvalidInput) naming the offending field path.
ProblemFile ParseProblemFile(const nlohmann::json& doc);
ProblemFile ParseProblemText(std::string_view text);

nlohmann::json ProblemFileToJson(const ProblemFile& file);

nlohmann::json MatrixToJson(const Matrix& m);
nlohmann::json VectorToJson(const Vector& v);

const char* DesignKindName(DesignKind kind);
const char* DesignMethodName(DesignMethod method);
std::optional<DesignKind> ParseDesignKind(std::string_view name);
std::optional<DesignMethod> ParseDesignMethod(std::string_view name);

}  // namespace teamstruct

#endif  // TEAMSTRUCT_PROBLEM_IO_HPP_

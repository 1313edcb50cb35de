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

// Machine-readable reports for each front-end command.
//
// A report is a JSON document with a deterministic body (command, input
// digest, results, diagnostics, versions, report_digest) and a `volatile`
// section for wall-clock timings and run settings that must not affect the
// content. report_digest hashes the body only.

#ifndef TEAMSTRUCT_REPORT_HPP_
#define TEAMSTRUCT_REPORT_HPP_

#include <json.hpp>
#include <string>
#include <string_view>

#include "design.hpp"
#include "error.hpp"
#include "experiments.hpp"
#include "problem_io.hpp"

namespace teamstruct {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kReportFormat = 1;

struct Report {
  nlohmann::json body = nlohmann::json::object();
  nlohmann::json volatile_section = nlohmann::json::object();
  std::string csv;

  // Full document including report_digest and the volatile section.
  nlohmann::json Document() const;
  std::string Json() const;
};

std::string Sha256Hex(std::string_view data);

// Digest of the canonical (sorted-key, compact) encoding of a document.
std::string ContentDigest(const nlohmann::json& doc);

// %.17g, locale independent.
std::string FormatNumber(double value);

struct DesignRequest {
  DesignKind kind = DesignKind::kTeam;
  int k = 0;
  DesignMethod method = DesignMethod::kGreedy;
  int parallelism = 1;
};

Report SolveTeamReport(const ProblemFile& file,
                       const std::string& input_digest);
Report SolveGameReport(const ProblemFile& file,
                       const std::string& input_digest);
Report DesignReport(const ProblemFile& file, const DesignRequest& request,
                    const std::string& input_digest);
Report BenchmarkReport(const BenchmarkConfig& config,
                       const DesignOptions& options);
Report CounterexampleReport();

// Problem file holding the counterexample fixture with a k = 2 design.
ProblemFile CounterexampleFile();

// Report describing a failed command; includes the condition estimate for
// numerical failures.
Report ErrorReport(const std::string& command, const std::string& input_digest,
                   const Error& error);

const char* ErrorCodeName(ErrorCode code);

}  // namespace teamstruct

#endif  // TEAMSTRUCT_REPORT_HPP_

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

#ifndef TEAMSTRUCT_ERROR_HPP_
#define TEAMSTRUCT_ERROR_HPP_

#include <optional>
#include <stdexcept>
#include <string>

namespace teamstruct {

enum class ErrorCode {
  kInvalidInput,
  kNoUniqueSolution,
  kTooLarge,
};

// Single exception type for the library. Numerical failures carry the
// condition estimate of the system that was rejected.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<double> condition_estimate = std::nullopt)
      : std::runtime_error(message),
        code_(code),
        condition_estimate_(condition_estimate) {}

  ErrorCode code() const { return code_; }
  std::optional<double> condition_estimate() const {
    return condition_estimate_;
  }

 private:
  ErrorCode code_;
  std::optional<double> condition_estimate_;
};

[[noreturn]] inline void ThrowInvalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidInput, message);
}

}  // namespace teamstruct

#endif  // TEAMSTRUCT_ERROR_HPP_

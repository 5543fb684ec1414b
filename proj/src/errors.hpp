// Copyright 2026 The shuffledp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHUFFLEDP_ERRORS_HPP_
#define SHUFFLEDP_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace shuffledp {

// Error taxonomy mirrors the process exit codes: 2 rejected configuration,
// 3 refused enumeration budget, 4 internal invariant violation.
class WorkbenchError : public std::runtime_error {
 public:
  enum class Code { kConfig = 2, kBudget = 3, kInternal = 4 };

  WorkbenchError(Code code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

inline WorkbenchError ConfigError(const std::string& what) {
  return WorkbenchError(WorkbenchError::Code::kConfig, what);
}

inline WorkbenchError BudgetError(const std::string& what) {
  return WorkbenchError(WorkbenchError::Code::kBudget, what);
}

inline WorkbenchError InternalError(const std::string& what) {
  return WorkbenchError(WorkbenchError::Code::kInternal, what);
}

}  // namespace shuffledp

#endif  // SHUFFLEDP_ERRORS_HPP_

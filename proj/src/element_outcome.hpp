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
//
// Harness-side verdict for one element-finding run. Bottom is the
// analyzer's own abstention; Fail means the analyzer answered but the
// harness knows the answer is wrong.

#ifndef SHUFFLEDP_ELEMENT_OUTCOME_HPP_
#define SHUFFLEDP_ELEMENT_OUTCOME_HPP_

#include <string>

#include "value.hpp"

namespace shuffledp {

enum class ElementStatus { kFound = 0, kBottom, kFail };

struct ElementOutcome {
  ElementStatus status = ElementStatus::kBottom;
  Value element;  // set iff status == kFound

  bool Success() const { return status == ElementStatus::kFound; }
};

inline ElementOutcome ClassifyElementOutcome(const Value& answer,
                                             const Value& expected) {
  ElementOutcome out;
  if (answer.is_bottom()) {
    out.status = ElementStatus::kBottom;
  } else if (answer == expected) {
    out.status = ElementStatus::kFound;
    out.element = answer;
  } else {
    out.status = ElementStatus::kFail;
  }
  return out;
}

enum class ElementFailure {
  kNone = 0,
  kNoiseFired,          // some participant randomized its own cells
  kNobodyParticipated,  // a required side contributed only zero vectors
  kAccidentalZero,      // an unrelated coordinate summed to zero
};

// A trial plus the harness's failure classification, re-derived from the
// per-party seeds when the run misses.
struct ElementTrial {
  ElementOutcome outcome;
  ElementFailure failure = ElementFailure::kNone;
};

inline std::string ElementStatusName(ElementStatus status) {
  switch (status) {
    case ElementStatus::kFound:
      return "found";
    case ElementStatus::kBottom:
      return "bottom";
    case ElementStatus::kFail:
      return "fail";
  }
  return "unknown";
}

}  // namespace shuffledp

#endif  // SHUFFLEDP_ELEMENT_OUTCOME_HPP_

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
// One-round common-element protocol. Each party encodes its input as a
// group vector: with probability 3/4 it participates, filling every
// coordinate except its own with uniform noise and, with probability
// 1/(6n), its own coordinate too (otherwise the own coordinate is zero);
// with probability 1/4 it contributes the zero vector. The vectors are
// summed and the analyzer answers with the unique zero coordinate, if any.
//
// The sum can be taken two ways: the share variant splits every coordinate
// into ell one-time-pad shares so the shuffled channel carries no per-party
// structure, while the ideal variant has each party submit its vector
// whole. The two have identical outcome distributions (the analyzer only
// ever sees the sum), so correctness harnesses use the cheap ideal variant;
// privacy audits of the ideal variant compose with the share protocol's
// security margin at report time.

#ifndef SHUFFLEDP_COMMON_PRELUDE_HPP_
#define SHUFFLEDP_COMMON_PRELUDE_HPP_

#include <cstdint>
#include <vector>

#include "element_outcome.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "value.hpp"

namespace shuffledp {

struct CommonPreludeParams {
  int n = 0;
  uint64_t domain_size = 0;  // inputs live in [0, domain_size)
  uint64_t q = 0;            // group modulus
  int sigma = 40;            // share variant: statistical slack
  // The success guarantee needs q >= 16 * domain_size; audits may want a
  // smaller group to keep enumeration tiny.
  bool allow_small_group = false;
};

void ValidateCommonPreludeParams(const CommonPreludeParams& params);

// One party's vector build, exposed so harnesses can re-derive the branch a
// given seed took.
struct ContributionDraw {
  bool participate = false;
  bool noise = false;
  std::vector<uint64_t> z;
};

ContributionDraw DrawContribution(uint64_t x, const CommonPreludeParams& params,
                                  RandomStream& rng);

// One whole-vector message per party; enumerable.
ProtocolSpec CommonPreludeIdealSpec(const CommonPreludeParams& params);

// domain_size * ell share messages per party.
ProtocolSpec CommonPreludeShareSpec(const CommonPreludeParams& params);

// Runs the ideal-variant protocol on all-equal inputs and classifies any
// failure by re-deriving the per-party branch draws from the seed.
ElementTrial RunCommonPreludeTrial(const CommonPreludeParams& params,
                                   uint64_t common_input, uint64_t seed);

}  // namespace shuffledp

#endif  // SHUFFLEDP_COMMON_PRELUDE_HPP_

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
// Nested common-element protocols. The first floor(alpha * n) parties each
// hold an index into X; the rest hold a vector assigning a Y-value to every
// X-index, and all vectors agree at the common index. One-round variant:
// parties add noise vectors over the |X| x |Y| cell grid so that exactly the
// cell (common x, agreed y) stays zero, and the analyzer reads the answer
// off the unique zero cell of the sum. Two-round variant: a pluggable
// common-element sub-protocol finds the x-parties' index first, then a
// second instance finds the agreed value among the y-vectors' entries at
// that index.

#ifndef SHUFFLEDP_NESTED_HPP_
#define SHUFFLEDP_NESTED_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "common_two_round.hpp"
#include "element_outcome.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "value.hpp"

namespace shuffledp {

struct NestedParams {
  int n = 0;
  double alpha = 0.5;   // fraction of parties holding x-inputs
  uint64_t x_size = 0;  // |X|
  uint64_t y_size = 0;  // |Y|
  uint64_t q = 0;       // group modulus
  int sigma = 40;       // share variant: statistical slack
  // The success guarantee needs q >= 16|X||Y| and n >= 6*max(1/alpha,
  // 1/(1-alpha)); audits may drop below both to keep enumeration tiny.
  bool allow_small_group = false;
};

int NestedXPartyCount(const NestedParams& params);

void ValidateNestedParams(const NestedParams& params);

// Inputs for a nested instance: one X-index per x-party, one length-|X|
// vector of Y-values per y-party.
struct NestedInputs {
  std::vector<uint64_t> x_inputs;
  std::vector<std::vector<uint64_t>> y_inputs;
};

// All-agree instance: every x-party holds x_common and every y-party holds
// the same vector.
NestedInputs MakeNestedInstance(const NestedParams& params, uint64_t x_common,
                                std::span<const uint64_t> y_of_x);

// Value encoding the protocol randomizers expect: Int for x-parties, Seq of
// Int for y-parties.
std::vector<Value> NestedInputValues(const NestedParams& params,
                                     const NestedInputs& inputs);

// One party's cell-grid vector build, exposed so harnesses can re-derive
// the branch a given seed took. Cell (x, y) lives at index x * |Y| + y.
struct NestedDraw {
  bool participate = false;
  bool noise = false;
  std::vector<uint64_t> z;
};

NestedDraw DrawXContribution(uint64_t x, const NestedParams& params,
                             RandomStream& rng);
NestedDraw DrawYContribution(std::span<const uint64_t> y_vec,
                             const NestedParams& params, RandomStream& rng);

// One whole-grid message per party; enumerable.
ProtocolSpec NestedOneRoundIdealSpec(const NestedParams& params);

// x_size * y_size * ell share messages per party.
ProtocolSpec NestedOneRoundShareSpec(const NestedParams& params);

// Runs the ideal one-round protocol on an all-agree instance and classifies
// any failure by re-deriving the per-party draws from the seed.
ElementTrial RunNestedOneRoundTrial(const NestedParams& params,
                                    uint64_t x_common,
                                    std::span<const uint64_t> y_of_x,
                                    uint64_t seed);

struct NestedTwoRoundParams {
  int n = 0;
  double alpha = 0.5;
  uint64_t x_size = 0;
  uint64_t y_size = 0;
  double eps = 1.0;     // per-stage histogram budget
  double delta = 0.01;  // per-stage hash-range parameter
  uint64_t range_cap = 1'000'000;
  // Back both stages' histograms with exact counts instead of the one-bit
  // oracle; removes the estimation failure mode for composition tests.
  bool injected_exact = false;
};

// Builds the sub-protocol one stage runs: `stage` is 1 (x-parties, domain
// X) or 2 (y-parties, domain Y), and stage_inputs are the stage's true
// inputs for backends that want them.
using StageFactory = std::function<ProtocolSpec(
    int stage, int parties, uint64_t domain_size,
    std::span<const uint64_t> stage_inputs)>;

struct NestedTwoRoundResult {
  Value stage1;  // x-index the first stage agreed on, or Bottom
  Value stage2;  // final answer, Bottom when either stage abstained
};

// Runs stage 1 among the x-parties, then stage 2 among the y-parties on
// their vectors' entries at the stage-1 index. A null factory uses the
// two-round common-element protocol per params.
NestedTwoRoundResult RunNestedTwoRound(const NestedTwoRoundParams& params,
                                       const NestedInputs& inputs,
                                       uint64_t seed,
                                       const StageFactory& factory = nullptr);

// All-agree convenience wrapper; Found means stage 2 answered
// y_of_x[x_common].
ElementOutcome RunNestedTwoRoundTrial(const NestedTwoRoundParams& params,
                                      uint64_t x_common,
                                      std::span<const uint64_t> y_of_x,
                                      uint64_t seed);

}  // namespace shuffledp

#endif  // SHUFFLEDP_NESTED_HPP_

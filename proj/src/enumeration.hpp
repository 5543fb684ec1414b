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
// Exact coalition-view distributions by exhausting every randomizer branch.
//
// Full-shuffle mode walks the protocol round by round: within a round all
// parties branch independently given the channel history, the chosen
// message vectors go through the round's channel, and the recursion carries
// exact rational probabilities to every leaf. A coalition member's
// randomness is represented by its branch indices, which stand for the coin
// sequences behind the chosen message vector.
//
// Ideal-sum mode audits summation-based protocols against an ideal addition
// functionality: every party emits one vector-sum message per round, the
// adversary sees only the coordinate-wise total, and the honest parties'
// vector distributions are convolved instead of enumerated jointly. That
// collapses the branch product over honest parties to at most q^dim terms
// per round.
//
// Sampling companions produce views in the same encoding (branch indices
// recovered by matching the sampled message vector against the branch
// list), so empirical frequencies are directly comparable to the exact
// distribution.

#ifndef SHUFFLEDP_ENUMERATION_HPP_
#define SHUFFLEDP_ENUMERATION_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "distribution.hpp"
#include "model.hpp"

namespace shuffledp {

struct EnumerateOptions {
  // Leaves visited before the enumeration refuses with the count reached.
  uint64_t leaf_budget = 100'000'000;
  bool ideal_sum = false;
  uint64_t q = 0;   // ideal-sum: modulus, required
  size_t dim = 0;   // ideal-sum: vector length, required
};

// Exact distribution over encoded coalition views. members must be sorted,
// unique, and within range; an empty coalition is the eavesdropper's view.
// Enumerable randomizers are required throughout. The result sums to
// exactly 1.
FiniteDistribution ExactViewDistribution(const ProtocolSpec& spec,
                                         std::span<const Value> inputs,
                                         std::span<const int> members,
                                         const EnumerateOptions& options = {});

// Samples views in the exact-enumeration encoding; one protocol execution
// per Sample call, deterministic in the seed. Branch lists are memoized by
// (party, round, history), so repeated sampling stays cheap.
class ViewSampler {
 public:
  ViewSampler(const ProtocolSpec& spec, std::span<const Value> inputs,
              std::span<const int> members, const EnumerateOptions& options);

  Bytes Sample(uint64_t seed);

 private:
  const std::vector<BranchOutcome>& Branches(int party, int round,
                                             const Bytes& history_key,
                                             const RoundContext& ctx);

  ProtocolSpec spec_;
  std::vector<Value> inputs_;
  std::vector<int> members_;
  EnumerateOptions options_;
  std::map<Bytes, std::vector<BranchOutcome>> branch_cache_;
};

}  // namespace shuffledp

#endif  // SHUFFLEDP_ENUMERATION_HPP_

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
// Emulated pairwise private channels: every ordered pair of parties runs an
// independent secure-message instance, and all n(n-1) instances travel
// through a single shuffle round. Instances never collide because each is
// tagged with (min, max, direction). A config flag switches to the
// mini-shuffle variant where each bit-index pair is shuffled on its own;
// deliveries are identical either way.
//
// The layer accepts any inner protocol that speaks in per-round payload
// matrices. DemoAddition is the bundled inner protocol: n-party addition
// mod q in two rounds (share distribution, then partial sums), ending with
// every party holding the same total.

#ifndef SHUFFLEDP_PAIRWISE_HPP_
#define SHUFFLEDP_PAIRWISE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "model.hpp"

namespace shuffledp {

struct PairwiseOptions {
  int k = 16;  // per-instance security parameter
  // Shuffle each bit-index pair separately instead of one global shuffle.
  bool per_pair_shuffle = false;
};

using PayloadMatrix = std::vector<std::vector<std::vector<uint8_t>>>;

struct PairwiseResult {
  // One canonicalized channel under the global shuffle; under the
  // mini-shuffle flag, one entry per bit-index pair in fixed (tag, index)
  // order followed by each instance's encryption message alone.
  std::vector<ChannelOutput> channels;
  // delivered[from][to]; diagonal entries stay empty.
  PayloadMatrix delivered;
};

// Runs all directed instances for one layer. payload[i][j] is the bit string
// from i to j (at most k bits; the diagonal is ignored). Each party's
// randomness comes from its (seed, party, layer) stream, so the result is a
// deterministic function of the arguments.
PairwiseResult PairwiseChannelsRound(int n, const PayloadMatrix& payload,
                                     const PairwiseOptions& options,
                                     uint64_t seed, int layer);

struct DemoAdditionResult {
  uint64_t sum = 0;                 // the common total mod q
  std::vector<uint64_t> per_party;  // each party's reconstruction
  int layers = 0;
  size_t messages_shuffled = 0;
};

// n-party addition mod q over the pairwise layer; inputs must lie in [0, q)
// and q must fit in options.k bits. Throws on violations.
DemoAdditionResult DemoAddition(std::span<const uint64_t> inputs, uint64_t q,
                                const PairwiseOptions& options, uint64_t seed);

}  // namespace shuffledp

#endif  // SHUFFLEDP_PAIRWISE_HPP_

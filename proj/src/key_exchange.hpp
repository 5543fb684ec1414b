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
// One-round pairwise key exchange over a shuffle.
//
// Each endpoint contributes 3k uniform bits, one tagged message per bit.
// Both endpoints write the pair identities in the same order, so the shuffle
// erases who sent which bit: at an index where the two bits disagree, the
// pair {0, 1} says nothing about which endpoint holds which value. The joint
// key is the initiator's bits at the first k disagreement indices; with
// fewer than k disagreements the exchange fails. The failure probability is
// the exact binomial tail Pr[Bin(3k, 1/2) <= k-1], which stays below 2^-k.

#ifndef SHUFFLEDP_KEY_EXCHANGE_HPP_
#define SHUFFLEDP_KEY_EXCHANGE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "model.hpp"
#include "rational.hpp"
#include "rng.hpp"

namespace shuffledp {

// Wire layout of a pair-bit message:
//   [0x02][uvarint lo][uvarint hi][u8 dir][uvarint index][u8 bit]
constexpr uint8_t kTagPairBit = 0x02;

// Identifies one directed instance between two endpoints. Both endpoints use
// the lexicographically ordered pair, so the tag never betrays the sender.
struct PairTag {
  uint64_t lo = 0;
  uint64_t hi = 0;
  uint8_t dir = 0;

  bool operator==(const PairTag&) const = default;
};

// Tag of the instance directed from -> to; throws on from == to.
PairTag MakePairTag(uint64_t from, uint64_t to);

Message EncodePairBit(const PairTag& tag, uint64_t index, int bit);

struct PairBitMessage {
  PairTag tag;
  uint64_t index = 0;
  int bit = 0;
};

// Empty when msg does not start with the pair-bit tag.
std::optional<PairBitMessage> DecodePairBit(const Message& msg);

// count uniform bits as 0/1 bytes.
std::vector<uint8_t> SampleBits(RandomStream& rng, size_t count);

// The 3k messages one endpoint contributes; bits must have size 3k.
std::vector<Message> KeyExchangeMessages(const PairTag& tag, int k,
                                         std::span<const uint8_t> bits);

struct KeyExchangeOutcome {
  bool ok = false;
  std::vector<uint8_t> key;  // k bits, present iff ok

  bool operator==(const KeyExchangeOutcome&) const = default;
};

// Derives the outcome from an endpoint's own bits plus the shuffled round.
// The key is the initiator's bit vector restricted to disagreement indices,
// so the responder flips its own bit there. Messages with other tags are
// ignored; a channel inconsistent with own_bits is an internal error.
KeyExchangeOutcome DeriveKey(const PairTag& tag, int k, bool initiator,
                             std::span<const uint8_t> own_bits,
                             std::span<const Message> channel);

// Exact Pr[Bin(3k, 1/2) <= k-1].
Rational KeyExchangeFailureProbability(int k);

}  // namespace shuffledp

#endif  // SHUFFLEDP_KEY_EXCHANGE_HPP_

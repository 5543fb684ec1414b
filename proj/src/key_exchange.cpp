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

#include "key_exchange.hpp"

#include <algorithm>
#include <string>

#include "codec.hpp"
#include "errors.hpp"

namespace shuffledp {

PairTag MakePairTag(uint64_t from, uint64_t to) {
  if (from == to) {
    throw ConfigError("pair tag: endpoints must differ, got " +
                      std::to_string(from) + " twice");
  }
  PairTag tag;
  tag.lo = std::min(from, to);
  tag.hi = std::max(from, to);
  tag.dir = from < to ? 0 : 1;
  return tag;
}

Message EncodePairBit(const PairTag& tag, uint64_t index, int bit) {
  Message out;
  codec::PutU8(out, kTagPairBit);
  codec::PutUvarint(out, tag.lo);
  codec::PutUvarint(out, tag.hi);
  codec::PutU8(out, tag.dir);
  codec::PutUvarint(out, index);
  codec::PutU8(out, static_cast<uint8_t>(bit & 1));
  return out;
}

std::optional<PairBitMessage> DecodePairBit(const Message& msg) {
  if (msg.empty() || static_cast<uint8_t>(msg[0]) != kTagPairBit) {
    return std::nullopt;
  }
  codec::Reader r(msg);
  r.U8();
  PairBitMessage pb;
  pb.tag.lo = r.Uvarint();
  pb.tag.hi = r.Uvarint();
  pb.tag.dir = r.U8();
  pb.index = r.Uvarint();
  pb.bit = r.U8();
  r.ExpectDone("pair bit message");
  if (pb.bit > 1) {
    throw InternalError("pair bit message carries a non-bit value");
  }
  return pb;
}

std::vector<uint8_t> SampleBits(RandomStream& rng, size_t count) {
  std::vector<uint8_t> bits(count);
  for (size_t i = 0; i < count; ++i) {
    bits[i] = static_cast<uint8_t>(rng.Bit());
  }
  return bits;
}

std::vector<Message> KeyExchangeMessages(const PairTag& tag, int k,
                                         std::span<const uint8_t> bits) {
  if (k < 1) {
    throw ConfigError("key exchange: k must be positive, got " +
                      std::to_string(k));
  }
  const size_t total = static_cast<size_t>(3) * static_cast<size_t>(k);
  if (bits.size() != total) {
    throw ConfigError("key exchange: expected 3k = " + std::to_string(total) +
                      " bits, got " + std::to_string(bits.size()));
  }
  std::vector<Message> out;
  out.reserve(total);
  for (size_t i = 0; i < total; ++i) {
    out.push_back(EncodePairBit(tag, i, bits[i]));
  }
  return out;
}

KeyExchangeOutcome DeriveKey(const PairTag& tag, int k, bool initiator,
                             std::span<const uint8_t> own_bits,
                             std::span<const Message> channel) {
  if (k < 1) {
    throw ConfigError("key exchange: k must be positive, got " +
                      std::to_string(k));
  }
  const size_t total = static_cast<size_t>(3) * static_cast<size_t>(k);
  if (own_bits.size() != total) {
    throw ConfigError("key exchange: own bit vector has size " +
                      std::to_string(own_bits.size()) + ", expected " +
                      std::to_string(total));
  }

  // Per index, the multiset of the two endpoint bits.
  std::vector<int> counts(total, 0);
  std::vector<int> sums(total, 0);
  for (const Message& msg : channel) {
    std::optional<PairBitMessage> pb = DecodePairBit(msg);
    if (!pb.has_value() || !(pb->tag == tag)) continue;
    if (pb->index >= total) {
      throw InternalError("key exchange: bit index " +
                          std::to_string(pb->index) + " out of range");
    }
    if (counts[pb->index] == 2) {
      throw InternalError("key exchange: more than two bits at index " +
                          std::to_string(pb->index));
    }
    counts[pb->index] += 1;
    sums[pb->index] += pb->bit;
  }

  std::vector<uint8_t> key;
  size_t disagreements = 0;
  for (size_t i = 0; i < total; ++i) {
    if (counts[i] != 2) {
      throw InternalError("key exchange: index " + std::to_string(i) +
                          " carries " + std::to_string(counts[i]) +
                          " bits, expected 2");
    }
    if (sums[i] == 1) {
      // The two bits disagree, so own_bits[i] pins down the peer's bit.
      disagreements += 1;
      if (key.size() < static_cast<size_t>(k)) {
        key.push_back(initiator ? own_bits[i]
                                : static_cast<uint8_t>(1 - own_bits[i]));
      }
    } else if ((sums[i] >> 1) != own_bits[i]) {
      throw InternalError("key exchange: channel disagrees with own bit at "
                          "index " +
                          std::to_string(i));
    }
  }

  KeyExchangeOutcome outcome;
  outcome.ok = disagreements >= static_cast<size_t>(k);
  if (!outcome.ok) key.clear();
  outcome.key = std::move(key);
  return outcome;
}

Rational KeyExchangeFailureProbability(int k) {
  if (k < 1) {
    throw ConfigError("key exchange: k must be positive, got " +
                      std::to_string(k));
  }
  const unsigned total = 3u * static_cast<unsigned>(k);
  mpz_class hits = BinomialPartialSum(total, static_cast<unsigned>(k) - 1);
  mpz_class denom = mpz_class(1) << total;
  Rational out(hits, denom);
  out.canonicalize();
  return out;
}

}  // namespace shuffledp

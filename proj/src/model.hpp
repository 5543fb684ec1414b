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
// Execution model for n-party protocols whose only communication is a
// sequence of rounds through either a shuffle channel or a public channel.
// The shuffle is canonicalized: its output is the lexicographically sorted
// multiset of the round's messages, which carries exactly the information a
// uniformly permuted list would.

#ifndef SHUFFLEDP_MODEL_HPP_
#define SHUFFLEDP_MODEL_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "rational.hpp"
#include "rng.hpp"
#include "value.hpp"

namespace shuffledp {

using Message = Bytes;

enum class ChannelKind : uint8_t { kShuffle = 0, kPublic = 1 };

struct RoundSpec {
  ChannelKind kind = ChannelKind::kShuffle;
  // Messages per party. Public rounds require exactly one message per party.
  int messages_per_party = 1;
  // Optional per-party override (size n) for protocols with asymmetric
  // roles; empty means the uniform count applies to everyone.
  std::vector<int> per_party_counts;

  int CountFor(int party) const {
    return per_party_counts.empty() ? messages_per_party
                                    : per_party_counts.at(party);
  }
};

struct ChannelOutput {
  ChannelKind kind = ChannelKind::kShuffle;
  std::vector<Message> messages;
  // Content fingerprint set by the channel constructors, so per-run caches
  // can key on a round's output in O(1). Derived, so not part of equality.
  uint64_t digest = 0;

  bool operator==(const ChannelOutput& other) const {
    return kind == other.kind && messages == other.messages;
  }

  void RefreshDigest();
};

// A party's own record of earlier rounds: what it sent, and the random words
// it drew (when journaling) or the branch indices it chose (under
// enumeration). This is the only state the contract carries across rounds.
struct PartyHistory {
  std::vector<std::vector<Message>> sent;
  std::vector<std::vector<uint64_t>> words;
  std::vector<int> branches;
};

struct RoundContext {
  const Bytes* w = nullptr;
  const Value* input = nullptr;
  int party = 0;
  int round = 0;
  std::span<const ChannelOutput> history;
  const PartyHistory* own = nullptr;
};

// One possible outcome of a party's round under exact enumeration: the exact
// probability mass of all coin sequences producing this message vector.
struct BranchOutcome {
  Rational prob;
  std::vector<Message> messages;
};

class Randomizer {
 public:
  virtual ~Randomizer() = default;

  // Number of messages this party emits in the given round; must match the
  // round spec.
  virtual int MessageCount(int round) const = 0;

  virtual std::vector<Message> SampleRound(const RoundContext& ctx,
                                           RandomStream& rng) const = 0;

  virtual bool Enumerable() const { return false; }

  // Exact finite distribution over this round's message vectors, given the
  // context. Probabilities must be in (0, 1] and sum to exactly 1.
  virtual std::vector<BranchOutcome> EnumerateRound(const RoundContext& ctx) const;
};

using Analyzer =
    std::function<Value(const Bytes& w, std::span<const ChannelOutput> outputs)>;

struct ProtocolSpec {
  int n = 0;
  int public_randomness_bits = 0;
  std::vector<RoundSpec> rounds;
  std::vector<std::shared_ptr<const Randomizer>> randomizers;  // size n
  Analyzer analyzer;
};

// Structural validation; throws WorkbenchError(kConfig) naming the offender.
void ValidateSpec(const ProtocolSpec& spec);

// Channel evaluations. Both check per-party message counts against the spec
// and throw WorkbenchError(kInternal) naming the party on a mismatch.
ChannelOutput ShuffleRound(const RoundSpec& round,
                           std::vector<std::vector<Message>> per_party);
ChannelOutput PublicRound(const RoundSpec& round,
                          std::vector<std::vector<Message>> per_party);

struct Transcript {
  Bytes public_randomness;
  std::vector<Value> inputs;
  bool randomness_recorded = false;
  // [party][round] -> random words drawn; empty unless recording was on.
  std::vector<std::vector<std::vector<uint64_t>>> party_words;
  std::vector<ChannelOutput> channel_outputs;
  Value outcome;

  bool operator==(const Transcript&) const = default;

  // Canonical versioned serialization; equal bytes iff equal transcripts.
  Bytes Serialize() const;
  static Transcript Deserialize(const Bytes& data);
};

struct RunOptions {
  bool record_randomness = false;
};

// Deterministic function of (spec, inputs, seed): derives the public
// randomness and one stream per (party, round), runs every round through its
// channel, then applies the analyzer.
Transcript RunProtocol(const ProtocolSpec& spec, std::span<const Value> inputs,
                       uint64_t seed, const RunOptions& options = {});

// The stream a given party uses in a given round; exposed so harnesses can
// re-derive a party's choices without re-running the whole protocol.
RandomStream PartyStream(uint64_t seed, int party, int round);
Bytes DerivePublicRandomness(uint64_t seed, int bits);
// The byte encoding DerivePublicRandomness uses, for a known value; value
// must fit in bits, and bits in [0, 64].
Bytes EncodePublicRandomness(uint64_t value, int bits);
// Little-endian value of a w of up to 64 bits; empty decodes to 0.
uint64_t DecodePublicRandomness(const Bytes& w);

// Everything a coalition of parties (plus the analyzer-side observer)
// learns: the public randomness, its own inputs and recorded randomness, and
// all channel outputs.
struct CoalitionView {
  Bytes w;
  std::vector<int> members;  // sorted ascending
  std::vector<Value> inputs;
  std::vector<std::vector<std::vector<uint64_t>>> randomness;
  std::vector<ChannelOutput> channel_outputs;

  bool operator==(const CoalitionView&) const = default;

  Bytes Encode() const;
};

// Pure projection of a transcript; members must be valid, sorted, unique.
CoalitionView ProjectView(const Transcript& transcript,
                          std::span<const int> members);

}  // namespace shuffledp

#endif  // SHUFFLEDP_MODEL_HPP_

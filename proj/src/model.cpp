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

#include "model.hpp"

#include <algorithm>

#include "errors.hpp"

namespace shuffledp {

std::vector<BranchOutcome> Randomizer::EnumerateRound(const RoundContext&) const {
  throw InternalError("randomizer: enumeration not supported");
}

void ValidateSpec(const ProtocolSpec& spec) {
  if (spec.n <= 0) throw ConfigError("spec: party count must be positive");
  if (static_cast<int>(spec.randomizers.size()) != spec.n) {
    throw ConfigError("spec: expected exactly " + std::to_string(spec.n) +
                      " randomizers, got " +
                      std::to_string(spec.randomizers.size()));
  }
  if (spec.rounds.empty()) throw ConfigError("spec: no rounds");
  if (spec.public_randomness_bits < 0) {
    throw ConfigError("spec: negative public randomness length");
  }
  if (!spec.analyzer) throw ConfigError("spec: missing analyzer");
  for (size_t j = 0; j < spec.rounds.size(); ++j) {
    const RoundSpec& round = spec.rounds[j];
    if (!round.per_party_counts.empty() &&
        static_cast<int>(round.per_party_counts.size()) != spec.n) {
      throw ConfigError("spec: round " + std::to_string(j) +
                        " per-party counts sized " +
                        std::to_string(round.per_party_counts.size()));
    }
    for (int i = 0; i < spec.n; ++i) {
      int want = round.CountFor(i);
      if (want <= 0) {
        throw ConfigError("spec: round " + std::to_string(j) +
                          " non-positive message count for party " +
                          std::to_string(i));
      }
      if (round.kind == ChannelKind::kPublic && want != 1) {
        throw ConfigError("spec: public round " + std::to_string(j) +
                          " requires one message per party");
      }
      int declared = spec.randomizers[i]->MessageCount(static_cast<int>(j));
      if (declared != want) {
        throw ConfigError("spec: party " + std::to_string(i) + " declares " +
                          std::to_string(declared) + " messages in round " +
                          std::to_string(j) + ", round spec says " +
                          std::to_string(want));
      }
    }
  }
}

namespace {

void CheckCounts(const RoundSpec& round,
                 const std::vector<std::vector<Message>>& per_party) {
  for (size_t i = 0; i < per_party.size(); ++i) {
    int want = round.CountFor(static_cast<int>(i));
    if (static_cast<int>(per_party[i].size()) != want) {
      throw InternalError("channel: party " + std::to_string(i) +
                          " submitted " + std::to_string(per_party[i].size()) +
                          " messages, expected " + std::to_string(want));
    }
  }
}

}  // namespace

void ChannelOutput::RefreshDigest() {
  // FNV-1a over the kind and length-framed messages.
  uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const char* data, size_t len) {
    for (size_t i = 0; i < len; ++i) {
      h ^= static_cast<unsigned char>(data[i]);
      h *= 1099511628211ULL;
    }
  };
  const uint8_t kind_byte = static_cast<uint8_t>(kind);
  mix(reinterpret_cast<const char*>(&kind_byte), 1);
  for (const Message& m : messages) {
    const uint64_t len = m.size();
    mix(reinterpret_cast<const char*>(&len), sizeof(len));
    mix(m.data(), m.size());
  }
  digest = h;
}

ChannelOutput ShuffleRound(const RoundSpec& round,
                           std::vector<std::vector<Message>> per_party) {
  CheckCounts(round, per_party);
  ChannelOutput out;
  out.kind = ChannelKind::kShuffle;
  size_t total = 0;
  for (const auto& msgs : per_party) total += msgs.size();
  out.messages.reserve(total);
  for (auto& msgs : per_party) {
    for (auto& m : msgs) out.messages.push_back(std::move(m));
  }
  std::sort(out.messages.begin(), out.messages.end());
  out.RefreshDigest();
  return out;
}

ChannelOutput PublicRound(const RoundSpec& round,
                          std::vector<std::vector<Message>> per_party) {
  CheckCounts(round, per_party);
  ChannelOutput out;
  out.kind = ChannelKind::kPublic;
  out.messages.reserve(per_party.size());
  for (auto& msgs : per_party) out.messages.push_back(std::move(msgs.front()));
  out.RefreshDigest();
  return out;
}

RandomStream PartyStream(uint64_t seed, int party, int round) {
  return DeriveStream(seed, kStreamParty, static_cast<uint64_t>(party),
                      static_cast<uint64_t>(round));
}

Bytes DerivePublicRandomness(uint64_t seed, int bits) {
  if (bits == 0) return Bytes();
  RandomStream stream = DeriveStream(seed, kStreamPublicRandomness, 0, 0);
  Bytes w = stream.RandomBytes((static_cast<size_t>(bits) + 7) / 8);
  int tail = bits % 8;
  if (tail != 0) {
    w.back() = static_cast<char>(static_cast<uint8_t>(w.back()) &
                                 ((1u << tail) - 1));
  }
  return w;
}

uint64_t DecodePublicRandomness(const Bytes& w) {
  if (w.size() > 8) {
    throw ConfigError("public randomness: more than 64 bits");
  }
  uint64_t value = 0;
  for (size_t i = 0; i < w.size(); ++i) {
    value |= static_cast<uint64_t>(static_cast<uint8_t>(w[i])) << (8 * i);
  }
  return value;
}

Bytes EncodePublicRandomness(uint64_t value, int bits) {
  if (bits < 0 || bits > 64) {
    throw ConfigError("public randomness: bit count must be in [0, 64]");
  }
  if (bits < 64 && (value >> bits) != 0) {
    throw InternalError("public randomness: value does not fit in " +
                        std::to_string(bits) + " bits");
  }
  Bytes w;
  for (int produced = 0; produced < bits; produced += 8) {
    w.push_back(static_cast<char>(value & 0xff));
    value >>= 8;
  }
  return w;
}

Transcript RunProtocol(const ProtocolSpec& spec, std::span<const Value> inputs,
                       uint64_t seed, const RunOptions& options) {
  ValidateSpec(spec);
  if (static_cast<int>(inputs.size()) != spec.n) {
    throw ConfigError("run: expected " + std::to_string(spec.n) +
                      " inputs, got " + std::to_string(inputs.size()));
  }

  Transcript t;
  t.public_randomness = DerivePublicRandomness(seed, spec.public_randomness_bits);
  t.inputs.assign(inputs.begin(), inputs.end());
  t.randomness_recorded = options.record_randomness;

  std::vector<PartyHistory> histories(spec.n);
  if (options.record_randomness) {
    t.party_words.assign(spec.n, {});
  }

  for (size_t j = 0; j < spec.rounds.size(); ++j) {
    const RoundSpec& round = spec.rounds[j];
    std::vector<std::vector<Message>> per_party(spec.n);
    for (int i = 0; i < spec.n; ++i) {
      RandomStream rng = PartyStream(seed, i, static_cast<int>(j));
      std::vector<uint64_t> words;
      if (options.record_randomness) rng.set_journal(&words);

      RoundContext ctx;
      ctx.w = &t.public_randomness;
      ctx.input = &inputs[i];
      ctx.party = i;
      ctx.round = static_cast<int>(j);
      ctx.history = std::span<const ChannelOutput>(t.channel_outputs);
      ctx.own = &histories[i];

      per_party[i] = spec.randomizers[i]->SampleRound(ctx, rng);

      histories[i].sent.push_back(per_party[i]);
      if (options.record_randomness) {
        histories[i].words.push_back(words);
        t.party_words[i].push_back(std::move(words));
      }
    }
    t.channel_outputs.push_back(round.kind == ChannelKind::kShuffle
                                    ? ShuffleRound(round, std::move(per_party))
                                    : PublicRound(round, std::move(per_party)));
  }

  t.outcome = spec.analyzer(t.public_randomness,
                            std::span<const ChannelOutput>(t.channel_outputs));
  return t;
}

namespace {

inline constexpr uint8_t kTranscriptVersion = 1;
inline constexpr char kTranscriptMagic[4] = {'S', 'D', 'P', 'T'};

void PutChannelOutput(Bytes& out, const ChannelOutput& c) {
  codec::PutU8(out, static_cast<uint8_t>(c.kind));
  codec::PutUvarint(out, c.messages.size());
  for (const Message& m : c.messages) codec::PutBlob(out, m);
}

ChannelOutput ReadChannelOutput(codec::Reader& r) {
  ChannelOutput c;
  c.kind = static_cast<ChannelKind>(r.U8());
  uint64_t count = r.Uvarint();
  c.messages.reserve(count);
  for (uint64_t k = 0; k < count; ++k) c.messages.push_back(r.Blob());
  c.RefreshDigest();
  return c;
}

}  // namespace

Bytes Transcript::Serialize() const {
  Bytes out;
  out.append(kTranscriptMagic, sizeof(kTranscriptMagic));
  codec::PutU8(out, kTranscriptVersion);
  codec::PutBlob(out, public_randomness);
  codec::PutUvarint(out, inputs.size());
  for (const Value& v : inputs) codec::PutBlob(out, v.Encode());
  codec::PutU8(out, randomness_recorded ? 1 : 0);
  if (randomness_recorded) {
    codec::PutUvarint(out, party_words.size());
    for (const auto& rounds : party_words) {
      codec::PutUvarint(out, rounds.size());
      for (const auto& words : rounds) {
        codec::PutUvarint(out, words.size());
        for (uint64_t word : words) codec::PutUvarint(out, word);
      }
    }
  }
  codec::PutUvarint(out, channel_outputs.size());
  for (const ChannelOutput& c : channel_outputs) PutChannelOutput(out, c);
  codec::PutBlob(out, outcome.Encode());
  return out;
}

Transcript Transcript::Deserialize(const Bytes& data) {
  codec::Reader r(data);
  for (char expected : kTranscriptMagic) {
    if (r.U8() != static_cast<uint8_t>(expected)) {
      throw InternalError("transcript: bad magic");
    }
  }
  if (r.U8() != kTranscriptVersion) {
    throw InternalError("transcript: unsupported version");
  }
  Transcript t;
  t.public_randomness = r.Blob();
  uint64_t n = r.Uvarint();
  t.inputs.reserve(n);
  for (uint64_t i = 0; i < n; ++i) t.inputs.push_back(Value::Decode(r.Blob()));
  t.randomness_recorded = r.U8() != 0;
  if (t.randomness_recorded) {
    uint64_t parties = r.Uvarint();
    t.party_words.resize(parties);
    for (uint64_t i = 0; i < parties; ++i) {
      uint64_t rounds = r.Uvarint();
      t.party_words[i].resize(rounds);
      for (uint64_t j = 0; j < rounds; ++j) {
        uint64_t count = r.Uvarint();
        t.party_words[i][j].reserve(count);
        for (uint64_t k = 0; k < count; ++k) {
          t.party_words[i][j].push_back(r.Uvarint());
        }
      }
    }
  }
  uint64_t outputs = r.Uvarint();
  t.channel_outputs.reserve(outputs);
  for (uint64_t j = 0; j < outputs; ++j) {
    t.channel_outputs.push_back(ReadChannelOutput(r));
  }
  t.outcome = Value::Decode(r.Blob());
  r.ExpectDone();
  return t;
}

CoalitionView ProjectView(const Transcript& transcript,
                          std::span<const int> members) {
  CoalitionView view;
  view.w = transcript.public_randomness;
  int last = -1;
  for (int m : members) {
    if (m <= last) throw ConfigError("view: members must be sorted and unique");
    if (m < 0 || m >= static_cast<int>(transcript.inputs.size())) {
      throw ConfigError("view: member " + std::to_string(m) + " out of range");
    }
    last = m;
    view.members.push_back(m);
    view.inputs.push_back(transcript.inputs[m]);
    if (transcript.randomness_recorded) {
      view.randomness.push_back(transcript.party_words[m]);
    }
  }
  view.channel_outputs = transcript.channel_outputs;
  return view;
}

Bytes CoalitionView::Encode() const {
  Bytes out;
  codec::PutBlob(out, w);
  codec::PutUvarint(out, members.size());
  for (int m : members) codec::PutUvarint(out, static_cast<uint64_t>(m));
  codec::PutUvarint(out, inputs.size());
  for (const Value& v : inputs) codec::PutBlob(out, v.Encode());
  codec::PutUvarint(out, randomness.size());
  for (const auto& rounds : randomness) {
    codec::PutUvarint(out, rounds.size());
    for (const auto& words : rounds) {
      codec::PutUvarint(out, words.size());
      for (uint64_t word : words) codec::PutUvarint(out, word);
    }
  }
  codec::PutUvarint(out, channel_outputs.size());
  for (const ChannelOutput& c : channel_outputs) PutChannelOutput(out, c);
  return out;
}

}  // namespace shuffledp

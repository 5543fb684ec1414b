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

#include "pairwise.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "errors.hpp"
#include "group.hpp"
#include "key_exchange.hpp"
#include "secure_message.hpp"

namespace shuffledp {
namespace {

std::vector<uint8_t> BitsOf(uint64_t value, int width) {
  std::vector<uint8_t> bits(width);
  for (int i = 0; i < width; ++i) {
    bits[i] = static_cast<uint8_t>((value >> i) & 1);
  }
  return bits;
}

uint64_t FromBits(std::span<const uint8_t> bits) {
  uint64_t value = 0;
  for (size_t i = 0; i < bits.size(); ++i) {
    value |= static_cast<uint64_t>(bits[i] & 1) << i;
  }
  return value;
}

}  // namespace

PairwiseResult PairwiseChannelsRound(int n, const PayloadMatrix& payload,
                                     const PairwiseOptions& options,
                                     uint64_t seed, int layer) {
  if (n < 2) {
    throw ConfigError("pairwise layer needs at least 2 parties, got " +
                      std::to_string(n));
  }
  if (payload.size() != static_cast<size_t>(n)) {
    throw ConfigError("pairwise layer: payload matrix has " +
                      std::to_string(payload.size()) + " rows, expected " +
                      std::to_string(n));
  }
  const int k = options.k;
  const size_t m = static_cast<size_t>(kSmtBitFactor) * k;
  for (int i = 0; i < n; ++i) {
    if (payload[i].size() != static_cast<size_t>(n)) {
      throw ConfigError("pairwise layer: payload row " + std::to_string(i) +
                        " has " + std::to_string(payload[i].size()) +
                        " entries, expected " + std::to_string(n));
    }
    for (int j = 0; j < n; ++j) {
      if (i != j && payload[i][j].size() > static_cast<size_t>(k)) {
        throw ConfigError("pairwise layer: payload (" + std::to_string(i) +
                          ", " + std::to_string(j) + ") has " +
                          std::to_string(payload[i][j].size()) +
                          " bits, limit is k = " + std::to_string(k));
      }
    }
  }

  // Phase 1: every party plays sender for all its outgoing instances, then
  // phase 2: receiver for all incoming ones, each on its own stream.
  std::vector<RandomStream> streams;
  streams.reserve(n);
  for (int p = 0; p < n; ++p) {
    streams.push_back(PartyStream(seed, p, layer));
  }
  std::vector<std::vector<SmtSendResult>> sent(n);
  for (int from = 0; from < n; ++from) {
    sent[from].resize(n);
    for (int to = 0; to < n; ++to) {
      if (from == to) continue;
      sent[from][to] = SmtSend(static_cast<uint64_t>(from),
                               static_cast<uint64_t>(to), k,
                               payload[from][to], streams[from]);
    }
  }
  std::vector<std::vector<std::vector<uint8_t>>> recv_bits(n);
  std::vector<std::vector<std::vector<Message>>> recv_msgs(n);
  for (int to = 0; to < n; ++to) {
    recv_bits[to].resize(n);
    recv_msgs[to].resize(n);
    for (int from = 0; from < n; ++from) {
      if (from == to) continue;
      recv_bits[to][from] = SampleBits(streams[to], m);
      recv_msgs[to][from] =
          SmtReceiverMessages(static_cast<uint64_t>(from),
                              static_cast<uint64_t>(to), k,
                              recv_bits[to][from]);
    }
  }

  std::vector<Message> all;
  all.reserve(static_cast<size_t>(n) * (n - 1) * (2 * m + 1));
  for (int from = 0; from < n; ++from) {
    for (int to = 0; to < n; ++to) {
      if (from == to) continue;
      all.insert(all.end(), sent[from][to].messages.begin(),
                 sent[from][to].messages.end());
      all.insert(all.end(), recv_msgs[to][from].begin(),
                 recv_msgs[to][from].end());
    }
  }

  PairwiseResult result;
  if (!options.per_pair_shuffle) {
    ChannelOutput channel;
    channel.kind = ChannelKind::kShuffle;
    channel.messages = all;
    std::sort(channel.messages.begin(), channel.messages.end());
    result.channels.push_back(std::move(channel));
  } else {
    // Instances in (lo, hi, dir) order; per instance, one two-message
    // shuffle per bit index, then the encryption message on its own.
    for (int lo = 0; lo < n; ++lo) {
      for (int hi = lo + 1; hi < n; ++hi) {
        for (int dir = 0; dir < 2; ++dir) {
          const int from = dir == 0 ? lo : hi;
          const int to = dir == 0 ? hi : lo;
          const std::vector<Message>& s = sent[from][to].messages;
          const std::vector<Message>& r = recv_msgs[to][from];
          for (size_t idx = 0; idx < m; ++idx) {
            ChannelOutput channel;
            channel.kind = ChannelKind::kShuffle;
            channel.messages = {s[idx], r[idx]};
            std::sort(channel.messages.begin(), channel.messages.end());
            result.channels.push_back(std::move(channel));
          }
          ChannelOutput cipher;
          cipher.kind = ChannelKind::kShuffle;
          cipher.messages = {s[m]};
          result.channels.push_back(std::move(cipher));
        }
      }
    }
  }

  result.delivered.assign(n, std::vector<std::vector<uint8_t>>(n));
  for (int from = 0; from < n; ++from) {
    for (int to = 0; to < n; ++to) {
      if (from == to) continue;
      result.delivered[from][to] =
          SmtReceive(static_cast<uint64_t>(from), static_cast<uint64_t>(to),
                     k, recv_bits[to][from], all);
    }
  }
  return result;
}

DemoAdditionResult DemoAddition(std::span<const uint64_t> inputs, uint64_t q,
                                const PairwiseOptions& options,
                                uint64_t seed) {
  const int n = static_cast<int>(inputs.size());
  if (n < 2) {
    throw ConfigError("demo addition needs at least 2 parties, got " +
                      std::to_string(n));
  }
  if (q < 2) {
    throw ConfigError("demo addition: modulus must be at least 2, got " +
                      std::to_string(q));
  }
  const int width = std::bit_width(q - 1);
  if (width > options.k) {
    throw ConfigError("demo addition: modulus needs " + std::to_string(width) +
                      " bits per payload, above k = " +
                      std::to_string(options.k));
  }
  for (int i = 0; i < n; ++i) {
    if (inputs[i] >= q) {
      throw ConfigError("demo addition: input " + std::to_string(inputs[i]) +
                        " of party " + std::to_string(i) +
                        " is outside [0, q)");
    }
  }

  // Layer 0 payloads: additive shares of each input.
  std::vector<std::vector<uint64_t>> shares(n, std::vector<uint64_t>(n, 0));
  for (int i = 0; i < n; ++i) {
    RandomStream share_stream = DeriveStream(
        seed, kStreamHarness, static_cast<uint64_t>(i), /*b=*/0);
    uint64_t drawn = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      shares[i][j] = UniformGroupElement(share_stream, q);
      drawn = AddMod(drawn, shares[i][j], q);
    }
    shares[i][i] = SubMod(inputs[i], drawn, q);
  }
  PayloadMatrix payload1(n, std::vector<std::vector<uint8_t>>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) payload1[i][j] = BitsOf(shares[i][j], width);
    }
  }
  PairwiseResult round1 =
      PairwiseChannelsRound(n, payload1, options, seed, /*layer=*/0);

  // Partial sums: every party folds the shares addressed to it.
  std::vector<uint64_t> partial(n, 0);
  for (int j = 0; j < n; ++j) {
    partial[j] = shares[j][j];
    for (int i = 0; i < n; ++i) {
      if (i == j) continue;
      const uint64_t share = FromBits(round1.delivered[i][j]);
      if (share >= q) {
        throw InternalError("demo addition: delivered share out of range");
      }
      partial[j] = AddMod(partial[j], share, q);
    }
  }

  // Layer 1 payloads: broadcast the partial sums pairwise.
  PayloadMatrix payload2(n, std::vector<std::vector<uint8_t>>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i != j) payload2[j][i] = BitsOf(partial[j], width);
    }
  }
  PairwiseResult round2 =
      PairwiseChannelsRound(n, payload2, options, seed, /*layer=*/1);

  DemoAdditionResult result;
  result.layers = 2;
  result.per_party.resize(n);
  for (int i = 0; i < n; ++i) {
    uint64_t total = partial[i];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const uint64_t part = FromBits(round2.delivered[j][i]);
      if (part >= q) {
        throw InternalError("demo addition: delivered partial sum out of "
                            "range");
      }
      total = AddMod(total, part, q);
    }
    result.per_party[i] = total;
  }
  for (int i = 1; i < n; ++i) {
    if (result.per_party[i] != result.per_party[0]) {
      throw InternalError("demo addition: parties disagree on the total");
    }
  }
  result.sum = result.per_party[0];
  for (const PairwiseResult* r : {&round1, &round2}) {
    for (const ChannelOutput& ch : r->channels) {
      result.messages_shuffled += ch.messages.size();
    }
  }
  return result;
}

}  // namespace shuffledp

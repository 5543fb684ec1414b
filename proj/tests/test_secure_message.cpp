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

#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "secure_message.hpp"
#include "value.hpp"

namespace shuffledp {
namespace {

std::vector<uint8_t> UnpackBits(uint64_t word, int len) {
  std::vector<uint8_t> bits;
  for (int i = 0; i < len; ++i) bits.push_back((word >> i) & 1);
  return bits;
}

std::vector<Message> MixedChannel(const SmtSendResult& send,
                                  const std::vector<Message>& receiver_msgs) {
  std::vector<Message> channel = send.messages;
  channel.insert(channel.end(), receiver_msgs.begin(), receiver_msgs.end());
  std::sort(channel.begin(), channel.end());
  return channel;
}

TEST_CASE("cipher messages round-trip") {
  RandomStream rng(3);
  SmtCipherMessage cm;
  cm.tag = MakePairTag(0, 1);
  cm.hash = ToeplitzHash::Sample(rng, 2, 14);
  cm.length = 2;
  cm.cipher = 3;
  const Message msg = EncodePairCipher(cm);
  const auto back = DecodePairCipher(msg);
  REQUIRE(back.has_value());
  CHECK(back->tag == cm.tag);
  CHECK(back->hash == cm.hash);
  CHECK(back->length == cm.length);
  CHECK(back->cipher == cm.cipher);

  CHECK_FALSE(DecodePairCipher(Message("\x01junk")).has_value());
}

TEST_CASE("transmission recovers the exact bits on every seed") {
  RandomStream rng(77);
  for (int k : {1, 2, 5}) {
    for (int rep = 0; rep < 100; ++rep) {
      const int len = 1 + static_cast<int>(rng.UniformBelow(
                              static_cast<uint64_t>(k)));
      std::vector<uint8_t> message = SampleBits(rng, len);
      const SmtSendResult send = SmtSend(4, 9, k, message, rng);
      REQUIRE(send.messages.size() ==
              static_cast<size_t>(kSmtBitFactor * k + 1));
      const std::vector<uint8_t> rbits =
          SampleBits(rng, static_cast<size_t>(kSmtBitFactor * k));
      const std::vector<Message> rmsgs = SmtReceiverMessages(4, 9, k, rbits);
      REQUIRE(rmsgs.size() == static_cast<size_t>(kSmtBitFactor * k));
      const std::vector<Message> channel = MixedChannel(send, rmsgs);
      CHECK(SmtReceive(4, 9, k, rbits, channel) == message);
    }
  }
}

TEST_CASE("receiver learns the sender bits themselves") {
  // The decryption path goes through reconstructing the sender's pad input,
  // so check reconstruction directly: hash of reconstructed bits must equal
  // hash of the true bits.
  RandomStream rng(12);
  const int k = 3;
  std::vector<uint8_t> message = {1, 0, 1};
  const SmtSendResult send = SmtSend(0, 1, k, message, rng);
  const std::vector<uint8_t> rbits =
      SampleBits(rng, static_cast<size_t>(kSmtBitFactor * k));
  const std::vector<Message> channel =
      MixedChannel(send, SmtReceiverMessages(0, 1, k, rbits));
  // Recover pad input: where bits agree the channel shows it, where they
  // disagree flip the receiver's own bit.
  const uint64_t key = send.hash.Eval(send.bits);
  const uint64_t expected_cipher = key ^ (1ULL << 0) ^ (0ULL << 1) ^ (1ULL << 2);
  CHECK(send.cipher == expected_cipher);
  CHECK(SmtReceive(0, 1, k, rbits, channel) == message);
}

TEST_CASE("message length caps at k") {
  RandomStream rng(5);
  std::vector<uint8_t> message = {1, 1};
  CHECK_THROWS_AS(SmtSend(0, 1, 1, message, rng), WorkbenchError);
}

TEST_CASE("a tampered channel is detected") {
  RandomStream rng(6);
  const int k = 1;
  std::vector<uint8_t> message = {1};
  const SmtSendResult send = SmtSend(0, 1, k, message, rng);
  const std::vector<uint8_t> rbits = SampleBits(rng, 7);
  std::vector<Message> channel =
      MixedChannel(send, SmtReceiverMessages(0, 1, k, rbits));
  // Drop one pair-bit message; the receiver can no longer see both sides.
  auto it = std::find_if(channel.begin(), channel.end(), [](const Message& m) {
    return DecodePairBit(m).has_value();
  });
  REQUIRE(it != channel.end());
  channel.erase(it);
  CHECK_THROWS_AS(SmtReceive(0, 1, k, rbits, channel), WorkbenchError);
}

TEST_CASE("the packaged two-party protocol transmits through a run") {
  const int k = 2;
  const ProtocolSpec spec = SmtProtocolSpec(k, 2);
  ValidateSpec(spec);
  CHECK(spec.n == 2);
  CHECK(spec.public_randomness_bits == 0);
  REQUIRE(spec.rounds.size() == 1);
  CHECK(spec.rounds[0].per_party_counts ==
        std::vector<int>{kSmtBitFactor * k + 1, kSmtBitFactor * k});

  for (uint64_t seed = 0; seed < 30; ++seed) {
    for (uint64_t payload : {0ULL, 1ULL, 2ULL, 3ULL}) {
      const std::vector<Value> inputs = {Value::Int(payload), Value::Int(0)};
      const Transcript t = RunProtocol(spec, inputs, seed);
      CHECK(t.outcome.is_bottom());
      // Reconstruct what the receiver decodes from its own stream plus the
      // channel: re-derive the receiver's bits the way the run did.
      RandomStream receiver = PartyStream(seed, 1, 0);
      const std::vector<uint8_t> rbits =
          SampleBits(receiver, static_cast<size_t>(kSmtBitFactor * k));
      const std::vector<uint8_t> got =
          SmtReceive(0, 1, k, rbits, t.channel_outputs[0].messages);
      CHECK(got == UnpackBits(payload, 2));
    }
  }
}

TEST_CASE("sender enumeration covers the whole branch space at k=1") {
  const ProtocolSpec spec = SmtProtocolSpec(1, 1);
  REQUIRE(spec.randomizers[0]->Enumerable());
  const Value input = Value::Int(1);
  RoundContext ctx;
  Bytes w;
  ctx.w = &w;
  ctx.input = &input;
  ctx.party = 0;
  ctx.round = 0;
  // 7 bits + 7-bit diag + 1-bit offset = 2^15 equiprobable branches.
  const std::vector<BranchOutcome> branches =
      spec.randomizers[0]->EnumerateRound(ctx);
  REQUIRE(branches.size() == 32768);
  Rational total(0);
  for (const BranchOutcome& b : branches) {
    CHECK(b.messages.size() == 8);
    total += b.prob;
  }
  CHECK(total == Rational(1));

  // Receiver side: 2^7 branches of 7 messages.
  const std::vector<BranchOutcome> rbranches =
      spec.randomizers[1]->EnumerateRound(ctx);
  CHECK(rbranches.size() == 128);
}

TEST_CASE("sender enumeration refuses oversized branch spaces") {
  // k = 2: 14 + 15 + 2 = 31 bits > the 2^26 enumeration guard.
  const ProtocolSpec spec = SmtProtocolSpec(2, 2);
  const Value input = Value::Int(0);
  RoundContext ctx;
  Bytes w;
  ctx.w = &w;
  ctx.input = &input;
  ctx.party = 0;
  ctx.round = 0;
  CHECK_THROWS_AS(spec.randomizers[0]->EnumerateRound(ctx), WorkbenchError);
}

TEST_CASE("protocol rejects payloads wider than the advertised length") {
  const ProtocolSpec spec = SmtProtocolSpec(1, 1);
  const std::vector<Value> inputs = {Value::Int(2), Value::Int(0)};
  CHECK_THROWS_AS(RunProtocol(spec, inputs, 0), WorkbenchError);
}

}  // namespace
}  // namespace shuffledp

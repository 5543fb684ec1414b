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

#include "secure_message.hpp"

#include <string>
#include <utility>

#include "codec.hpp"
#include "errors.hpp"

namespace shuffledp {
namespace {

void CheckK(int k) {
  if (k < 1 || k > kSmtMaxK) {
    throw ConfigError("secure message: k must be in [1, " +
                      std::to_string(kSmtMaxK) + "], got " +
                      std::to_string(k));
  }
}

uint64_t PackBits(std::span<const uint8_t> bits) {
  uint64_t value = 0;
  for (size_t i = 0; i < bits.size(); ++i) {
    value |= static_cast<uint64_t>(bits[i] & 1) << i;
  }
  return value;
}

std::vector<uint8_t> UnpackBits(uint64_t value, size_t count) {
  std::vector<uint8_t> bits(count);
  for (size_t i = 0; i < count; ++i) {
    bits[i] = static_cast<uint8_t>((value >> i) & 1);
  }
  return bits;
}

std::vector<Message> BitMessages(const PairTag& tag,
                                 std::span<const uint8_t> bits) {
  std::vector<Message> out;
  out.reserve(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) {
    out.push_back(EncodePairBit(tag, i, bits[i]));
  }
  return out;
}

Message CipherMessage(const PairTag& tag, const ToeplitzHash& hash,
                      uint64_t length, uint64_t cipher) {
  SmtCipherMessage cm;
  cm.tag = tag;
  cm.hash = hash;
  cm.length = length;
  cm.cipher = cipher;
  return EncodePairCipher(cm);
}

}  // namespace

Message EncodePairCipher(const SmtCipherMessage& cm) {
  Message out;
  codec::PutU8(out, kTagPairCipher);
  codec::PutUvarint(out, cm.tag.lo);
  codec::PutUvarint(out, cm.tag.hi);
  codec::PutU8(out, cm.tag.dir);
  codec::PutBlob(out, cm.hash.Encode());
  codec::PutUvarint(out, cm.length);
  codec::PutUvarint(out, cm.cipher);
  return out;
}

std::optional<SmtCipherMessage> DecodePairCipher(const Message& msg) {
  if (msg.empty() || static_cast<uint8_t>(msg[0]) != kTagPairCipher) {
    return std::nullopt;
  }
  codec::Reader r(msg);
  r.U8();
  SmtCipherMessage cm;
  cm.tag.lo = r.Uvarint();
  cm.tag.hi = r.Uvarint();
  cm.tag.dir = r.U8();
  Bytes hash_bytes = r.Blob();
  codec::Reader hr(hash_bytes);
  cm.hash = ToeplitzHash::Decode(hr);
  hr.ExpectDone("hash description");
  cm.length = r.Uvarint();
  cm.cipher = r.Uvarint();
  r.ExpectDone("pair cipher message");
  return cm;
}

SmtSendResult SmtSend(uint64_t from, uint64_t to, int k,
                      std::span<const uint8_t> message_bits,
                      RandomStream& rng) {
  CheckK(k);
  if (message_bits.size() > static_cast<size_t>(k)) {
    throw ConfigError("secure message: payload has " +
                      std::to_string(message_bits.size()) +
                      " bits, limit is k = " + std::to_string(k));
  }
  const PairTag tag = MakePairTag(from, to);
  const int m = kSmtBitFactor * k;

  SmtSendResult res;
  res.bits = SampleBits(rng, static_cast<size_t>(m));
  res.hash = ToeplitzHash::Sample(rng, k, m);
  const uint64_t key = res.hash.Eval(res.bits);
  res.cipher = key ^ PackBits(message_bits);
  res.messages = BitMessages(tag, res.bits);
  res.messages.push_back(
      CipherMessage(tag, res.hash, message_bits.size(), res.cipher));
  return res;
}

std::vector<Message> SmtReceiverMessages(uint64_t from, uint64_t to, int k,
                                         std::span<const uint8_t> bits) {
  CheckK(k);
  const size_t m = static_cast<size_t>(kSmtBitFactor) * k;
  if (bits.size() != m) {
    throw ConfigError("secure message: receiver needs 7k = " +
                      std::to_string(m) + " bits, got " +
                      std::to_string(bits.size()));
  }
  return BitMessages(MakePairTag(from, to), bits);
}

std::vector<uint8_t> SmtReceive(uint64_t from, uint64_t to, int k,
                                std::span<const uint8_t> receiver_bits,
                                std::span<const Message> channel) {
  CheckK(k);
  const PairTag tag = MakePairTag(from, to);
  const size_t m = static_cast<size_t>(kSmtBitFactor) * k;
  if (receiver_bits.size() != m) {
    throw ConfigError("secure message: receiver bit vector has size " +
                      std::to_string(receiver_bits.size()) + ", expected " +
                      std::to_string(m));
  }

  std::vector<int> counts(m, 0);
  std::vector<int> sums(m, 0);
  std::optional<SmtCipherMessage> cipher;
  for (const Message& msg : channel) {
    if (std::optional<PairBitMessage> pb = DecodePairBit(msg);
        pb.has_value()) {
      if (!(pb->tag == tag)) continue;
      if (pb->index >= m) {
        throw InternalError("secure message: bit index " +
                            std::to_string(pb->index) + " out of range");
      }
      if (counts[pb->index] == 2) {
        throw InternalError("secure message: more than two bits at index " +
                            std::to_string(pb->index));
      }
      counts[pb->index] += 1;
      sums[pb->index] += pb->bit;
      continue;
    }
    if (std::optional<SmtCipherMessage> cm = DecodePairCipher(msg);
        cm.has_value()) {
      if (!(cm->tag == tag)) continue;
      if (cipher.has_value()) {
        throw InternalError("secure message: duplicate encryption message");
      }
      cipher = std::move(cm);
    }
  }
  if (!cipher.has_value()) {
    throw InternalError("secure message: encryption message missing");
  }

  // Reconstruct the sender's bits a: agreement indices carry the value in
  // the clear, disagreement indices are the receiver's bit flipped.
  std::vector<uint8_t> sender_bits(m);
  for (size_t i = 0; i < m; ++i) {
    if (counts[i] != 2) {
      throw InternalError("secure message: index " + std::to_string(i) +
                          " carries " + std::to_string(counts[i]) +
                          " bits, expected 2");
    }
    if (sums[i] == 1) {
      sender_bits[i] = static_cast<uint8_t>(1 - receiver_bits[i]);
    } else {
      sender_bits[i] = static_cast<uint8_t>(sums[i] >> 1);
      if (sender_bits[i] != receiver_bits[i]) {
        throw InternalError("secure message: channel disagrees with own bit "
                            "at index " +
                            std::to_string(i));
      }
    }
  }

  if (cipher->length > static_cast<uint64_t>(k)) {
    throw InternalError("secure message: declared length " +
                        std::to_string(cipher->length) + " exceeds k");
  }
  const uint64_t key = cipher->hash.Eval(sender_bits);
  const uint64_t pad = cipher->cipher ^ key;
  if (cipher->length < 64 && (pad >> cipher->length) != 0) {
    throw InternalError("secure message: nonzero padding after decryption");
  }
  return UnpackBits(pad, cipher->length);
}

namespace {

class SenderRandomizer final : public Randomizer {
 public:
  SenderRandomizer(uint64_t from, uint64_t to, int k, int message_len)
      : tag_(MakePairTag(from, to)),
        from_(from),
        to_(to),
        k_(k),
        message_len_(message_len) {
    CheckK(k);
    if (message_len < 0 || message_len > k) {
      throw ConfigError("secure message: message length must be in [0, k]");
    }
  }

  int MessageCount(int) const override { return kSmtBitFactor * k_ + 1; }

  std::vector<Message> SampleRound(const RoundContext& ctx,
                                   RandomStream& rng) const override {
    return SmtSend(from_, to_, k_, InputBits(ctx), rng).messages;
  }

  bool Enumerable() const override { return true; }

  std::vector<BranchOutcome> EnumerateRound(
      const RoundContext& ctx) const override {
    const int m = kSmtBitFactor * k_;
    const int diag_bits = k_ + m - 1;
    const int total_bits = m + diag_bits + k_;
    if (total_bits > 26) {
      throw BudgetError("secure message sender enumeration needs 2^" +
                        std::to_string(total_bits) +
                        " branches; refusing above 2^26");
    }
    const std::vector<uint8_t> payload = InputBits(ctx);
    const uint64_t branch_count = uint64_t{1} << total_bits;
    const Rational prob = MakeRational(1, branch_count);

    std::vector<BranchOutcome> out;
    out.reserve(branch_count);
    for (uint64_t bits_word = 0; bits_word < (uint64_t{1} << m);
         ++bits_word) {
      const std::vector<uint8_t> bits =
          UnpackBits(bits_word, static_cast<size_t>(m));
      for (uint64_t diag = 0; diag < (uint64_t{1} << diag_bits); ++diag) {
        for (uint64_t offset = 0; offset < (uint64_t{1} << k_); ++offset) {
          ToeplitzHash hash(k_, m, {diag}, {offset});
          const uint64_t key = hash.Eval(bits);
          const uint64_t cipher = key ^ PackBits(payload);
          BranchOutcome branch;
          branch.prob = prob;
          branch.messages = BitMessages(tag_, bits);
          branch.messages.push_back(
              CipherMessage(tag_, hash, payload.size(), cipher));
          out.push_back(std::move(branch));
        }
      }
    }
    return out;
  }

 private:
  std::vector<uint8_t> InputBits(const RoundContext& ctx) const {
    const uint64_t value =
        static_cast<uint64_t>(ctx.input->AsInt());
    if (message_len_ < 64 && (value >> message_len_) != 0) {
      throw ConfigError("secure message: input " + std::to_string(value) +
                        " does not fit in " + std::to_string(message_len_) +
                        " bits");
    }
    return UnpackBits(value, static_cast<size_t>(message_len_));
  }

  PairTag tag_;
  uint64_t from_;
  uint64_t to_;
  int k_;
  int message_len_;
};

class ReceiverRandomizer final : public Randomizer {
 public:
  ReceiverRandomizer(uint64_t from, uint64_t to, int k)
      : tag_(MakePairTag(from, to)), k_(k) {
    CheckK(k);
  }

  int MessageCount(int) const override { return kSmtBitFactor * k_; }

  std::vector<Message> SampleRound(const RoundContext&,
                                   RandomStream& rng) const override {
    const size_t m = static_cast<size_t>(kSmtBitFactor) * k_;
    return BitMessages(tag_, SampleBits(rng, m));
  }

  bool Enumerable() const override { return true; }

  std::vector<BranchOutcome> EnumerateRound(const RoundContext&) const override {
    const int m = kSmtBitFactor * k_;
    if (m > 26) {
      throw BudgetError("secure message receiver enumeration needs 2^" +
                        std::to_string(m) + " branches; refusing above 2^26");
    }
    const Rational prob = MakeRational(1, uint64_t{1} << m);
    std::vector<BranchOutcome> out;
    out.reserve(size_t{1} << m);
    for (uint64_t word = 0; word < (uint64_t{1} << m); ++word) {
      BranchOutcome branch;
      branch.prob = prob;
      branch.messages =
          BitMessages(tag_, UnpackBits(word, static_cast<size_t>(m)));
      out.push_back(std::move(branch));
    }
    return out;
  }

 private:
  PairTag tag_;
  int k_;
};

}  // namespace

std::shared_ptr<const Randomizer> SmtSenderRandomizer(uint64_t from,
                                                      uint64_t to, int k,
                                                      int message_len) {
  return std::make_shared<SenderRandomizer>(from, to, k, message_len);
}

std::shared_ptr<const Randomizer> SmtReceiverRandomizer(uint64_t from,
                                                        uint64_t to, int k) {
  return std::make_shared<ReceiverRandomizer>(from, to, k);
}

ProtocolSpec SmtProtocolSpec(int k, int message_len) {
  CheckK(k);
  ProtocolSpec spec;
  spec.n = 2;
  spec.public_randomness_bits = 0;
  RoundSpec round;
  round.kind = ChannelKind::kShuffle;
  round.messages_per_party = kSmtBitFactor * k;
  round.per_party_counts = {kSmtBitFactor * k + 1, kSmtBitFactor * k};
  spec.rounds = {round};
  spec.randomizers = {SmtSenderRandomizer(0, 1, k, message_len),
                      SmtReceiverRandomizer(0, 1, k)};
  spec.analyzer = [](const Bytes&, std::span<const ChannelOutput>) {
    return Value::Bottom();
  };
  return spec;
}

}  // namespace shuffledp

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
// One-round secure message transmission over a shuffle.
//
// Sender and receiver each contribute 7k tagged bit messages, exactly the
// key-exchange format. The receiver reconstructs the sender's bit vector
// perfectly: where the two bits agree it reads the value off the channel,
// where they disagree it flips its own bit. Correctness therefore never
// fails. The sender encrypts with a fresh Toeplitz hash of its own bits and
// ships the hash description, the message length, and c = h(a) xor pad(M)
// in one extra message. An eavesdropper sees only the unordered bit pairs,
// which are symmetric under swapping the endpoints wherever they disagree,
// so the hash output stays close to uniform given the whole view.
//
// The message length travels in the clear: messages of length at most k do
// not fit injectively into k bits, so an in-pad length header cannot be
// decoded unambiguously. Length is public metadata here.

#ifndef SHUFFLEDP_SECURE_MESSAGE_HPP_
#define SHUFFLEDP_SECURE_MESSAGE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "hashing.hpp"
#include "key_exchange.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace shuffledp {

// Wire layout of the encryption message:
//   [0x04][uvarint lo][uvarint hi][u8 dir][blob hash][uvarint len][uvarint c]
constexpr uint8_t kTagPairCipher = 0x04;

// Bits per endpoint per instance: 7k gives at least 2k disagreements except
// with probability below 2^-k.
constexpr int kSmtBitFactor = 7;

// Keys and ciphertexts live in a single word.
constexpr int kSmtMaxK = 64;

struct SmtCipherMessage {
  PairTag tag;
  ToeplitzHash hash;
  uint64_t length = 0;  // message bit length, public
  uint64_t cipher = 0;  // k-bit ciphertext, LSB-first
};

Message EncodePairCipher(const SmtCipherMessage& cm);
std::optional<SmtCipherMessage> DecodePairCipher(const Message& msg);

struct SmtSendResult {
  std::vector<uint8_t> bits;  // the sender's 7k bits
  ToeplitzHash hash;
  uint64_t cipher = 0;
  std::vector<Message> messages;  // 7k bit messages plus the cipher message
};

// Sender half: draws 7k bits and a fresh hash, encrypts message_bits
// (length at most k, 0/1 bytes).
SmtSendResult SmtSend(uint64_t from, uint64_t to, int k,
                      std::span<const uint8_t> message_bits,
                      RandomStream& rng);

// Receiver half's outbound messages; bits must be 7k freshly drawn bits.
std::vector<Message> SmtReceiverMessages(uint64_t from, uint64_t to, int k,
                                         std::span<const uint8_t> bits);

// Recovers the transmitted bits from the receiver's own bits plus the
// shuffled round. Succeeds on every seed; a channel inconsistent with
// receiver_bits is an internal error.
std::vector<uint8_t> SmtReceive(uint64_t from, uint64_t to, int k,
                                std::span<const uint8_t> receiver_bits,
                                std::span<const Message> channel);

// Two-party protocol for view audits: party 0 sends its input (an integer of
// message_len bits) to party 1 through one shuffle round. Party 0 emits
// 7k + 1 messages, party 1 emits 7k. The analyzer returns bottom; audits
// look at coalition views only. Both randomizers enumerate exactly when the
// branch space is small enough (k = 1 in practice).
ProtocolSpec SmtProtocolSpec(int k, int message_len);

std::shared_ptr<const Randomizer> SmtSenderRandomizer(uint64_t from,
                                                      uint64_t to, int k,
                                                      int message_len);
std::shared_ptr<const Randomizer> SmtReceiverRandomizer(uint64_t from,
                                                        uint64_t to, int k);

}  // namespace shuffledp

#endif  // SHUFFLEDP_SECURE_MESSAGE_HPP_

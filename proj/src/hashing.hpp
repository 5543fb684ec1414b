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
// Pairwise-independent hash families.
//
// AffineHash: x -> ((a*x + b) mod p) mod range with p prime and
// p >= max(domain, range) * 2^40, so the output is within 2^-40 of uniform
// per pair (truncation bias; documented, not eliminated).
//
// ToeplitzHash: {0,1}^m -> {0,1}^k via a random binary Toeplitz matrix plus
// an offset vector; exactly pairwise independent.

#ifndef SHUFFLEDP_HASHING_HPP_
#define SHUFFLEDP_HASHING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "codec.hpp"
#include "rng.hpp"

namespace shuffledp {

struct AffineHash {
  uint64_t p = 0;      // prime modulus
  uint64_t a = 0;      // in [0, p)
  uint64_t b = 0;      // in [0, p)
  uint64_t domain = 0;
  uint64_t range = 0;

  uint64_t Eval(uint64_t x) const {
    unsigned __int128 t = static_cast<unsigned __int128>(a) * x + b;
    return static_cast<uint64_t>(t % p) % range;
  }

  // {+1, -1}-valued variant used by the sign-hash histogram (range must be 2).
  int SignAt(uint64_t x) const { return Eval(x) == 0 ? 1 : -1; }

  // Decimal field dump for audit reports.
  std::string Describe() const;
};

// Samples a uniform member of the family for the given sizes.
AffineHash SampleAffineHash(RandomStream& rng, uint64_t domain, uint64_t range);

class ToeplitzHash {
 public:
  ToeplitzHash() = default;
  // diag has k + m - 1 bits (entry (r, c) = diag[r + m - 1 - c]), offset has
  // k bits; both stored LSB-first in packed words.
  ToeplitzHash(int k, int m, std::vector<uint64_t> diag, std::vector<uint64_t> offset);

  static ToeplitzHash Sample(RandomStream& rng, int k, int m);

  int k() const { return k_; }
  int m() const { return m_; }

  // Input is m bits as 0/1 bytes; returns k bits packed LSB-first into one
  // word (k <= 64).
  uint64_t Eval(std::span<const uint8_t> input_bits) const;

  Bytes Encode() const;
  static ToeplitzHash Decode(codec::Reader& r);

  bool operator==(const ToeplitzHash&) const = default;

 private:
  bool DiagBit(int idx) const {
    return (diag_[idx >> 6] >> (idx & 63)) & 1;
  }

  int k_ = 0;
  int m_ = 0;
  std::vector<uint64_t> diag_;    // k + m - 1 bits
  std::vector<uint64_t> offset_;  // k bits
};

}  // namespace shuffledp

#endif  // SHUFFLEDP_HASHING_HPP_

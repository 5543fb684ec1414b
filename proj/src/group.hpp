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
// Additive group Z_q and fixed-length vectors over it.

#ifndef SHUFFLEDP_GROUP_HPP_
#define SHUFFLEDP_GROUP_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "codec.hpp"
#include "rng.hpp"
#include "value.hpp"

namespace shuffledp {

inline uint64_t AddMod(uint64_t a, uint64_t b, uint64_t q) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) + b) % q);
}

inline uint64_t SubMod(uint64_t a, uint64_t b, uint64_t q) {
  return a >= b ? a - b : a + (q - b);
}

// Smallest prime >= bound (bound >= 2).
uint64_t SmallestPrimeAtLeast(uint64_t bound);

// Uniform element of Z_q; exact via rejection in the stream.
inline uint64_t UniformGroupElement(RandomStream& rng, uint64_t q) {
  return rng.UniformBelow(q);
}

// Vector message codec shared by the summation-based protocols and the
// ideal-sum view enumerator: tag byte, then one varint per coordinate.
inline constexpr uint8_t kTagVector = 0x03;

Bytes EncodeVectorMessage(std::span<const uint64_t> coords);
std::vector<uint64_t> DecodeVectorMessage(const Bytes& msg, size_t dim);

// Element-wise sum mod q of equal-length vectors.
void AccumulateVector(std::vector<uint64_t>& acc, std::span<const uint64_t> add,
                      uint64_t q);

}  // namespace shuffledp

#endif  // SHUFFLEDP_GROUP_HPP_

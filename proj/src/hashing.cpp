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

#include "hashing.hpp"

#include "errors.hpp"
#include "group.hpp"

namespace shuffledp {

std::string AffineHash::Describe() const {
  return "affine(p=" + std::to_string(p) + ",a=" + std::to_string(a) +
         ",b=" + std::to_string(b) + ",domain=" + std::to_string(domain) +
         ",range=" + std::to_string(range) + ")";
}

AffineHash SampleAffineHash(RandomStream& rng, uint64_t domain, uint64_t range) {
  if (domain == 0 || range == 0) throw ConfigError("affine hash: empty sizes");
  uint64_t base = std::max(domain, range);
  if (base > (uint64_t{1} << 23)) {
    throw ConfigError("affine hash: size too large for 2^-40 bias modulus");
  }
  AffineHash h;
  h.domain = domain;
  h.range = range;
  h.p = SmallestPrimeAtLeast(base << 40);
  h.a = rng.UniformBelow(h.p);
  h.b = rng.UniformBelow(h.p);
  return h;
}

ToeplitzHash::ToeplitzHash(int k, int m, std::vector<uint64_t> diag,
                           std::vector<uint64_t> offset)
    : k_(k), m_(m), diag_(std::move(diag)), offset_(std::move(offset)) {
  if (k <= 0 || k > 64 || m <= 0) throw ConfigError("toeplitz: bad dimensions");
  size_t diag_words = (static_cast<size_t>(k) + m - 1 + 63) / 64;
  if (diag_.size() != diag_words || offset_.size() != 1) {
    throw ConfigError("toeplitz: bad descriptor size");
  }
}

ToeplitzHash ToeplitzHash::Sample(RandomStream& rng, int k, int m) {
  if (k <= 0 || k > 64 || m <= 0) throw ConfigError("toeplitz: bad dimensions");
  int diag_bits = k + m - 1;
  std::vector<uint64_t> diag((diag_bits + 63) / 64);
  for (auto& w : diag) w = rng.Next();
  int tail = diag_bits % 64;
  if (tail != 0) diag.back() &= (uint64_t{1} << tail) - 1;
  std::vector<uint64_t> offset(1);
  offset[0] = rng.Next();
  if (k < 64) offset[0] &= (uint64_t{1} << k) - 1;
  return ToeplitzHash(k, m, std::move(diag), std::move(offset));
}

uint64_t ToeplitzHash::Eval(std::span<const uint8_t> input_bits) const {
  if (static_cast<int>(input_bits.size()) != m_) {
    throw InternalError("toeplitz: input size mismatch");
  }
  uint64_t out = offset_[0];
  for (int r = 0; r < k_; ++r) {
    unsigned parity = 0;
    for (int c = 0; c < m_; ++c) {
      if (input_bits[c] & 1) parity ^= DiagBit(r + m_ - 1 - c) ? 1u : 0u;
    }
    out ^= static_cast<uint64_t>(parity) << r;
  }
  return out;
}

Bytes ToeplitzHash::Encode() const {
  Bytes out;
  codec::PutUvarint(out, static_cast<uint64_t>(k_));
  codec::PutUvarint(out, static_cast<uint64_t>(m_));
  codec::PutUvarint(out, diag_.size());
  for (uint64_t w : diag_) codec::PutUvarint(out, w);
  codec::PutUvarint(out, offset_[0]);
  return out;
}

ToeplitzHash ToeplitzHash::Decode(codec::Reader& r) {
  int k = static_cast<int>(r.Uvarint());
  int m = static_cast<int>(r.Uvarint());
  uint64_t words = r.Uvarint();
  std::vector<uint64_t> diag;
  diag.reserve(words);
  for (uint64_t i = 0; i < words; ++i) diag.push_back(r.Uvarint());
  std::vector<uint64_t> offset{r.Uvarint()};
  return ToeplitzHash(k, m, std::move(diag), std::move(offset));
}

}  // namespace shuffledp

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

#include "rng.hpp"

#include <cmath>

#include "errors.hpp"

namespace shuffledp {
namespace {

// splitmix64 output function (Vigna; public domain reference construction).
inline uint64_t Mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline uint64_t Absorb(uint64_t state, uint64_t word) {
  return Mix((state + kGolden) ^ word);
}

}  // namespace

uint64_t RandomStream::Next() {
  state_ += kGolden;
  uint64_t out = Mix(state_);
  if (journal_ != nullptr) journal_->push_back(out);
  return out;
}

uint64_t RandomStream::UniformBelow(uint64_t bound) {
  if (bound == 0) throw InternalError("RandomStream: zero bound");
  if (bound == 1) return 0;
  // Rejection sampling: accept draws below the largest multiple of bound.
  uint64_t threshold = (0 - bound) % bound;  // == 2^64 mod bound
  for (;;) {
    uint64_t draw = Next();
    if (draw >= threshold) return draw % bound;
  }
}

bool RandomStream::Bernoulli(uint64_t num, uint64_t den) {
  if (den == 0 || num > den) throw InternalError("RandomStream: bad Bernoulli ratio");
  return UniformBelow(den) < num;
}

bool RandomStream::BernoulliReal(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  // ldexp keeps the threshold exact to within one unit in the last place of
  // the 2^-64 grid.
  long double threshold = std::ldexp(static_cast<long double>(p), 64);
  return static_cast<long double>(Next()) < threshold;
}

Bytes RandomStream::RandomBytes(size_t count) {
  Bytes out;
  out.reserve(count);
  while (out.size() < count) {
    uint64_t word = Next();
    for (int i = 0; i < 8 && out.size() < count; ++i) {
      out.push_back(static_cast<char>(word & 0xff));
      word >>= 8;
    }
  }
  return out;
}

RandomStream DeriveStream(uint64_t seed, uint64_t domain, uint64_t a, uint64_t b) {
  uint64_t s = Mix(seed ^ kGolden);
  s = Absorb(s, domain);
  s = Absorb(s, a);
  s = Absorb(s, b);
  return RandomStream(s);
}

uint64_t DeriveTrialSeed(uint64_t seed, uint64_t trial) {
  uint64_t s = Mix(seed ^ kGolden);
  s = Absorb(s, kStreamTrial);
  s = Absorb(s, trial);
  return s;
}

}  // namespace shuffledp

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
// Deterministic keyed random streams. Every consumer of randomness gets its
// own stream derived from (master seed, domain, a, b); party streams are keyed
// by (seed, party index, round index) so changing one party's consumption
// never shifts another party's draws.

#ifndef SHUFFLEDP_RNG_HPP_
#define SHUFFLEDP_RNG_HPP_

#include <cstdint>
#include <vector>

#include "codec.hpp"

namespace shuffledp {

class RandomStream {
 public:
  explicit RandomStream(uint64_t state) : state_(state) {}

  // Journaled draws land in *journal in order; pass nullptr to disable.
  void set_journal(std::vector<uint64_t>* journal) { journal_ = journal; }

  uint64_t Next();

  // Exact uniform draw in [0, bound) by rejection; bound >= 1.
  uint64_t UniformBelow(uint64_t bound);

  // Exact Bernoulli(num/den); requires num <= den, den >= 1.
  bool Bernoulli(uint64_t num, uint64_t den);

  // Bernoulli with a real-valued probability, via a 2^-64 fixed-point
  // threshold (used only where the probability is irrational).
  bool BernoulliReal(double p);

  uint64_t Bit() { return UniformBelow(2); }

  Bytes RandomBytes(size_t count);

 private:
  uint64_t state_;
  std::vector<uint64_t>* journal_ = nullptr;
};

// Stream domains. Party streams use the party and round indices as (a, b).
inline constexpr uint64_t kStreamParty = 1;
inline constexpr uint64_t kStreamPublicRandomness = 2;
inline constexpr uint64_t kStreamTrial = 3;
inline constexpr uint64_t kStreamHarness = 4;

RandomStream DeriveStream(uint64_t seed, uint64_t domain, uint64_t a, uint64_t b);

// Per-trial master seeds for Monte Carlo loops.
uint64_t DeriveTrialSeed(uint64_t seed, uint64_t trial);

}  // namespace shuffledp

#endif  // SHUFFLEDP_RNG_HPP_

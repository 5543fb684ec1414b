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

#include <cstdint>
#include <set>
#include <vector>

#include "rng.hpp"
#include "support/stats.hpp"

namespace shuffledp {
namespace {

TEST_CASE("streams are deterministic in their seed") {
  RandomStream a(123);
  RandomStream b(123);
  for (int i = 0; i < 64; ++i) CHECK(a.Next() == b.Next());
}

TEST_CASE("derived streams separate by domain and indices") {
  std::set<uint64_t> first_words;
  for (uint64_t domain : {kStreamParty, kStreamPublicRandomness, kStreamTrial,
                          kStreamHarness}) {
    for (uint64_t a = 0; a < 4; ++a) {
      for (uint64_t b = 0; b < 4; ++b) {
        RandomStream s = DeriveStream(9, domain, a, b);
        first_words.insert(s.Next());
      }
    }
  }
  // 64 distinct (domain, a, b) triples should not collide.
  CHECK(first_words.size() == 64);
}

TEST_CASE("trial seeds do not repeat over a long stretch") {
  std::set<uint64_t> seeds;
  for (uint64_t t = 0; t < 10000; ++t) seeds.insert(DeriveTrialSeed(7, t));
  CHECK(seeds.size() == 10000);
}

TEST_CASE("UniformBelow stays in range and is unbiased") {
  RandomStream rng(42);
  CHECK(rng.UniformBelow(1) == 0);

  const uint64_t bound = 5;
  std::vector<uint64_t> counts(bound, 0);
  const int trials = 50000;
  for (int i = 0; i < trials; ++i) {
    const uint64_t v = rng.UniformBelow(bound);
    REQUIRE(v < bound);
    counts[v] += 1;
  }
  const std::vector<double> expected(bound, 1.0 / static_cast<double>(bound));
  CHECK(testsupport::ChiSquarePValue(counts, expected) > 1e-6);
}

TEST_CASE("UniformBelow handles bounds that stress rejection") {
  RandomStream rng(43);
  // A bound just above a power of two maximizes the rejection region.
  const uint64_t bound = (uint64_t{1} << 62) + 1;
  for (int i = 0; i < 200; ++i) CHECK(rng.UniformBelow(bound) < bound);
}

TEST_CASE("Bernoulli matches its exact rational") {
  RandomStream rng(44);
  SUBCASE("degenerate probabilities") {
    for (int i = 0; i < 50; ++i) {
      CHECK_FALSE(rng.Bernoulli(0, 7));
      CHECK(rng.Bernoulli(7, 7));
    }
  }
  SUBCASE("interior probability") {
    const int trials = 60000;
    uint64_t hits = 0;
    for (int i = 0; i < trials; ++i) {
      if (rng.Bernoulli(3, 16)) hits += 1;
    }
    const auto [lo, hi] = testsupport::ClopperPearson95(trials, hits);
    CHECK(lo < 3.0 / 16.0);
    CHECK(hi > 3.0 / 16.0);
  }
}

TEST_CASE("BernoulliReal tracks the double threshold") {
  RandomStream rng(45);
  const int trials = 60000;
  uint64_t hits = 0;
  for (int i = 0; i < trials; ++i) {
    if (rng.BernoulliReal(0.73)) hits += 1;
  }
  const auto [lo, hi] = testsupport::ClopperPearson95(trials, hits);
  CHECK(lo < 0.73);
  CHECK(hi > 0.73);
}

TEST_CASE("journal captures the words a replay needs") {
  std::vector<uint64_t> journal;
  RandomStream rng(46);
  rng.set_journal(&journal);
  const uint64_t a = rng.UniformBelow(12);
  const bool b = rng.Bernoulli(1, 3);
  CHECK_FALSE(journal.empty());

  // A fresh stream from the same seed reproduces the draws and the journal.
  std::vector<uint64_t> replay_journal;
  RandomStream replay(46);
  replay.set_journal(&replay_journal);
  CHECK(replay.UniformBelow(12) == a);
  CHECK(replay.Bernoulli(1, 3) == b);
  CHECK(replay_journal == journal);
}

TEST_CASE("RandomBytes length and determinism") {
  RandomStream a(47);
  RandomStream b(47);
  const Bytes bytes_a = a.RandomBytes(17);
  CHECK(bytes_a.size() == 17);
  CHECK(b.RandomBytes(17) == bytes_a);
}

}  // namespace
}  // namespace shuffledp

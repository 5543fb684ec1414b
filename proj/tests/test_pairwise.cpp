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
#include <vector>

#include "errors.hpp"
#include "pairwise.hpp"
#include "rng.hpp"

namespace shuffledp {
namespace {

PayloadMatrix DistinctPayloads(int n, int bits) {
  PayloadMatrix payload(n, std::vector<std::vector<uint8_t>>(n));
  uint64_t stamp = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      std::vector<uint8_t> msg;
      for (int b = 0; b < bits; ++b) msg.push_back((stamp >> b) & 1);
      payload[i][j] = msg;
      ++stamp;
    }
  }
  return payload;
}

TEST_CASE("every directed payload arrives intact") {
  const int n = 4;
  const PayloadMatrix payload = DistinctPayloads(n, 5);
  PairwiseOptions options;
  options.k = 8;
  const PairwiseResult res = PairwiseChannelsRound(n, payload, options, 17, 0);
  REQUIRE(res.delivered.size() == static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        CHECK(res.delivered[i][j].empty());
      } else {
        CHECK(res.delivered[i][j] == payload[i][j]);
      }
    }
  }
  // Global shuffle: a single channel holding all n(n-1) instances.
  REQUIRE(res.channels.size() == 1);
  CHECK(res.channels[0].messages.size() ==
        static_cast<size_t>(n * (n - 1) * (7 * 8 * 2 + 1)));
}

TEST_CASE("mini-shuffle delivers the same payloads") {
  const int n = 3;
  const PayloadMatrix payload = DistinctPayloads(n, 4);
  PairwiseOptions global;
  global.k = 4;
  PairwiseOptions mini;
  mini.k = 4;
  mini.per_pair_shuffle = true;
  const PairwiseResult a = PairwiseChannelsRound(n, payload, global, 23, 1);
  const PairwiseResult b = PairwiseChannelsRound(n, payload, mini, 23, 1);
  CHECK(a.delivered == b.delivered);
  CHECK(b.channels.size() > 1);
}

TEST_CASE("rounds are deterministic per (seed, layer)") {
  const int n = 3;
  const PayloadMatrix payload = DistinctPayloads(n, 3);
  PairwiseOptions options;
  options.k = 4;
  const PairwiseResult a = PairwiseChannelsRound(n, payload, options, 5, 0);
  const PairwiseResult b = PairwiseChannelsRound(n, payload, options, 5, 0);
  CHECK(a.channels == b.channels);
  const PairwiseResult c = PairwiseChannelsRound(n, payload, options, 5, 1);
  CHECK_FALSE(a.channels == c.channels);
}

TEST_CASE("payloads wider than k are rejected") {
  const int n = 2;
  PayloadMatrix payload(n, std::vector<std::vector<uint8_t>>(n));
  payload[0][1] = {1, 0, 1};
  payload[1][0] = {};
  PairwiseOptions options;
  options.k = 2;
  CHECK_THROWS_AS(PairwiseChannelsRound(n, payload, options, 0, 0),
                  WorkbenchError);
}

TEST_CASE("addition over private channels reaches the true sum") {
  PairwiseOptions options;
  options.k = 8;
  RandomStream rng(9);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    const uint64_t q = 100;
    std::vector<uint64_t> inputs;
    uint64_t want = 0;
    for (int i = 0; i < 5; ++i) {
      inputs.push_back(rng.UniformBelow(q));
      want = (want + inputs.back()) % q;
    }
    const DemoAdditionResult res = DemoAddition(inputs, q, options, seed);
    CHECK(res.sum == want);
    for (uint64_t v : res.per_party) CHECK(v == want);
    CHECK(res.layers >= 2);
    CHECK(res.messages_shuffled > 0);
  }
}

TEST_CASE("addition validates the group width against k") {
  PairwiseOptions options;
  options.k = 4;
  const std::vector<uint64_t> inputs = {1, 2};
  CHECK_THROWS_AS(DemoAddition(inputs, 17, options, 0), WorkbenchError);
  CHECK_THROWS_AS(DemoAddition(std::vector<uint64_t>{5, 0}, 5, options, 0),
                  WorkbenchError);
  const DemoAdditionResult ok = DemoAddition(inputs, 16, options, 0);
  CHECK(ok.sum == 3);
}

}  // namespace
}  // namespace shuffledp

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
#include "group.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "share_split.hpp"
#include "value.hpp"

namespace shuffledp {
namespace {

Value VecValue(std::vector<uint64_t> coords) {
  std::vector<Value> items;
  for (uint64_t c : coords) items.push_back(Value::Int(c));
  return Value::Seq(std::move(items));
}

TEST_CASE("default share count tracks sigma plus the group and party sizes") {
  // sigma + ceil(lg q) + ceil(lg n)
  CHECK(DefaultShareCount(2, 2, 40) == 42);
  CHECK(DefaultShareCount(3, 2, 40) == 43);
  CHECK(DefaultShareCount(1024, 1000, 0) == 20);
  CHECK(DefaultShareCount(1025, 1025, 1) == 23);
}

TEST_CASE("shares are uniform-looking but always rebuild the value") {
  RandomStream rng(31337);
  for (uint64_t q : {2ULL, 3ULL, 97ULL, 1000003ULL}) {
    for (int ell : {1, 2, 5}) {
      for (int rep = 0; rep < 50; ++rep) {
        const uint64_t value = rng.UniformBelow(q);
        const std::vector<uint64_t> shares =
            SplitIntoShares(value, q, ell, rng);
        REQUIRE(shares.size() == static_cast<size_t>(ell));
        uint64_t sum = 0;
        for (uint64_t s : shares) {
          CHECK(s < q);
          sum = AddMod(sum, s, q);
        }
        CHECK(sum == value);
      }
    }
  }
}

TEST_CASE("single-share splitting is the identity") {
  RandomStream rng(1);
  CHECK(SplitIntoShares(5, 7, 1, rng) == std::vector<uint64_t>{5});
}

TEST_CASE("share messages decode through the channel summer") {
  // Two coordinates, q = 10: coordinate sums are 3+9+8 = 20 -> 0 and 7.
  RoundSpec round{ChannelKind::kShuffle, 2, {}};
  std::vector<std::vector<Message>> per_party = {
      {EncodeShareMessage(0, 3), EncodeShareMessage(1, 7)},
      {EncodeShareMessage(0, 9), EncodeShareMessage(0, 8)},
  };
  const ChannelOutput out = ShuffleRound(round, per_party);
  const std::vector<uint64_t> sums = SumSharesFromChannel(out, 10, 2);
  CHECK(sums == std::vector<uint64_t>{0, 7});
}

TEST_CASE("channel summer rejects foreign and out-of-range messages") {
  RoundSpec round{ChannelKind::kShuffle, 1, {}};
  SUBCASE("coordinate beyond dim") {
    std::vector<std::vector<Message>> per_party = {{EncodeShareMessage(2, 1)}};
    const ChannelOutput out = ShuffleRound(round, per_party);
    CHECK_THROWS_AS(SumSharesFromChannel(out, 10, 2), WorkbenchError);
  }
  SUBCASE("wrong tag") {
    std::vector<std::vector<Message>> per_party = {
        {EncodeVectorMessage(std::vector<uint64_t>{1})}};
    const ChannelOutput out = ShuffleRound(round, per_party);
    CHECK_THROWS_AS(SumSharesFromChannel(out, 10, 2), WorkbenchError);
  }
}

TEST_CASE("the summation protocol is exact for every seed") {
  ShareSumParams params;
  params.n = 4;
  params.q = 11;
  params.dim = 3;
  params.ell = 3;
  const ProtocolSpec spec = ShareSumSpec(params);
  ValidateSpec(spec);

  RandomStream rng(8);
  for (uint64_t seed = 0; seed < 40; ++seed) {
    std::vector<Value> inputs;
    std::vector<uint64_t> want(3, 0);
    for (int i = 0; i < 4; ++i) {
      std::vector<uint64_t> coords;
      for (int d = 0; d < 3; ++d) {
        coords.push_back(rng.UniformBelow(11));
        want[static_cast<size_t>(d)] =
            AddMod(want[static_cast<size_t>(d)], coords.back(), 11);
      }
      inputs.push_back(VecValue(coords));
    }
    const Transcript t = RunProtocol(spec, inputs, seed);
    CHECK(t.outcome == VecValue(want));
  }
}

TEST_CASE("share randomizers enumerate to exactly the sampling law") {
  // ell = 2, dim = 1, q = 3: each party has 3 equiprobable branches (the one
  // free share), and each branch's two messages must rebuild the input.
  ShareSumParams params;
  params.n = 2;
  params.q = 3;
  params.dim = 1;
  params.ell = 2;
  const ProtocolSpec spec = ShareSumSpec(params);
  REQUIRE(spec.randomizers[0]->Enumerable());

  const Value input = VecValue({2});
  RoundContext ctx;
  Bytes w;
  ctx.w = &w;
  ctx.input = &input;
  ctx.party = 0;
  ctx.round = 0;
  const std::vector<BranchOutcome> branches =
      spec.randomizers[0]->EnumerateRound(ctx);
  REQUIRE(branches.size() == 3);
  Rational total(0);
  std::vector<std::vector<Message>> seen;
  for (const BranchOutcome& b : branches) {
    CHECK(b.prob == Rational(1, 3));
    total += b.prob;
    REQUIRE(b.messages.size() == 2);
    const std::vector<uint64_t> sums = SumSharesFromChannel(
        ChannelOutput{ChannelKind::kShuffle, b.messages, 0}, 3, 1);
    CHECK(sums[0] == 2);
    seen.push_back(b.messages);
  }
  CHECK(total == Rational(1));
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("protocol rejects out-of-group inputs") {
  ShareSumParams params;
  params.n = 2;
  params.q = 5;
  params.dim = 1;
  params.ell = 2;
  const ProtocolSpec spec = ShareSumSpec(params);
  const std::vector<Value> inputs = {VecValue({5}), VecValue({0})};
  CHECK_THROWS_AS(RunProtocol(spec, inputs, 3), WorkbenchError);
}

}  // namespace
}  // namespace shuffledp

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
#include <map>
#include <memory>
#include <vector>

#include "enumeration.hpp"
#include "errors.hpp"
#include "group.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "support/stats.hpp"
#include "value.hpp"

namespace shuffledp {
namespace {

class CoinRandomizer final : public Randomizer {
 public:
  explicit CoinRandomizer(Rational heads) : heads_(std::move(heads)) {}

  int MessageCount(int) const override { return 1; }

  std::vector<Message> SampleRound(const RoundContext&,
                                   RandomStream& rng) const override {
    const uint64_t num = mpz_class(heads_.get_num()).get_ui();
    const uint64_t den = mpz_class(heads_.get_den()).get_ui();
    return {rng.Bernoulli(num, den) ? Message("H") : Message("T")};
  }

  bool Enumerable() const override { return true; }

  std::vector<BranchOutcome> EnumerateRound(const RoundContext&) const override {
    std::vector<BranchOutcome> out;
    if (heads_ != 0) out.push_back({heads_, {Message("H")}});
    if (heads_ != 1) out.push_back({1 - heads_, {Message("T")}});
    return out;
  }

 private:
  Rational heads_;
};

ProtocolSpec CoinSpec(int n, int rounds = 1, int w_bits = 0,
                      Rational heads = Rational(1, 2)) {
  ProtocolSpec spec;
  spec.n = n;
  spec.public_randomness_bits = w_bits;
  for (int r = 0; r < rounds; ++r) {
    spec.rounds.push_back(RoundSpec{ChannelKind::kShuffle, 1, {}});
  }
  auto coin = std::make_shared<const CoinRandomizer>(heads);
  spec.randomizers.assign(static_cast<size_t>(n), coin);
  spec.analyzer = [](const Bytes&, std::span<const ChannelOutput>) {
    return Value::Bottom();
  };
  return spec;
}

Bytes EavesdropperViewOf(std::vector<Message> sorted_messages) {
  CoalitionView view;
  view.channel_outputs.push_back(
      ChannelOutput{ChannelKind::kShuffle, std::move(sorted_messages), 0});
  return view.Encode();
}

TEST_CASE("two fair coins through a shuffle give the binomial view law") {
  const ProtocolSpec spec = CoinSpec(2);
  const std::vector<Value> inputs = {Value::Int(0), Value::Int(1)};
  const FiniteDistribution dist =
      ExactViewDistribution(spec, inputs, std::vector<int>{});
  REQUIRE(dist.Size() == 3);
  CHECK(dist.MassOf(EavesdropperViewOf({"H", "H"})) == Rational(1, 4));
  CHECK(dist.MassOf(EavesdropperViewOf({"H", "T"})) == Rational(1, 2));
  CHECK(dist.MassOf(EavesdropperViewOf({"T", "T"})) == Rational(1, 4));
}

TEST_CASE("coalition views split the mixed outcome") {
  const ProtocolSpec spec = CoinSpec(2);
  const std::vector<Value> inputs = {Value::Int(0), Value::Int(1)};
  const FiniteDistribution dist =
      ExactViewDistribution(spec, inputs, std::vector<int>{0});
  // Party 0's branch index disambiguates {H, T}: four views of 1/4 each.
  REQUIRE(dist.Size() == 4);
  for (const auto& [view, mass] : dist.weights()) {
    CHECK(mass == Rational(1, 4));
  }

  // The member's input value is embedded in the view.
  CoalitionView expected;
  expected.members = {0};
  expected.inputs = {Value::Int(0)};
  expected.randomness = {{{0}}};  // branch 0 = heads
  expected.channel_outputs.push_back(
      ChannelOutput{ChannelKind::kShuffle, {Message("H"), Message("H")}, 0});
  CHECK(dist.MassOf(expected.Encode()) == Rational(1, 4));
}

TEST_CASE("public randomness multiplies the view space") {
  const ProtocolSpec spec = CoinSpec(2, 1, 2);
  const std::vector<Value> inputs = {Value::Int(0), Value::Int(0)};
  const FiniteDistribution dist =
      ExactViewDistribution(spec, inputs, std::vector<int>{});
  // 4 values of w, 3 channel outcomes each.
  CHECK(dist.Size() == 12);
}

TEST_CASE("biased coins keep exact rational masses") {
  const ProtocolSpec spec = CoinSpec(3, 1, 0, Rational(1, 3));
  const std::vector<Value> inputs(3, Value::Int(0));
  const FiniteDistribution dist =
      ExactViewDistribution(spec, inputs, std::vector<int>{});
  REQUIRE(dist.Size() == 4);
  CHECK(dist.MassOf(EavesdropperViewOf({"H", "H", "H"})) == Rational(1, 27));
  CHECK(dist.MassOf(EavesdropperViewOf({"H", "H", "T"})) == Rational(6, 27));
  CHECK(dist.MassOf(EavesdropperViewOf({"H", "T", "T"})) == Rational(12, 27));
  CHECK(dist.MassOf(EavesdropperViewOf({"T", "T", "T"})) == Rational(8, 27));
}

TEST_CASE("sampled views land in the exact distribution with its law") {
  const ProtocolSpec spec = CoinSpec(2);
  const std::vector<Value> inputs = {Value::Int(0), Value::Int(1)};
  const FiniteDistribution exact =
      ExactViewDistribution(spec, inputs, std::vector<int>{});
  ViewSampler sampler(spec, inputs, std::vector<int>{}, EnumerateOptions{});

  CHECK(sampler.Sample(7) == sampler.Sample(7));

  std::map<Bytes, uint64_t> counts;
  const uint64_t trials = 3000;
  for (uint64_t t = 0; t < trials; ++t) {
    const Bytes view = sampler.Sample(t);
    CHECK(exact.MassOf(view) > 0);
    counts[view] += 1;
  }
  std::vector<uint64_t> observed;
  std::vector<double> expected;
  for (const auto& [view, mass] : exact.weights()) {
    observed.push_back(counts[view]);
    expected.push_back(RationalToDouble(mass));
  }
  CHECK(testsupport::ChiSquarePValue(observed, expected) > 1e-6);
}

TEST_CASE("enumeration rejects bad branch lists") {
  struct BadKind {
    Rational first;
    Rational second;
    int messages = 1;
  };
  class BadRandomizer final : public Randomizer {
   public:
    explicit BadRandomizer(BadKind kind) : kind_(kind) {}
    int MessageCount(int) const override { return 1; }
    std::vector<Message> SampleRound(const RoundContext&,
                                     RandomStream&) const override {
      return {Message("x")};
    }
    bool Enumerable() const override { return true; }
    std::vector<BranchOutcome> EnumerateRound(
        const RoundContext&) const override {
      std::vector<BranchOutcome> out;
      std::vector<Message> msgs(static_cast<size_t>(kind_.messages),
                                Message("x"));
      out.push_back({kind_.first, msgs});
      if (kind_.second != 0) out.push_back({kind_.second, {Message("y")}});
      return out;
    }

   private:
    BadKind kind_;
  };

  auto make_spec = [](BadKind kind) {
    ProtocolSpec spec = CoinSpec(1);
    spec.randomizers = {std::make_shared<const BadRandomizer>(kind)};
    return spec;
  };
  const std::vector<Value> inputs = {Value::Int(0)};

  // Probabilities that do not reach 1.
  CHECK_THROWS_AS(ExactViewDistribution(
                      make_spec({Rational(1, 4), Rational(1, 4), 1}), inputs,
                      std::vector<int>{}),
                  WorkbenchError);
  // A nonpositive branch probability.
  CHECK_THROWS_AS(ExactViewDistribution(
                      make_spec({Rational(0), Rational(1), 1}), inputs,
                      std::vector<int>{}),
                  WorkbenchError);
  // Wrong message arity against the round spec.
  CHECK_THROWS_AS(ExactViewDistribution(
                      make_spec({Rational(1, 2), Rational(1, 2), 2}), inputs,
                      std::vector<int>{}),
                  WorkbenchError);
}

TEST_CASE("non-enumerable randomizers are refused up front") {
  class OpaqueRandomizer final : public Randomizer {
   public:
    int MessageCount(int) const override { return 1; }
    std::vector<Message> SampleRound(const RoundContext&,
                                     RandomStream&) const override {
      return {Message("x")};
    }
  };
  ProtocolSpec spec = CoinSpec(1);
  spec.randomizers = {std::make_shared<const OpaqueRandomizer>()};
  const std::vector<Value> inputs = {Value::Int(0)};
  CHECK_THROWS_AS(
      ExactViewDistribution(spec, inputs, std::vector<int>{}),
      WorkbenchError);
}

TEST_CASE("member lists must be sorted, unique, and in range") {
  const ProtocolSpec spec = CoinSpec(3);
  const std::vector<Value> inputs(3, Value::Int(0));
  CHECK_THROWS_AS(
      ExactViewDistribution(spec, inputs, std::vector<int>{1, 0}),
      WorkbenchError);
  CHECK_THROWS_AS(
      ExactViewDistribution(spec, inputs, std::vector<int>{1, 1}),
      WorkbenchError);
  CHECK_THROWS_AS(ExactViewDistribution(spec, inputs, std::vector<int>{3}),
                  WorkbenchError);
}

TEST_CASE("budgets stop oversized enumerations early") {
  EnumerateOptions tight;
  tight.leaf_budget = 100;
  // One round: the product 2^12 is predicted before any recursion.
  const std::vector<Value> inputs12(12, Value::Int(0));
  CHECK_THROWS_AS(ExactViewDistribution(CoinSpec(12), inputs12,
                                        std::vector<int>{}, tight),
                  WorkbenchError);
  // Two rounds: counted at the leaves.
  const std::vector<Value> inputs6(6, Value::Int(0));
  CHECK_THROWS_AS(ExactViewDistribution(CoinSpec(6, 2), inputs6,
                                        std::vector<int>{}, tight),
                  WorkbenchError);
  // Public randomness above 20 bits is refused outright.
  const std::vector<Value> inputs2(2, Value::Int(0));
  CHECK_THROWS_AS(ExactViewDistribution(CoinSpec(2, 1, 21), inputs2,
                                        std::vector<int>{}),
                  WorkbenchError);
}

// Ideal-sum scaffolding: each party adds 0, e0, or e1 to its input vector.
class VecRandomizer final : public Randomizer {
 public:
  VecRandomizer(uint64_t q, size_t dim) : q_(q), dim_(dim) {}

  int MessageCount(int) const override { return 1; }

  std::vector<Message> SampleRound(const RoundContext& ctx,
                                   RandomStream& rng) const override {
    const uint64_t pick = rng.UniformBelow(5);
    const int branch = pick < 3 ? 0 : (pick == 3 ? 1 : 2);
    return {BranchMessage(ctx, branch)};
  }

  bool Enumerable() const override { return true; }

  std::vector<BranchOutcome> EnumerateRound(
      const RoundContext& ctx) const override {
    return {{Rational(3, 5), {BranchMessage(ctx, 0)}},
            {Rational(1, 5), {BranchMessage(ctx, 1)}},
            {Rational(1, 5), {BranchMessage(ctx, 2)}}};
  }

  std::vector<uint64_t> BranchVector(const RoundContext& ctx,
                                     int branch) const {
    std::vector<uint64_t> coords;
    for (const Value& v : ctx.input->AsSeq()) coords.push_back(v.AsInt());
    if (branch > 0) {
      const size_t axis = static_cast<size_t>(branch - 1);
      coords[axis] = AddMod(coords[axis], 1, q_);
    }
    return coords;
  }

 private:
  Message BranchMessage(const RoundContext& ctx, int branch) const {
    return EncodeVectorMessage(BranchVector(ctx, branch));
  }

  uint64_t q_;
  size_t dim_;
};

Value VecInput(std::vector<uint64_t> coords) {
  std::vector<Value> items;
  for (uint64_t c : coords) items.push_back(Value::Int(c));
  return Value::Seq(std::move(items));
}

using VecDist = std::map<std::vector<uint64_t>, Rational>;

VecDist OracleParty(const std::vector<uint64_t>& input, uint64_t q) {
  VecDist d;
  d[input] += Rational(3, 5);
  for (size_t axis = 0; axis < input.size(); ++axis) {
    std::vector<uint64_t> shifted = input;
    shifted[axis] = AddMod(shifted[axis], 1, q);
    d[shifted] += Rational(1, 5);
  }
  return d;
}

VecDist OracleConvolve(const VecDist& a, const VecDist& b, uint64_t q) {
  VecDist out;
  for (const auto& [va, pa] : a) {
    for (const auto& [vb, pb] : b) {
      std::vector<uint64_t> sum = va;
      AccumulateVector(sum, vb, q);
      out[sum] += pa * pb;
    }
  }
  return out;
}

ProtocolSpec VecSpec(int n, uint64_t q, size_t dim) {
  ProtocolSpec spec;
  spec.n = n;
  spec.public_randomness_bits = 0;
  spec.rounds.push_back(RoundSpec{ChannelKind::kShuffle, 1, {}});
  auto r = std::make_shared<const VecRandomizer>(q, dim);
  spec.randomizers.assign(static_cast<size_t>(n), r);
  spec.analyzer = [](const Bytes&, std::span<const ChannelOutput>) {
    return Value::Bottom();
  };
  return spec;
}

TEST_CASE("ideal-sum views convolve the honest parties exactly") {
  const uint64_t q = 5;
  const size_t dim = 2;
  const ProtocolSpec spec = VecSpec(3, q, dim);
  const std::vector<std::vector<uint64_t>> raw = {{1, 2}, {0, 4}, {3, 3}};
  const std::vector<Value> inputs = {VecInput(raw[0]), VecInput(raw[1]),
                                     VecInput(raw[2])};
  EnumerateOptions options;
  options.ideal_sum = true;
  options.q = q;
  options.dim = dim;

  SUBCASE("eavesdropper sees only the total") {
    const FiniteDistribution dist =
        ExactViewDistribution(spec, inputs, std::vector<int>{}, options);
    VecDist want = OracleParty(raw[0], q);
    want = OracleConvolve(want, OracleParty(raw[1], q), q);
    want = OracleConvolve(want, OracleParty(raw[2], q), q);

    FiniteDistribution expected;
    for (const auto& [total, mass] : want) {
      CoalitionView view;
      view.channel_outputs.push_back(
          ChannelOutput{ChannelKind::kShuffle, {EncodeVectorMessage(total)}, 0});
      expected.Add(view.Encode(), mass);
    }
    CHECK(dist == expected);
  }

  SUBCASE("a coalition member keeps its branch index") {
    const FiniteDistribution dist =
        ExactViewDistribution(spec, inputs, std::vector<int>{1}, options);
    const VecDist honest =
        OracleConvolve(OracleParty(raw[0], q), OracleParty(raw[2], q), q);
    const VecRandomizer vr(q, dim);
    RoundContext ctx;
    Bytes w;
    ctx.w = &w;
    ctx.input = &inputs[1];
    FiniteDistribution expected;
    const Rational probs[3] = {Rational(3, 5), Rational(1, 5), Rational(1, 5)};
    for (int b = 0; b < 3; ++b) {
      const std::vector<uint64_t> mine = vr.BranchVector(ctx, b);
      for (const auto& [vh, ph] : honest) {
        std::vector<uint64_t> total = mine;
        AccumulateVector(total, vh, q);
        CoalitionView view;
        view.members = {1};
        view.inputs = {inputs[1]};
        view.randomness = {{{static_cast<uint64_t>(b)}}};
        view.channel_outputs.push_back(ChannelOutput{
            ChannelKind::kShuffle, {EncodeVectorMessage(total)}, 0});
        expected.Add(view.Encode(), probs[b] * ph);
      }
    }
    CHECK(dist == expected);
  }

  SUBCASE("the ideal-sum sampler agrees with the exact support") {
    const FiniteDistribution exact =
        ExactViewDistribution(spec, inputs, std::vector<int>{1}, options);
    ViewSampler sampler(spec, inputs, std::vector<int>{1}, options);
    for (uint64_t seed = 0; seed < 200; ++seed) {
      CHECK(exact.MassOf(sampler.Sample(seed)) > 0);
    }
  }
}

TEST_CASE("ideal-sum mode validates its parameters") {
  const ProtocolSpec spec = VecSpec(2, 5, 1);
  const std::vector<Value> inputs = {VecInput({0}), VecInput({1})};
  EnumerateOptions options;
  options.ideal_sum = true;
  options.q = 0;
  options.dim = 1;
  CHECK_THROWS_AS(
      ExactViewDistribution(spec, inputs, std::vector<int>{}, options),
      WorkbenchError);

  // A round with two messages per party cannot be treated as an ideal sum.
  ProtocolSpec wide = spec;
  wide.rounds[0].messages_per_party = 2;
  options.q = 5;
  CHECK_THROWS_AS(
      ExactViewDistribution(wide, inputs, std::vector<int>{}, options),
      WorkbenchError);
}

}  // namespace
}  // namespace shuffledp

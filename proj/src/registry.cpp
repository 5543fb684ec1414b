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

#include "registry.hpp"

#include <map>
#include <memory>
#include <string>

#include "codec.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "value.hpp"

namespace shuffledp {

namespace {

class ConstantRandomizer final : public Randomizer {
 public:
  int MessageCount(int) const override { return 1; }

  std::vector<Message> SampleRound(const RoundContext&,
                                   RandomStream&) const override {
    return {Message(1, '\x00')};
  }

  bool Enumerable() const override { return true; }

  std::vector<BranchOutcome> EnumerateRound(const RoundContext&) const override {
    return {{Rational(1), {Message(1, '\x00')}}};
  }
};

class RandomizedResponseRandomizer final : public Randomizer {
 public:
  RandomizedResponseRandomizer(uint64_t domain_size, uint64_t keep_num,
                               uint64_t keep_den)
      : domain_size_(domain_size), keep_num_(keep_num), keep_den_(keep_den) {}

  int MessageCount(int) const override { return 1; }

  std::vector<Message> SampleRound(const RoundContext& ctx,
                                   RandomStream& rng) const override {
    const uint64_t x = CheckedInput(ctx);
    uint64_t sent = x;
    if (!rng.Bernoulli(keep_num_, keep_den_)) {
      const uint64_t other = rng.UniformBelow(domain_size_ - 1);
      sent = other < x ? other : other + 1;
    }
    return {EncodeReport(sent)};
  }

  bool Enumerable() const override { return true; }

  std::vector<BranchOutcome> EnumerateRound(
      const RoundContext& ctx) const override {
    const uint64_t x = CheckedInput(ctx);
    const Rational keep = MakeRational(keep_num_, keep_den_);
    const Rational other =
        (1 - keep) / Rational(static_cast<unsigned long>(domain_size_ - 1));
    std::vector<BranchOutcome> branches;
    for (uint64_t v = 0; v < domain_size_; ++v) {
      branches.push_back({v == x ? keep : other, {EncodeReport(v)}});
    }
    return branches;
  }

 private:
  uint64_t CheckedInput(const RoundContext& ctx) const {
    const uint64_t x = ctx.input->AsInt();
    if (x >= domain_size_) {
      throw ConfigError("randomized response: input " + std::to_string(x) +
                        " outside domain of size " +
                        std::to_string(domain_size_));
    }
    return x;
  }

  static Message EncodeReport(uint64_t v) {
    Message m;
    codec::PutUvarint(m, v);
    return m;
  }

  uint64_t domain_size_;
  uint64_t keep_num_;
  uint64_t keep_den_;
};

}  // namespace

const std::vector<RegistryEntry>& ProtocolRegistry() {
  static const std::vector<RegistryEntry> entries = {
      {"constant",
       "input-ignoring baseline; every party sends one fixed byte",
       {true, false, true}},
      {"randomized-response",
       "each party keeps its value w.p. keep, else a uniform other value",
       {true, true, true}},
      {"split-sum",
       "vector summation over Z_q via zero-sum additive shares",
       {true, true, true}},
      {"secure-message",
       "one-round pairwise message transmission hidden in shuffled key bits",
       {true, true, true}},
      {"common-prelude",
       "one-round common element via a noisy zero-coordinate vector sum",
       {true, true, true}},
      {"common-two-round",
       "public-channel histogram peak, then a half-rate shuffle of the peak's "
       "holders",
       {true, true, false}},
      {"nested-one-round",
       "one-round nested common element over the |X| x |Y| cell grid",
       {true, true, true}},
      {"nested-two-round",
       "two chained common-element stages: x-parties first, then y-entries "
       "at the agreed index",
       {true, true, false}},
  };
  return entries;
}

const RegistryEntry* FindProtocol(const std::string& name) {
  for (const RegistryEntry& entry : ProtocolRegistry()) {
    if (entry.name == name) return &entry;
  }
  return nullptr;
}

std::string RegistryNamesJoined() {
  std::string out;
  for (const RegistryEntry& entry : ProtocolRegistry()) {
    if (!out.empty()) out += ", ";
    out += entry.name;
  }
  return out;
}

ProtocolSpec ConstantSpec(int n) {
  if (n < 1) throw ConfigError("constant: need at least 1 party");
  ProtocolSpec spec;
  spec.n = n;
  spec.rounds = {RoundSpec{ChannelKind::kShuffle, 1, {}}};
  spec.randomizers.assign(static_cast<size_t>(n),
                          std::make_shared<const ConstantRandomizer>());
  spec.analyzer = [](const Bytes&, std::span<const ChannelOutput>) {
    return Value::Int(0);
  };
  return spec;
}

ProtocolSpec RandomizedResponseSpec(int n, uint64_t domain_size,
                                    uint64_t keep_num, uint64_t keep_den) {
  if (n < 1) throw ConfigError("randomized response: need at least 1 party");
  if (domain_size < 2) {
    throw ConfigError("randomized response: domain needs 2+ values");
  }
  if (keep_num == 0 || keep_den == 0 || keep_num >= keep_den) {
    throw ConfigError("randomized response: keep probability must lie in "
                      "(0, 1) as num/den");
  }
  ProtocolSpec spec;
  spec.n = n;
  spec.rounds = {RoundSpec{ChannelKind::kShuffle, 1, {}}};
  spec.randomizers.assign(
      static_cast<size_t>(n),
      std::make_shared<const RandomizedResponseRandomizer>(
          domain_size, keep_num, keep_den));
  spec.analyzer = [](const Bytes&, std::span<const ChannelOutput> outs) {
    std::map<uint64_t, uint64_t> counts;
    for (const Message& m : outs[0].messages) {
      codec::Reader r(m);
      const uint64_t v = r.Uvarint();
      r.ExpectDone("report");
      ++counts[v];
    }
    uint64_t best = 0;
    uint64_t best_count = 0;
    for (const auto& [v, count] : counts) {
      if (count > best_count) {
        best = v;
        best_count = count;
      }
    }
    return best_count == 0 ? Value::Bottom() : Value::Int(best);
  };
  return spec;
}

}  // namespace shuffledp

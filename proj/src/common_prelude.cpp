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

#include "common_prelude.hpp"

#include <map>
#include <memory>
#include <string>
#include <utility>

#include "errors.hpp"
#include "group.hpp"
#include "share_split.hpp"

namespace shuffledp {

namespace {

// All assignments of the listed coordinates over [0, q), other coordinates
// untouched. fn sees the scratch vector by reference.
template <typename Fn>
void ForEachAssignment(std::vector<uint64_t>& z,
                       std::span<const size_t> coords, uint64_t q, Fn&& fn) {
  if (coords.empty()) {
    fn(z);
    return;
  }
  std::vector<uint64_t> odo(coords.size(), 0);
  for (;;) {
    for (size_t j = 0; j < coords.size(); ++j) z[coords[j]] = odo[j];
    fn(z);
    size_t j = 0;
    while (j < coords.size() && ++odo[j] == q) {
      odo[j] = 0;
      ++j;
    }
    if (j == coords.size()) break;
  }
}

uint64_t CheckedInput(const Value& input, uint64_t domain_size) {
  const int64_t raw = input.AsInt();
  if (raw < 0 || static_cast<uint64_t>(raw) >= domain_size) {
    throw ConfigError("common element: input " + std::to_string(raw) +
                      " outside domain of size " + std::to_string(domain_size));
  }
  return static_cast<uint64_t>(raw);
}

Value UniqueZeroCoordinate(std::span<const uint64_t> z) {
  Value found = Value::Bottom();
  for (size_t coord = 0; coord < z.size(); ++coord) {
    if (z[coord] != 0) continue;
    if (found.kind() != Value::Kind::kBottom) return Value::Bottom();
    found = Value::Int(static_cast<int64_t>(coord));
  }
  return found;
}

class IdealRandomizer final : public Randomizer {
 public:
  explicit IdealRandomizer(CommonPreludeParams params) : params_(params) {}

  int MessageCount(int) const override { return 1; }

  std::vector<Message> SampleRound(const RoundContext& ctx,
                                   RandomStream& rng) const override {
    const uint64_t x = CheckedInput(*ctx.input, params_.domain_size);
    return {EncodeVectorMessage(DrawContribution(x, params_, rng).z)};
  }

  bool Enumerable() const override { return true; }

  std::vector<BranchOutcome> EnumerateRound(
      const RoundContext& ctx) const override {
    const uint64_t x = CheckedInput(*ctx.input, params_.domain_size);
    const size_t dim = params_.domain_size;

    mpz_class qz(static_cast<unsigned long>(params_.q));
    mpz_class q_pow_all, q_pow_rest;
    mpz_pow_ui(q_pow_all.get_mpz_t(), qz.get_mpz_t(), dim);
    mpz_pow_ui(q_pow_rest.get_mpz_t(), qz.get_mpz_t(), dim - 1);
    if (q_pow_all > 2'000'000) {
      throw BudgetError("common element: branch enumeration needs " +
                        q_pow_all.get_str() + " vectors, budget is 2*10^6");
    }

    const Rational participate = MakeRational(3, 4);
    const Rational noise =
        MakeRational(1, 6 * static_cast<uint64_t>(params_.n));
    Rational p_zero_own = participate * (1 - noise) / Rational(q_pow_rest);
    Rational p_noisy_own = participate * noise / Rational(q_pow_all);

    // Accumulate by encoded message: the all-zero vector collects the idle
    // branch too, and zero-own-coordinate vectors collect both own-branch
    // outcomes. Distinct coin paths with equal vectors are indistinguishable
    // downstream, so merging is sound for views.
    std::map<Bytes, Rational> acc;
    std::vector<uint64_t> z(dim, 0);
    acc[EncodeVectorMessage(z)] = MakeRational(1, 4);

    std::vector<size_t> rest;
    for (size_t coord = 0; coord < dim; ++coord) {
      if (coord != x) rest.push_back(coord);
    }
    z.assign(dim, 0);
    ForEachAssignment(z, rest, params_.q, [&](std::vector<uint64_t>& v) {
      acc[EncodeVectorMessage(v)] += p_zero_own;
    });
    std::vector<size_t> all(dim);
    for (size_t coord = 0; coord < dim; ++coord) all[coord] = coord;
    z.assign(dim, 0);
    ForEachAssignment(z, all, params_.q, [&](std::vector<uint64_t>& v) {
      acc[EncodeVectorMessage(v)] += p_noisy_own;
    });

    std::vector<BranchOutcome> branches;
    branches.reserve(acc.size());
    for (auto& [message, prob] : acc) {
      branches.push_back({std::move(prob), {message}});
    }
    return branches;
  }

 private:
  CommonPreludeParams params_;
};

class ShareRandomizer final : public Randomizer {
 public:
  ShareRandomizer(CommonPreludeParams params, int ell)
      : params_(params), ell_(ell) {}

  int MessageCount(int) const override {
    return static_cast<int>(params_.domain_size) * ell_;
  }

  std::vector<Message> SampleRound(const RoundContext& ctx,
                                   RandomStream& rng) const override {
    const uint64_t x = CheckedInput(*ctx.input, params_.domain_size);
    const ContributionDraw draw = DrawContribution(x, params_, rng);
    std::vector<Message> out;
    out.reserve(draw.z.size() * static_cast<size_t>(ell_));
    for (size_t coord = 0; coord < draw.z.size(); ++coord) {
      for (uint64_t share :
           SplitIntoShares(draw.z[coord], params_.q, ell_, rng)) {
        out.push_back(EncodeShareMessage(coord, share));
      }
    }
    return out;
  }

 private:
  CommonPreludeParams params_;
  int ell_;
};

std::vector<uint64_t> SumWholeVectors(const ChannelOutput& channel, uint64_t q,
                                      size_t dim) {
  std::vector<uint64_t> total(dim, 0);
  for (const Message& message : channel.messages) {
    AccumulateVector(total, DecodeVectorMessage(message, dim), q);
  }
  return total;
}

}  // namespace

void ValidateCommonPreludeParams(const CommonPreludeParams& params) {
  if (params.n <= 2) {
    throw ConfigError("common element: need more than 2 parties");
  }
  if (params.domain_size == 0) {
    throw ConfigError("common element: empty input domain");
  }
  if (params.q < 2) throw ConfigError("common element: group needs 2+ elements");
  if (!params.allow_small_group && params.q < 16 * params.domain_size) {
    throw ConfigError(
        "common element: the success guarantee needs q >= 16 * domain size; "
        "pass allow_small_group for audit-scale runs");
  }
}

ContributionDraw DrawContribution(uint64_t x, const CommonPreludeParams& params,
                                  RandomStream& rng) {
  ContributionDraw draw;
  draw.z.assign(params.domain_size, 0);
  draw.participate = rng.Bernoulli(3, 4);
  if (!draw.participate) return draw;
  draw.noise = rng.Bernoulli(1, 6 * static_cast<uint64_t>(params.n));
  for (uint64_t coord = 0; coord < params.domain_size; ++coord) {
    if (coord == x && !draw.noise) continue;  // own coordinate stays zero
    draw.z[coord] = UniformGroupElement(rng, params.q);
  }
  return draw;
}

ProtocolSpec CommonPreludeIdealSpec(const CommonPreludeParams& params) {
  ValidateCommonPreludeParams(params);
  ProtocolSpec spec;
  spec.n = params.n;
  spec.rounds = {RoundSpec{ChannelKind::kShuffle, 1, {}}};
  auto randomizer = std::make_shared<IdealRandomizer>(params);
  spec.randomizers.assign(static_cast<size_t>(params.n), randomizer);
  const uint64_t q = params.q;
  const size_t dim = params.domain_size;
  spec.analyzer = [q, dim](const Bytes&, std::span<const ChannelOutput> outs) {
    return UniqueZeroCoordinate(SumWholeVectors(outs[0], q, dim));
  };
  return spec;
}

ProtocolSpec CommonPreludeShareSpec(const CommonPreludeParams& params) {
  ValidateCommonPreludeParams(params);
  const int ell = DefaultShareCount(params.q, static_cast<uint64_t>(params.n),
                                    params.sigma);
  ProtocolSpec spec;
  spec.n = params.n;
  spec.rounds = {RoundSpec{ChannelKind::kShuffle,
                           static_cast<int>(params.domain_size) * ell,
                           {}}};
  auto randomizer = std::make_shared<ShareRandomizer>(params, ell);
  spec.randomizers.assign(static_cast<size_t>(params.n), randomizer);
  const uint64_t q = params.q;
  const size_t dim = params.domain_size;
  spec.analyzer = [q, dim](const Bytes&, std::span<const ChannelOutput> outs) {
    return UniqueZeroCoordinate(SumSharesFromChannel(outs[0], q, dim));
  };
  return spec;
}

ElementTrial RunCommonPreludeTrial(const CommonPreludeParams& params,
                                   uint64_t common_input, uint64_t seed) {
  const ProtocolSpec spec = CommonPreludeIdealSpec(params);
  const std::vector<Value> inputs(
      static_cast<size_t>(params.n),
      Value::Int(static_cast<int64_t>(common_input)));
  const Transcript transcript = RunProtocol(spec, inputs, seed);

  ElementTrial trial;
  trial.outcome = ClassifyElementOutcome(transcript.outcome, inputs[0]);
  if (trial.outcome.Success()) return trial;

  bool anyone = false;
  bool noise = false;
  for (int i = 0; i < params.n; ++i) {
    RandomStream rng = PartyStream(seed, i, 0);
    const ContributionDraw draw = DrawContribution(common_input, params, rng);
    anyone = anyone || draw.participate;
    noise = noise || draw.noise;
  }
  if (!anyone) {
    trial.failure = ElementFailure::kNobodyParticipated;
  } else if (noise) {
    trial.failure = ElementFailure::kNoiseFired;
  } else {
    trial.failure = ElementFailure::kAccidentalZero;
  }
  return trial;
}

}  // namespace shuffledp

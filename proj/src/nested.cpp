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

#include "nested.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "errors.hpp"
#include "group.hpp"
#include "share_split.hpp"

namespace shuffledp {

namespace {

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

uint64_t CheckedXInput(const Value& input, const NestedParams& params) {
  const uint64_t x = input.AsInt();
  if (x >= params.x_size) {
    throw ConfigError("nested: x-input " + std::to_string(x) +
                      " outside domain of size " +
                      std::to_string(params.x_size));
  }
  return x;
}

std::vector<uint64_t> CheckedYVector(const Value& input,
                                     const NestedParams& params) {
  const std::vector<Value>& seq = input.AsSeq();
  if (seq.size() != params.x_size) {
    throw ConfigError("nested: y-vector has " + std::to_string(seq.size()) +
                      " entries, want one per x-index (" +
                      std::to_string(params.x_size) + ")");
  }
  std::vector<uint64_t> out(seq.size());
  for (size_t x = 0; x < seq.size(); ++x) {
    out[x] = seq[x].AsInt();
    if (out[x] >= params.y_size) {
      throw ConfigError("nested: y-entry " + std::to_string(out[x]) +
                        " outside domain of size " +
                        std::to_string(params.y_size));
    }
  }
  return out;
}

// Unique zero cell (x, y) of the summed grid answers y; anything else is an
// abstention.
Value UniqueZeroCell(std::span<const uint64_t> z, uint64_t y_size) {
  size_t zero_cell = 0;
  bool seen = false;
  for (size_t cell = 0; cell < z.size(); ++cell) {
    if (z[cell] != 0) continue;
    if (seen) return Value::Bottom();
    zero_cell = cell;
    seen = true;
  }
  if (!seen) return Value::Bottom();
  return Value::Int(static_cast<uint64_t>(zero_cell % y_size));
}

// Shared branch-probability pieces for both party kinds. `skipped` lists
// the cells that stay zero in the no-noise branch.
std::vector<BranchOutcome> EnumerateGridBranches(
    const NestedParams& params, std::span<const size_t> skipped) {
  const size_t dim =
      static_cast<size_t>(params.x_size) * static_cast<size_t>(params.y_size);

  mpz_class qz(static_cast<unsigned long>(params.q));
  mpz_class q_pow_all, q_pow_rest;
  mpz_pow_ui(q_pow_all.get_mpz_t(), qz.get_mpz_t(), dim);
  mpz_pow_ui(q_pow_rest.get_mpz_t(), qz.get_mpz_t(), dim - skipped.size());
  if (q_pow_all > 2'000'000) {
    throw BudgetError("nested: branch enumeration needs " +
                      q_pow_all.get_str() + " grids, budget is 2*10^6");
  }

  const Rational participate = MakeRational(3, 4);
  const Rational noise = MakeRational(1, 6 * static_cast<uint64_t>(params.n));
  Rational p_quiet = participate * (1 - noise) / Rational(q_pow_rest);
  Rational p_noisy = participate * noise / Rational(q_pow_all);

  // Merge by encoded grid; distinct coin paths with equal messages are
  // indistinguishable downstream.
  std::map<Bytes, Rational> acc;
  std::vector<uint64_t> z(dim, 0);
  acc[EncodeVectorMessage(z)] = MakeRational(1, 4);

  std::vector<size_t> rest;
  std::vector<bool> skip(dim, false);
  for (size_t cell : skipped) skip[cell] = true;
  for (size_t cell = 0; cell < dim; ++cell) {
    if (!skip[cell]) rest.push_back(cell);
  }
  z.assign(dim, 0);
  ForEachAssignment(z, rest, params.q, [&](std::vector<uint64_t>& v) {
    acc[EncodeVectorMessage(v)] += p_quiet;
  });
  std::vector<size_t> all(dim);
  for (size_t cell = 0; cell < dim; ++cell) all[cell] = cell;
  z.assign(dim, 0);
  ForEachAssignment(z, all, params.q, [&](std::vector<uint64_t>& v) {
    acc[EncodeVectorMessage(v)] += p_noisy;
  });

  std::vector<BranchOutcome> branches;
  branches.reserve(acc.size());
  for (auto& [message, prob] : acc) {
    branches.push_back({std::move(prob), {message}});
  }
  return branches;
}

NestedDraw DrawGridContribution(const NestedParams& params,
                                std::span<const char> own,
                                RandomStream& rng) {
  const size_t dim = own.size();
  NestedDraw draw;
  draw.z.assign(dim, 0);
  draw.participate = rng.Bernoulli(3, 4);
  if (!draw.participate) return draw;
  draw.noise = rng.Bernoulli(1, 6 * static_cast<uint64_t>(params.n));
  for (size_t cell = 0; cell < dim; ++cell) {
    if (own[cell] && !draw.noise) continue;  // own cells stay zero
    draw.z[cell] = UniformGroupElement(rng, params.q);
  }
  return draw;
}

class XPartyRandomizer final : public Randomizer {
 public:
  explicit XPartyRandomizer(NestedParams params) : params_(params) {}

  int MessageCount(int) const override { return 1; }

  std::vector<Message> SampleRound(const RoundContext& ctx,
                                   RandomStream& rng) const override {
    const uint64_t x = CheckedXInput(*ctx.input, params_);
    return {EncodeVectorMessage(DrawXContribution(x, params_, rng).z)};
  }

  bool Enumerable() const override { return true; }

  std::vector<BranchOutcome> EnumerateRound(
      const RoundContext& ctx) const override {
    const uint64_t x = CheckedXInput(*ctx.input, params_);
    std::vector<size_t> own;
    for (uint64_t y = 0; y < params_.y_size; ++y) {
      own.push_back(static_cast<size_t>(x * params_.y_size + y));
    }
    return EnumerateGridBranches(params_, own);
  }

 private:
  NestedParams params_;
};

class YPartyRandomizer final : public Randomizer {
 public:
  explicit YPartyRandomizer(NestedParams params) : params_(params) {}

  int MessageCount(int) const override { return 1; }

  std::vector<Message> SampleRound(const RoundContext& ctx,
                                   RandomStream& rng) const override {
    const std::vector<uint64_t> y_vec = CheckedYVector(*ctx.input, params_);
    return {EncodeVectorMessage(DrawYContribution(y_vec, params_, rng).z)};
  }

  bool Enumerable() const override { return true; }

  std::vector<BranchOutcome> EnumerateRound(
      const RoundContext& ctx) const override {
    const std::vector<uint64_t> y_vec = CheckedYVector(*ctx.input, params_);
    std::vector<size_t> own;
    for (uint64_t x = 0; x < params_.x_size; ++x) {
      own.push_back(static_cast<size_t>(x * params_.y_size + y_vec[x]));
    }
    return EnumerateGridBranches(params_, own);
  }

 private:
  NestedParams params_;
};

std::vector<uint64_t> SumWholeVectors(const ChannelOutput& channel, uint64_t q,
                                      size_t dim) {
  std::vector<uint64_t> total(dim, 0);
  for (const Message& message : channel.messages) {
    AccumulateVector(total, DecodeVectorMessage(message, dim), q);
  }
  return total;
}

std::vector<std::shared_ptr<const Randomizer>> NestedRandomizers(
    const NestedParams& params) {
  const int x_count = NestedXPartyCount(params);
  auto x_role = std::make_shared<const XPartyRandomizer>(params);
  auto y_role = std::make_shared<const YPartyRandomizer>(params);
  std::vector<std::shared_ptr<const Randomizer>> out;
  out.reserve(static_cast<size_t>(params.n));
  for (int i = 0; i < params.n; ++i) {
    out.push_back(i < x_count
                      ? std::static_pointer_cast<const Randomizer>(x_role)
                      : std::static_pointer_cast<const Randomizer>(y_role));
  }
  return out;
}

}  // namespace

int NestedXPartyCount(const NestedParams& params) {
  // floor(alpha * n); the nudge keeps exact fractions like 1/3 * 24 from
  // landing one below the integer they name.
  return static_cast<int>(
      std::floor(params.alpha * static_cast<double>(params.n) + 1e-9));
}

void ValidateNestedParams(const NestedParams& params) {
  if (params.n < 2) throw ConfigError("nested: need at least 2 parties");
  if (!(params.alpha > 0.0) || !(params.alpha < 1.0)) {
    throw ConfigError("nested: alpha must lie in (0, 1)");
  }
  if (params.x_size == 0 || params.y_size == 0) {
    throw ConfigError("nested: empty input domain");
  }
  if (params.x_size * params.y_size > (uint64_t{1} << 40)) {
    throw ConfigError("nested: cell grid too large");
  }
  if (params.q < 2) throw ConfigError("nested: group needs 2+ elements");
  const int x_count = NestedXPartyCount(params);
  if (x_count < 1 || x_count >= params.n) {
    throw ConfigError("nested: party split leaves one side empty");
  }
  if (!params.allow_small_group) {
    if (params.q < 16 * params.x_size * params.y_size) {
      throw ConfigError(
          "nested: the success guarantee needs q >= 16|X||Y|; pass "
          "allow_small_group for audit-scale runs");
    }
    const double need = 6.0 * std::max(1.0 / params.alpha,
                                       1.0 / (1.0 - params.alpha));
    if (static_cast<double>(params.n) + 1e-9 < need) {
      throw ConfigError(
          "nested: the success guarantee needs n >= 6*max(1/alpha, "
          "1/(1-alpha)); pass allow_small_group for audit-scale runs");
    }
  }
}

NestedInputs MakeNestedInstance(const NestedParams& params, uint64_t x_common,
                                std::span<const uint64_t> y_of_x) {
  if (x_common >= params.x_size) {
    throw ConfigError("nested: common index outside the x-domain");
  }
  if (y_of_x.size() != params.x_size) {
    throw ConfigError("nested: instance vector has " +
                      std::to_string(y_of_x.size()) +
                      " entries, want one per x-index");
  }
  for (uint64_t y : y_of_x) {
    if (y >= params.y_size) {
      throw ConfigError("nested: instance entry outside the y-domain");
    }
  }
  const int x_count = NestedXPartyCount(params);
  NestedInputs inputs;
  inputs.x_inputs.assign(static_cast<size_t>(x_count), x_common);
  inputs.y_inputs.assign(static_cast<size_t>(params.n - x_count),
                         std::vector<uint64_t>(y_of_x.begin(), y_of_x.end()));
  return inputs;
}

std::vector<Value> NestedInputValues(const NestedParams& params,
                                     const NestedInputs& inputs) {
  const int x_count = NestedXPartyCount(params);
  if (inputs.x_inputs.size() != static_cast<size_t>(x_count) ||
      inputs.y_inputs.size() != static_cast<size_t>(params.n - x_count)) {
    throw ConfigError("nested: input counts do not match the party split");
  }
  std::vector<Value> values;
  values.reserve(static_cast<size_t>(params.n));
  for (uint64_t x : inputs.x_inputs) values.push_back(Value::Int(x));
  for (const std::vector<uint64_t>& y_vec : inputs.y_inputs) {
    std::vector<Value> seq;
    seq.reserve(y_vec.size());
    for (uint64_t y : y_vec) seq.push_back(Value::Int(y));
    values.push_back(Value::Seq(std::move(seq)));
  }
  return values;
}

NestedDraw DrawXContribution(uint64_t x, const NestedParams& params,
                             RandomStream& rng) {
  const size_t dim =
      static_cast<size_t>(params.x_size) * static_cast<size_t>(params.y_size);
  std::vector<char> own(dim, 0);
  for (uint64_t y = 0; y < params.y_size; ++y) {
    own[static_cast<size_t>(x * params.y_size + y)] = 1;
  }
  return DrawGridContribution(params, own, rng);
}

NestedDraw DrawYContribution(std::span<const uint64_t> y_vec,
                             const NestedParams& params, RandomStream& rng) {
  const size_t dim =
      static_cast<size_t>(params.x_size) * static_cast<size_t>(params.y_size);
  std::vector<char> own(dim, 0);
  for (uint64_t x = 0; x < params.x_size; ++x) {
    own[static_cast<size_t>(x * params.y_size + y_vec[x])] = 1;
  }
  return DrawGridContribution(params, own, rng);
}

ProtocolSpec NestedOneRoundIdealSpec(const NestedParams& params) {
  ValidateNestedParams(params);
  ProtocolSpec spec;
  spec.n = params.n;
  spec.rounds = {RoundSpec{ChannelKind::kShuffle, 1, {}}};
  spec.randomizers = NestedRandomizers(params);
  const uint64_t q = params.q;
  const uint64_t y_size = params.y_size;
  const size_t dim =
      static_cast<size_t>(params.x_size) * static_cast<size_t>(params.y_size);
  spec.analyzer = [q, y_size, dim](const Bytes&,
                                   std::span<const ChannelOutput> outs) {
    return UniqueZeroCell(SumWholeVectors(outs[0], q, dim), y_size);
  };
  return spec;
}

ProtocolSpec NestedOneRoundShareSpec(const NestedParams& params) {
  ValidateNestedParams(params);
  const int ell = DefaultShareCount(params.q, static_cast<uint64_t>(params.n),
                                    params.sigma);
  const size_t dim =
      static_cast<size_t>(params.x_size) * static_cast<size_t>(params.y_size);
  ProtocolSpec spec;
  spec.n = params.n;
  spec.rounds = {
      RoundSpec{ChannelKind::kShuffle, static_cast<int>(dim) * ell, {}}};

  struct ShareWrap final : Randomizer {
    std::shared_ptr<const Randomizer> inner;
    NestedParams params;
    int ell = 0;
    size_t dim = 0;

    int MessageCount(int) const override {
      return static_cast<int>(dim) * ell;
    }

    std::vector<Message> SampleRound(const RoundContext& ctx,
                                     RandomStream& rng) const override {
      const std::vector<Message> whole = inner->SampleRound(ctx, rng);
      const std::vector<uint64_t> z = DecodeVectorMessage(whole.at(0), dim);
      std::vector<Message> out;
      out.reserve(dim * static_cast<size_t>(ell));
      for (size_t cell = 0; cell < dim; ++cell) {
        for (uint64_t share :
             SplitIntoShares(z[cell], params.q, ell, rng)) {
          out.push_back(EncodeShareMessage(cell, share));
        }
      }
      return out;
    }
  };

  for (const std::shared_ptr<const Randomizer>& role :
       NestedRandomizers(params)) {
    auto wrap = std::make_shared<ShareWrap>();
    wrap->inner = role;
    wrap->params = params;
    wrap->ell = ell;
    wrap->dim = dim;
    spec.randomizers.push_back(std::move(wrap));
  }
  const uint64_t q = params.q;
  const uint64_t y_size = params.y_size;
  spec.analyzer = [q, y_size, dim](const Bytes&,
                                   std::span<const ChannelOutput> outs) {
    return UniqueZeroCell(SumSharesFromChannel(outs[0], q, dim), y_size);
  };
  return spec;
}

ElementTrial RunNestedOneRoundTrial(const NestedParams& params,
                                    uint64_t x_common,
                                    std::span<const uint64_t> y_of_x,
                                    uint64_t seed) {
  const ProtocolSpec spec = NestedOneRoundIdealSpec(params);
  const NestedInputs instance = MakeNestedInstance(params, x_common, y_of_x);
  const std::vector<Value> inputs = NestedInputValues(params, instance);
  const Transcript transcript = RunProtocol(spec, inputs, seed);
  const Value expected = Value::Int(y_of_x[x_common]);

  ElementTrial trial;
  trial.outcome = ClassifyElementOutcome(transcript.outcome, expected);
  if (trial.outcome.Success()) return trial;

  const int x_count = NestedXPartyCount(params);
  bool any_x = false;
  bool any_y = false;
  bool noise = false;
  for (int i = 0; i < params.n; ++i) {
    RandomStream rng = PartyStream(seed, i, 0);
    NestedDraw draw;
    if (i < x_count) {
      draw = DrawXContribution(x_common, params, rng);
      any_x = any_x || draw.participate;
    } else {
      draw = DrawYContribution(y_of_x, params, rng);
      any_y = any_y || draw.participate;
    }
    noise = noise || draw.noise;
  }
  if (!any_x || !any_y) {
    trial.failure = ElementFailure::kNobodyParticipated;
  } else if (noise) {
    trial.failure = ElementFailure::kNoiseFired;
  } else {
    trial.failure = ElementFailure::kAccidentalZero;
  }
  return trial;
}

NestedTwoRoundResult RunNestedTwoRound(const NestedTwoRoundParams& params,
                                       const NestedInputs& inputs,
                                       uint64_t seed,
                                       const StageFactory& factory) {
  NestedParams split;
  split.n = params.n;
  split.alpha = params.alpha;
  split.x_size = params.x_size;
  split.y_size = params.y_size;
  split.q = 2;  // unused by the two-round path
  split.allow_small_group = true;
  ValidateNestedParams(split);
  const int x_count = NestedXPartyCount(split);
  const int y_count = params.n - x_count;
  if (inputs.x_inputs.size() != static_cast<size_t>(x_count) ||
      inputs.y_inputs.size() != static_cast<size_t>(y_count)) {
    throw ConfigError("nested: input counts do not match the party split");
  }
  for (uint64_t x : inputs.x_inputs) {
    if (x >= params.x_size) {
      throw ConfigError("nested: x-input outside the domain");
    }
  }
  for (const std::vector<uint64_t>& y_vec : inputs.y_inputs) {
    if (y_vec.size() != params.x_size) {
      throw ConfigError("nested: y-vector length does not match |X|");
    }
    for (uint64_t y : y_vec) {
      if (y >= params.y_size) {
        throw ConfigError("nested: y-entry outside the domain");
      }
    }
  }

  StageFactory build = factory;
  if (!build) {
    build = [&params](int, int parties, uint64_t domain_size,
                      std::span<const uint64_t> stage_inputs) {
      CommonTwoRoundParams stage;
      stage.n = parties;
      stage.domain_size = domain_size;
      stage.eps = params.eps;
      stage.delta = params.delta;
      stage.range_cap = params.range_cap;
      HistogramBackend backend;
      if (params.injected_exact) {
        backend.kind = HistogramBackend::Kind::kExactCounts;
        backend.true_inputs.assign(stage_inputs.begin(), stage_inputs.end());
      }
      return CommonTwoRoundSpec(stage, backend);
    };
  }

  NestedTwoRoundResult result;
  result.stage1 = Value::Bottom();
  result.stage2 = Value::Bottom();

  const ProtocolSpec stage1 =
      build(1, x_count, params.x_size, inputs.x_inputs);
  std::vector<Value> stage1_inputs;
  stage1_inputs.reserve(inputs.x_inputs.size());
  for (uint64_t x : inputs.x_inputs) stage1_inputs.push_back(Value::Int(x));
  result.stage1 =
      RunProtocol(stage1, stage1_inputs, DeriveTrialSeed(seed, 1)).outcome;
  if (result.stage1.kind() != Value::Kind::kInt) {
    result.stage1 = Value::Bottom();
    return result;
  }
  const uint64_t x0 = result.stage1.AsInt();
  if (x0 >= params.x_size) {
    throw InternalError("nested: stage 1 answered outside the x-domain");
  }

  std::vector<uint64_t> column;
  column.reserve(inputs.y_inputs.size());
  for (const std::vector<uint64_t>& y_vec : inputs.y_inputs) {
    column.push_back(y_vec[x0]);
  }
  const ProtocolSpec stage2 = build(2, y_count, params.y_size, column);
  std::vector<Value> stage2_inputs;
  stage2_inputs.reserve(column.size());
  for (uint64_t y : column) stage2_inputs.push_back(Value::Int(y));
  result.stage2 =
      RunProtocol(stage2, stage2_inputs, DeriveTrialSeed(seed, 2)).outcome;
  return result;
}

ElementOutcome RunNestedTwoRoundTrial(const NestedTwoRoundParams& params,
                                      uint64_t x_common,
                                      std::span<const uint64_t> y_of_x,
                                      uint64_t seed) {
  NestedParams split;
  split.n = params.n;
  split.alpha = params.alpha;
  split.x_size = params.x_size;
  split.y_size = params.y_size;
  split.q = 2;
  split.allow_small_group = true;
  const NestedInputs instance = MakeNestedInstance(split, x_common, y_of_x);
  const NestedTwoRoundResult result =
      RunNestedTwoRound(params, instance, seed);
  return ClassifyElementOutcome(result.stage2,
                                Value::Int(y_of_x[x_common]));
}

}  // namespace shuffledp

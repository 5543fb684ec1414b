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

#include "common_two_round.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "codec.hpp"
#include "errors.hpp"
#include "frequency_oracle.hpp"
#include "hashing.hpp"
#include "rng.hpp"

namespace shuffledp {
namespace {

constexpr uint8_t kTagSignBit = 0x05;
constexpr uint8_t kTagElement = 0x06;
constexpr uint8_t kTagAbstain = 0x07;

Message EncodeSignBit(int sign) {
  Message m;
  codec::PutU8(m, kTagSignBit);
  codec::PutU8(m, sign > 0 ? 1 : 0);
  return m;
}

int DecodeSignBit(const Message& m) {
  codec::Reader r(m);
  if (r.U8() != kTagSignBit) {
    throw InternalError("common two round: round 1 message has a foreign tag");
  }
  const uint8_t bit = r.U8();
  r.ExpectDone("sign bit");
  if (bit > 1) throw InternalError("common two round: malformed sign bit");
  return bit == 1 ? 1 : -1;
}

Message EncodeElement(uint64_t x) {
  Message m;
  codec::PutU8(m, kTagElement);
  codec::PutUvarint(m, x);
  return m;
}

Message EncodeAbstain() {
  Message m;
  codec::PutU8(m, kTagAbstain);
  return m;
}

// True with *x set for an element message, false for an abstention.
bool DecodeRound2(const Message& m, uint64_t* x) {
  codec::Reader r(m);
  const uint8_t tag = r.U8();
  if (tag == kTagAbstain) {
    r.ExpectDone("abstention");
    return false;
  }
  if (tag != kTagElement) {
    throw InternalError("common two round: round 2 message has a foreign tag");
  }
  *x = r.Uvarint();
  r.ExpectDone("element");
  return true;
}

// Everything the parties and the analyzer share in one run. The oracle and
// the peak are functions of the public randomness (and the first round's
// output), so they are cached per run; RunProtocol is sequential, which
// keeps the plain mutable members safe.
struct Runtime {
  CommonTwoRoundParams params;
  HistogramBackend backend;
  uint64_t range = 0;

  mutable bool oracle_ready = false;
  mutable Bytes oracle_w;
  mutable AffineHash input_hash;
  mutable std::optional<FrequencyOracle> oracle;
  mutable std::vector<uint64_t> candidates;

  mutable bool selection_ready = false;
  mutable Bytes selection_w;
  mutable uint64_t selection_digest = 0;
  mutable PeakSelection selection;

  void EnsureOracle(const Bytes& w) const {
    if (oracle_ready && oracle_w == w) return;
    oracle_ready = false;
    selection_ready = false;
    const uint64_t w_seed = DecodePublicRandomness(w);
    RandomStream hash_stream =
        DeriveStream(w_seed, kStreamPublicRandomness, 1, 0);
    input_hash = SampleAffineHash(hash_stream, params.domain_size, range);
    RandomStream oracle_stream =
        DeriveStream(w_seed, kStreamPublicRandomness, 2, 0);
    oracle.emplace(static_cast<size_t>(params.n), range, params.eps,
                   oracle_stream);
    std::vector<uint64_t> image(params.domain_size);
    for (uint64_t x = 0; x < params.domain_size; ++x) {
      image[x] = input_hash.Eval(x);
    }
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    candidates = ArgmaxCandidates(
        range, params.full_range_argmax ? params.candidate_cap : 0, image);
    oracle_w = w;
    oracle_ready = true;
  }

  uint64_t Bucket(const Bytes& w, uint64_t x) const {
    EnsureOracle(w);
    return input_hash.Eval(x);
  }

  PeakSelection ComputeSelection(const Bytes& w,
                                 const ChannelOutput& round1) const {
    PeakSelection out;
    switch (backend.kind) {
      case HistogramBackend::Kind::kReal: {
        EnsureOracle(w);
        if (round1.kind != ChannelKind::kPublic ||
            round1.messages.size() != static_cast<size_t>(params.n)) {
          throw InternalError(
              "common two round: round 1 output has the wrong shape");
        }
        std::vector<int> reports(round1.messages.size());
        for (size_t i = 0; i < reports.size(); ++i) {
          reports[i] = DecodeSignBit(round1.messages[i]);
        }
        const FrequencyOracle::Peak peak =
            oracle->Argmax(reports, candidates);
        out.bucket = peak.value;
        out.estimate = peak.estimate;
        out.found = peak.estimate >= 0.98 * static_cast<double>(params.n);
        return out;
      }
      case HistogramBackend::Kind::kExactCounts: {
        EnsureOracle(w);
        std::map<uint64_t, uint64_t> counts;
        for (uint64_t input : backend.true_inputs) {
          ++counts[input_hash.Eval(input)];
        }
        uint64_t best_bucket = 0;
        uint64_t best_count = 0;
        for (const auto& [bucket, count] : counts) {
          if (count > best_count) {
            best_bucket = bucket;
            best_count = count;
          }
        }
        out.bucket = best_bucket;
        out.estimate = static_cast<double>(best_count);
        // 100 * count >= 98 * n, kept in integers so the threshold is exact.
        out.found =
            100 * best_count >= 98 * static_cast<uint64_t>(params.n);
        return out;
      }
      case HistogramBackend::Kind::kTable: {
        uint64_t best_bucket = 0;
        double best_estimate = 0.0;
        bool first = true;
        for (const auto& [bucket, estimate] : backend.table) {
          if (first || estimate > best_estimate) {
            best_bucket = bucket;
            best_estimate = estimate;
            first = false;
          }
        }
        out.bucket = best_bucket;
        out.estimate = first ? 0.0 : best_estimate;
        out.found =
            !first && best_estimate >= 0.98 * static_cast<double>(params.n);
        return out;
      }
    }
    throw InternalError("common two round: unknown histogram backend");
  }

  const PeakSelection& Selection(const Bytes& w,
                                 const ChannelOutput& round1) const {
    if (selection_ready && selection_w == w &&
        selection_digest == round1.digest) {
      return selection;
    }
    selection = ComputeSelection(w, round1);
    selection_w = w;
    selection_digest = round1.digest;
    selection_ready = true;
    return selection;
  }
};

uint64_t InputIndex(const RoundContext& ctx, uint64_t domain_size) {
  const uint64_t x = ctx.input->AsInt();
  if (x >= domain_size) {
    throw ConfigError("common two round: party " + std::to_string(ctx.party) +
                      " holds input " + std::to_string(x) +
                      " outside the domain of size " +
                      std::to_string(domain_size));
  }
  return x;
}

class CommonTwoRoundRandomizer final : public Randomizer {
 public:
  explicit CommonTwoRoundRandomizer(std::shared_ptr<const Runtime> runtime)
      : runtime_(std::move(runtime)) {}

  int MessageCount(int) const override { return 1; }

  std::vector<Message> SampleRound(const RoundContext& ctx,
                                   RandomStream& rng) const override {
    const uint64_t x = InputIndex(ctx, runtime_->params.domain_size);
    if (ctx.round == 0) {
      const uint64_t bucket = runtime_->Bucket(*ctx.w, x);
      const int sign = runtime_->oracle->Respond(
          static_cast<size_t>(ctx.party), bucket, rng);
      return {EncodeSignBit(sign)};
    }
    if (ctx.round != 1) {
      throw InternalError("common two round: unexpected round " +
                          std::to_string(ctx.round));
    }
    const PeakSelection& sel = runtime_->Selection(*ctx.w, ctx.history[0]);
    if (!sel.found) return {EncodeAbstain()};
    if (runtime_->Bucket(*ctx.w, x) != sel.bucket) return {EncodeAbstain()};
    if (!rng.Bernoulli(1, 2)) return {EncodeAbstain()};
    return {EncodeElement(x)};
  }

 private:
  std::shared_ptr<const Runtime> runtime_;
};

void ValidateBackend(const CommonTwoRoundParams& params,
                     const HistogramBackend& backend, uint64_t range) {
  switch (backend.kind) {
    case HistogramBackend::Kind::kReal:
      return;
    case HistogramBackend::Kind::kExactCounts:
      if (backend.true_inputs.size() != static_cast<size_t>(params.n)) {
        throw ConfigError(
            "common two round: exact-count backend lists " +
            std::to_string(backend.true_inputs.size()) + " inputs for " +
            std::to_string(params.n) + " parties");
      }
      for (uint64_t input : backend.true_inputs) {
        if (input >= params.domain_size) {
          throw ConfigError(
              "common two round: exact-count backend input " +
              std::to_string(input) + " outside the domain of size " +
              std::to_string(params.domain_size));
        }
      }
      return;
    case HistogramBackend::Kind::kTable:
      for (const auto& [bucket, estimate] : backend.table) {
        if (bucket >= range) {
          throw ConfigError("common two round: injected bucket " +
                            std::to_string(bucket) +
                            " outside the hash range " +
                            std::to_string(range));
        }
        if (!std::isfinite(estimate)) {
          throw ConfigError(
              "common two round: injected estimate is not finite");
        }
      }
      return;
  }
  throw ConfigError("common two round: unknown histogram backend");
}

}  // namespace

uint64_t CommonTwoRoundRange(const CommonTwoRoundParams& params) {
  ValidateCommonTwoRoundParams(params);
  const double wanted = std::ceil(static_cast<double>(params.n) *
                                  static_cast<double>(params.n) /
                                  params.delta);
  uint64_t range = params.range_cap;
  if (wanted < static_cast<double>(params.range_cap)) {
    range = static_cast<uint64_t>(wanted);
  }
  return std::max<uint64_t>(range, 1);
}

void ValidateCommonTwoRoundParams(const CommonTwoRoundParams& params) {
  if (params.n < 2) {
    throw ConfigError("common two round: need at least 2 parties");
  }
  if (params.domain_size == 0) {
    throw ConfigError("common two round: empty input domain");
  }
  if (!(params.eps > 0)) {
    throw ConfigError("common two round: eps must be positive");
  }
  if (!(params.delta > 0) || !(params.delta < 1)) {
    throw ConfigError("common two round: delta must lie in (0, 1)");
  }
  if (params.range_cap == 0) {
    throw ConfigError("common two round: range cap must be positive");
  }
  if (params.full_range_argmax && params.range_cap > params.candidate_cap) {
    throw ConfigError(
        "common two round: full-range peak search over more than " +
        std::to_string(params.candidate_cap) +
        " buckets was refused; raise candidate_cap or drop "
        "full_range_argmax");
  }
}

ProtocolSpec CommonTwoRoundSpec(const CommonTwoRoundParams& params,
                                const HistogramBackend& backend) {
  ValidateCommonTwoRoundParams(params);
  auto runtime = std::make_shared<Runtime>();
  runtime->params = params;
  runtime->backend = backend;
  runtime->range = CommonTwoRoundRange(params);
  ValidateBackend(params, backend, runtime->range);

  ProtocolSpec spec;
  spec.n = params.n;
  spec.public_randomness_bits = 64;
  spec.rounds = {RoundSpec{ChannelKind::kPublic, 1, {}},
                 RoundSpec{ChannelKind::kShuffle, 1, {}}};
  auto randomizer =
      std::make_shared<const CommonTwoRoundRandomizer>(runtime);
  spec.randomizers.assign(params.n, randomizer);
  spec.analyzer = [runtime](const Bytes& w,
                            std::span<const ChannelOutput> outputs) -> Value {
    if (outputs.size() != 2) {
      throw InternalError("common two round: analyzer wants 2 rounds, got " +
                          std::to_string(outputs.size()));
    }
    const PeakSelection& sel = runtime->Selection(w, outputs[0]);
    if (!sel.found) return Value::Bottom();
    std::map<uint64_t, uint64_t> counts;
    for (const Message& m : outputs[1].messages) {
      uint64_t x = 0;
      if (DecodeRound2(m, &x)) ++counts[x];
    }
    uint64_t best_x = 0;
    uint64_t best_count = 0;
    for (const auto& [x, count] : counts) {
      if (count > best_count) {
        best_x = x;
        best_count = count;
      }
    }
    if (best_count == 0) return Value::Bottom();
    return Value::Int(best_x);
  };
  return spec;
}

PeakSelection CommonTwoRoundSelection(const CommonTwoRoundParams& params,
                                      const HistogramBackend& backend,
                                      const Bytes& w,
                                      const ChannelOutput& round1) {
  ValidateCommonTwoRoundParams(params);
  Runtime runtime;
  runtime.params = params;
  runtime.backend = backend;
  runtime.range = CommonTwoRoundRange(params);
  ValidateBackend(params, backend, runtime.range);
  return runtime.ComputeSelection(w, round1);
}

}  // namespace shuffledp

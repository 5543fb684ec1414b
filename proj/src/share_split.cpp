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

#include "share_split.hpp"

#include <bit>
#include <cmath>

#include "errors.hpp"
#include "group.hpp"

namespace shuffledp {

int DefaultShareCount(uint64_t q, uint64_t n, int sigma) {
  if (q < 2 || n < 1 || sigma < 0) throw ConfigError("share count: bad parameters");
  int lg_q = std::bit_width(q - 1);
  int lg_n = n <= 1 ? 0 : std::bit_width(n - 1);
  return sigma + lg_q + lg_n;
}

std::vector<uint64_t> SplitIntoShares(uint64_t value, uint64_t q, int ell,
                                      RandomStream& rng) {
  if (q < 2 || value >= q) throw InternalError("share split: value not in group");
  if (ell < 1) throw ConfigError("share split: need at least one share");
  std::vector<uint64_t> shares(ell);
  uint64_t partial = 0;
  for (int s = 0; s + 1 < ell; ++s) {
    shares[s] = rng.UniformBelow(q);
    partial = AddMod(partial, shares[s], q);
  }
  shares[ell - 1] = SubMod(value, partial, q);
  return shares;
}

Message EncodeShareMessage(uint64_t coord, uint64_t share) {
  Message out;
  codec::PutU8(out, kTagShare);
  codec::PutUvarint(out, coord);
  codec::PutUvarint(out, share);
  return out;
}

std::vector<uint64_t> SumSharesFromChannel(const ChannelOutput& channel,
                                           uint64_t q, size_t dim) {
  std::vector<uint64_t> sums(dim, 0);
  for (const Message& m : channel.messages) {
    codec::Reader r(m);
    if (r.U8() != kTagShare) throw InternalError("share sum: unexpected tag");
    uint64_t coord = r.Uvarint();
    uint64_t share = r.Uvarint();
    r.ExpectDone();
    if (coord >= dim || share >= q) throw InternalError("share sum: bad share message");
    sums[coord] = AddMod(sums[coord], share, q);
  }
  return sums;
}

int ShareSumParams::ResolvedShareCount() const {
  return ell > 0 ? ell : DefaultShareCount(q, static_cast<uint64_t>(n), sigma);
}

namespace {

std::vector<uint64_t> VectorInput(const Value& input, int dim, uint64_t q) {
  const auto& seq = input.AsSeq();
  if (static_cast<int>(seq.size()) != dim) {
    throw ConfigError("share sum: input vector has wrong length");
  }
  std::vector<uint64_t> coords;
  coords.reserve(dim);
  for (const Value& v : seq) {
    uint64_t c = v.AsInt();
    if (c >= q) throw ConfigError("share sum: coordinate not in group");
    coords.push_back(c);
  }
  return coords;
}

class ShareSumRandomizer final : public Randomizer {
 public:
  ShareSumRandomizer(uint64_t q, int dim, int ell) : q_(q), dim_(dim), ell_(ell) {}

  int MessageCount(int) const override { return dim_ * ell_; }

  std::vector<Message> SampleRound(const RoundContext& ctx,
                                   RandomStream& rng) const override {
    std::vector<uint64_t> coords = VectorInput(*ctx.input, dim_, q_);
    std::vector<Message> out;
    out.reserve(static_cast<size_t>(dim_) * ell_);
    for (int c = 0; c < dim_; ++c) {
      for (uint64_t share : SplitIntoShares(coords[c], q_, ell_, rng)) {
        out.push_back(EncodeShareMessage(static_cast<uint64_t>(c), share));
      }
    }
    return out;
  }

  bool Enumerable() const override { return true; }

  std::vector<BranchOutcome> EnumerateRound(const RoundContext& ctx) const override {
    std::vector<uint64_t> coords = VectorInput(*ctx.input, dim_, q_);
    // Free shares: ell-1 per coordinate; the final share of each coordinate
    // balances the sum. Branches are ordered lexicographically by the free
    // share tuple.
    size_t free_count = static_cast<size_t>(dim_) * (ell_ - 1);
    double branches_log2 = static_cast<double>(free_count) * std::log2(static_cast<double>(q_));
    if (branches_log2 > 30) {
      throw BudgetError("share sum: enumeration would exceed 2^30 branches");
    }
    Rational unit(1);
    for (size_t i = 0; i < free_count; ++i) unit /= static_cast<unsigned long>(q_);

    std::vector<BranchOutcome> out;
    std::vector<uint64_t> free(free_count, 0);
    bool done = false;
    while (!done) {
      BranchOutcome branch;
      branch.prob = unit;
      branch.messages.reserve(static_cast<size_t>(dim_) * ell_);
      size_t idx = 0;
      for (int c = 0; c < dim_; ++c) {
        uint64_t partial = 0;
        for (int s = 0; s + 1 < ell_; ++s, ++idx) {
          branch.messages.push_back(
              EncodeShareMessage(static_cast<uint64_t>(c), free[idx]));
          partial = AddMod(partial, free[idx], q_);
        }
        branch.messages.push_back(EncodeShareMessage(
            static_cast<uint64_t>(c), SubMod(coords[c], partial, q_)));
      }
      out.push_back(std::move(branch));

      done = true;
      for (size_t pos = free_count; pos-- > 0;) {
        if (++free[pos] < q_) {
          done = false;
          break;
        }
        free[pos] = 0;
      }
    }
    return out;
  }

 private:
  uint64_t q_;
  int dim_;
  int ell_;
};

}  // namespace

ProtocolSpec ShareSumSpec(const ShareSumParams& params) {
  if (params.n < 1 || params.q < 2 || params.dim < 1) {
    throw ConfigError("share sum: bad parameters");
  }
  int ell = params.ResolvedShareCount();
  ProtocolSpec spec;
  spec.n = params.n;
  spec.public_randomness_bits = 0;
  RoundSpec round;
  round.kind = ChannelKind::kShuffle;
  round.messages_per_party = params.dim * ell;
  spec.rounds.push_back(round);
  auto randomizer =
      std::make_shared<const ShareSumRandomizer>(params.q, params.dim, ell);
  spec.randomizers.assign(params.n, randomizer);
  uint64_t q = params.q;
  size_t dim = static_cast<size_t>(params.dim);
  spec.analyzer = [q, dim](const Bytes&, std::span<const ChannelOutput> outputs) {
    std::vector<uint64_t> sums = SumSharesFromChannel(outputs.back(), q, dim);
    std::vector<Value> coords;
    coords.reserve(sums.size());
    for (uint64_t s : sums) coords.push_back(Value::Int(s));
    return Value::Seq(std::move(coords));
  };
  return spec;
}

}  // namespace shuffledp

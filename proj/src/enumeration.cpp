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

#include "enumeration.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "errors.hpp"
#include "codec.hpp"
#include "group.hpp"

namespace shuffledp {
namespace {

void CheckMembers(int n, std::span<const int> members) {
  for (size_t i = 0; i < members.size(); ++i) {
    if (members[i] < 0 || members[i] >= n) {
      throw ConfigError("coalition member " + std::to_string(members[i]) +
                        " out of range for " + std::to_string(n) + " parties");
    }
    if (i > 0 && members[i] <= members[i - 1]) {
      throw ConfigError("coalition members must be sorted and unique");
    }
  }
}

void CheckEnumerable(const ProtocolSpec& spec) {
  for (int i = 0; i < spec.n; ++i) {
    if (!spec.randomizers[i]->Enumerable()) {
      throw ConfigError("exact enumeration requires enumerable randomizers; "
                        "party " +
                        std::to_string(i) + " does not enumerate");
    }
  }
}

void CheckIdealOptions(const ProtocolSpec& spec,
                       const EnumerateOptions& options) {
  if (options.q < 2 || options.dim < 1) {
    throw ConfigError("ideal-sum mode needs a modulus q >= 2 and a positive "
                      "vector dimension");
  }
  for (size_t r = 0; r < spec.rounds.size(); ++r) {
    if (spec.rounds[r].kind != ChannelKind::kShuffle) continue;
    for (int i = 0; i < spec.n; ++i) {
      if (spec.rounds[r].CountFor(i) != 1) {
        throw ConfigError("ideal-sum mode: round " + std::to_string(r) +
                          " must carry exactly one vector message per party");
      }
    }
  }
}

// Shared mechanics of the exact enumerator and the sampler: branch-list
// validation and the ideal-sum channel synthesis.
std::vector<BranchOutcome> ValidatedBranches(const ProtocolSpec& spec,
                                             int party, int round,
                                             const RoundContext& ctx) {
  std::vector<BranchOutcome> list =
      spec.randomizers[party]->EnumerateRound(ctx);
  if (list.empty()) {
    throw InternalError("party " + std::to_string(party) +
                        " enumerated no branches in round " +
                        std::to_string(round));
  }
  const int expected = spec.rounds[round].CountFor(party);
  Rational total = 0;
  for (const BranchOutcome& b : list) {
    if (b.prob <= 0 || b.prob > 1) {
      throw InternalError("party " + std::to_string(party) +
                          " enumerated a branch with probability outside "
                          "(0, 1] in round " +
                          std::to_string(round));
    }
    if (static_cast<int>(b.messages.size()) != expected) {
      throw InternalError("party " + std::to_string(party) + " enumerated " +
                          std::to_string(b.messages.size()) +
                          " messages in round " + std::to_string(round) +
                          ", spec says " + std::to_string(expected));
    }
    total += b.prob;
  }
  if (total != 1) {
    throw InternalError("party " + std::to_string(party) +
                        " branch probabilities sum to " +
                        RationalToString(total) + " in round " +
                        std::to_string(round));
  }
  return list;
}

ChannelOutput IdealSumChannel(const RoundSpec& round,
                              std::span<const std::vector<uint64_t>> vectors,
                              uint64_t q, size_t dim) {
  std::vector<uint64_t> total(dim, 0);
  for (const std::vector<uint64_t>& v : vectors) {
    AccumulateVector(total, v, q);
  }
  ChannelOutput out;
  out.kind = round.kind;
  out.messages = {EncodeVectorMessage(total)};
  return out;
}

using VectorDistribution = std::map<std::vector<uint64_t>, Rational>;

// Exact distribution of one party's round vector, from its branch list.
VectorDistribution BranchVectorDistribution(
    const std::vector<BranchOutcome>& list, uint64_t q, size_t dim) {
  VectorDistribution dist;
  for (const BranchOutcome& b : list) {
    std::vector<uint64_t> v = DecodeVectorMessage(b.messages.at(0), dim);
    for (uint64_t coord : v) {
      if (coord >= q) {
        throw InternalError("ideal-sum mode: vector coordinate " +
                            std::to_string(coord) + " outside [0, q)");
      }
    }
    dist[std::move(v)] += b.prob;
  }
  return dist;
}

VectorDistribution Convolve(const VectorDistribution& a,
                            const VectorDistribution& b, uint64_t q) {
  VectorDistribution out;
  for (const auto& [va, pa] : a) {
    for (const auto& [vb, pb] : b) {
      std::vector<uint64_t> sum = va;
      AccumulateVector(sum, vb, q);
      out[std::move(sum)] += pa * pb;
    }
  }
  return out;
}

class Enumerator {
 public:
  Enumerator(const ProtocolSpec& spec, std::span<const Value> inputs,
             std::span<const int> members, const EnumerateOptions& options)
      : spec_(spec), inputs_(inputs), members_(members), options_(options) {
    histories_.resize(spec.n);
    for (PartyHistory& h : histories_) {
      h.branches.assign(spec.rounds.size(), -1);
    }
    lists_.resize(spec.rounds.size());
    is_member_.assign(spec.n, false);
    for (int m : members) is_member_[m] = true;
  }

  FiniteDistribution Run() {
    const int bits = spec_.public_randomness_bits;
    if (bits > 20) {
      throw BudgetError("exact enumeration over " + std::to_string(bits) +
                        " public randomness bits needs 2^" +
                        std::to_string(bits) +
                        " conditional passes; refusing above 2^20");
    }
    const uint64_t w_count = uint64_t{1} << bits;
    const Rational w_mass = MakeRational(1, w_count);
    for (uint64_t wv = 0; wv < w_count; ++wv) {
      w_ = EncodePublicRandomness(wv, bits);
      Round(0, w_mass);
    }
    dist_.CheckNormalized("exact view distribution");
    return std::move(dist_);
  }

 private:
  void Round(size_t r, const Rational& prob) {
    if (r == spec_.rounds.size()) {
      Leaf(prob);
      return;
    }
    // All parties branch concurrently given the same history.
    std::vector<std::vector<BranchOutcome>>& lists = lists_[r];
    lists.clear();
    lists.reserve(spec_.n);
    for (int i = 0; i < spec_.n; ++i) {
      RoundContext ctx;
      ctx.w = &w_;
      ctx.input = &inputs_[i];
      ctx.party = i;
      ctx.round = static_cast<int>(r);
      ctx.history = channels_;
      ctx.own = &histories_[i];
      lists.push_back(ValidatedBranches(spec_, i, static_cast<int>(r), ctx));
    }
    if (r == 0 && spec_.rounds.size() == 1 && !options_.ideal_sum) {
      // The leaf count is exactly known up front for one-round protocols.
      mpz_class predicted = mpz_class(1) << spec_.public_randomness_bits;
      for (int i = 0; i < spec_.n; ++i) {
        predicted *= static_cast<unsigned long>(lists[i].size());
      }
      if (predicted > options_.leaf_budget) {
        throw BudgetError("exact enumeration needs " +
                          predicted.get_str() + " branches, budget is " +
                          std::to_string(options_.leaf_budget));
      }
    }

    if (options_.ideal_sum &&
        spec_.rounds[r].kind == ChannelKind::kShuffle) {
      IdealRound(r, prob, lists);
    } else {
      FullRound(r, /*party=*/0, prob, lists);
    }
    lists.clear();
  }

  // Odometer over every party's branches; the chosen vectors go through the
  // real channel.
  void FullRound(size_t r, int party, const Rational& prob,
                 std::vector<std::vector<BranchOutcome>>& lists) {
    if (party == spec_.n) {
      std::vector<std::vector<Message>> per_party;
      per_party.reserve(spec_.n);
      for (int i = 0; i < spec_.n; ++i) {
        per_party.push_back(lists[i][picks_[i]].messages);
      }
      ChannelOutput channel =
          spec_.rounds[r].kind == ChannelKind::kShuffle
              ? ShuffleRound(spec_.rounds[r], std::move(per_party))
              : PublicRound(spec_.rounds[r], std::move(per_party));
      PushChannel(r, std::move(channel));
      Round(r + 1, prob);
      PopChannel(r);
      return;
    }
    std::vector<BranchOutcome>& list = lists[party];
    for (size_t b = 0; b < list.size(); ++b) {
      picks_[party] = b;
      histories_[party].branches[r] = static_cast<int>(b);
      histories_[party].sent.push_back(list[b].messages);
      FullRound(r, party + 1, prob * list[b].prob, lists);
      histories_[party].sent.pop_back();
    }
  }

  // Coalition branches enumerated, honest parties convolved into one exact
  // vector-sum distribution.
  void IdealRound(size_t r, const Rational& prob,
                  std::vector<std::vector<BranchOutcome>>& lists) {
    VectorDistribution honest;
    honest[std::vector<uint64_t>(options_.dim, 0)] = 1;
    for (int i = 0; i < spec_.n; ++i) {
      if (is_member_[i]) continue;
      honest = Convolve(
          honest, BranchVectorDistribution(lists[i], options_.q, options_.dim),
          options_.q);
    }
    IdealCoalition(r, /*member_idx=*/0,
                   std::vector<uint64_t>(options_.dim, 0), prob, honest,
                   lists);
  }

  void IdealCoalition(size_t r, size_t member_idx,
                      std::vector<uint64_t> coalition_sum,
                      const Rational& prob, const VectorDistribution& honest,
                      std::vector<std::vector<BranchOutcome>>& lists) {
    if (member_idx == members_.size()) {
      for (const auto& [vh, ph] : honest) {
        std::vector<uint64_t> total = coalition_sum;
        AccumulateVector(total, vh, options_.q);
        ChannelOutput channel;
        channel.kind = ChannelKind::kShuffle;
        channel.messages = {EncodeVectorMessage(total)};
        PushChannel(r, std::move(channel));
        Round(r + 1, prob * ph);
        PopChannel(r);
      }
      return;
    }
    const int i = members_[member_idx];
    std::vector<BranchOutcome>& list = lists[i];
    for (size_t b = 0; b < list.size(); ++b) {
      histories_[i].branches[r] = static_cast<int>(b);
      histories_[i].sent.push_back(list[b].messages);
      std::vector<uint64_t> sum = coalition_sum;
      AccumulateVector(
          sum, DecodeVectorMessage(list[b].messages.at(0), options_.dim),
          options_.q);
      IdealCoalition(r, member_idx + 1, std::move(sum), prob * list[b].prob,
                     honest, lists);
      histories_[i].sent.pop_back();
    }
  }

  void PushChannel(size_t r, ChannelOutput channel) {
    (void)r;
    channels_.push_back(std::move(channel));
  }

  void PopChannel(size_t r) {
    (void)r;
    channels_.pop_back();
  }

  void Leaf(const Rational& prob) {
    leaves_ += 1;
    if (leaves_ > options_.leaf_budget) {
      throw BudgetError("exact enumeration passed its budget of " +
                        std::to_string(options_.leaf_budget) +
                        " branches (at least " + std::to_string(leaves_) +
                        " needed)");
    }
    CoalitionView view;
    view.w = w_;
    view.members.assign(members_.begin(), members_.end());
    view.inputs.reserve(members_.size());
    view.randomness.reserve(members_.size());
    for (int m : members_) {
      view.inputs.push_back(inputs_[m]);
      std::vector<std::vector<uint64_t>> rounds;
      rounds.reserve(spec_.rounds.size());
      for (size_t r = 0; r < spec_.rounds.size(); ++r) {
        rounds.push_back(
            {static_cast<uint64_t>(histories_[m].branches[r])});
      }
      view.randomness.push_back(std::move(rounds));
    }
    view.channel_outputs = channels_;
    dist_.Add(view.Encode(), prob);
  }

  const ProtocolSpec& spec_;
  std::span<const Value> inputs_;
  std::span<const int> members_;
  EnumerateOptions options_;

  Bytes w_;
  std::vector<ChannelOutput> channels_;
  std::vector<PartyHistory> histories_;
  std::vector<std::vector<std::vector<BranchOutcome>>> lists_;
  std::vector<size_t> picks_ = std::vector<size_t>(spec_.n, 0);
  std::vector<bool> is_member_;
  uint64_t leaves_ = 0;
  FiniteDistribution dist_;
};

}  // namespace

FiniteDistribution ExactViewDistribution(const ProtocolSpec& spec,
                                         std::span<const Value> inputs,
                                         std::span<const int> members,
                                         const EnumerateOptions& options) {
  ValidateSpec(spec);
  if (static_cast<int>(inputs.size()) != spec.n) {
    throw ConfigError("enumeration: expected " + std::to_string(spec.n) +
                      " inputs, got " + std::to_string(inputs.size()));
  }
  CheckMembers(spec.n, members);
  CheckEnumerable(spec);
  if (options.ideal_sum) CheckIdealOptions(spec, options);
  Enumerator enumerator(spec, inputs, members, options);
  return enumerator.Run();
}

ViewSampler::ViewSampler(const ProtocolSpec& spec,
                         std::span<const Value> inputs,
                         std::span<const int> members,
                         const EnumerateOptions& options)
    : spec_(spec),
      inputs_(inputs.begin(), inputs.end()),
      members_(members.begin(), members.end()),
      options_(options) {
  ValidateSpec(spec_);
  if (static_cast<int>(inputs_.size()) != spec_.n) {
    throw ConfigError("view sampler: expected " + std::to_string(spec_.n) +
                      " inputs, got " + std::to_string(inputs_.size()));
  }
  CheckMembers(spec_.n, members_);
  CheckEnumerable(spec_);
  if (options_.ideal_sum) CheckIdealOptions(spec_, options_);
}

const std::vector<BranchOutcome>& ViewSampler::Branches(
    int party, int round, const Bytes& history_key, const RoundContext& ctx) {
  Bytes key;
  codec::PutUvarint(key, static_cast<uint64_t>(party));
  codec::PutUvarint(key, static_cast<uint64_t>(round));
  codec::PutBlob(key, history_key);
  auto it = branch_cache_.find(key);
  if (it == branch_cache_.end()) {
    it = branch_cache_
             .emplace(std::move(key), ValidatedBranches(spec_, party, round, ctx))
             .first;
  }
  return it->second;
}

Bytes ViewSampler::Sample(uint64_t seed) {
  const Bytes w = DerivePublicRandomness(seed, spec_.public_randomness_bits);
  std::vector<PartyHistory> histories(spec_.n);
  for (PartyHistory& h : histories) {
    h.branches.assign(spec_.rounds.size(), -1);
  }
  std::vector<ChannelOutput> channels;
  Bytes history_key;

  for (size_t r = 0; r < spec_.rounds.size(); ++r) {
    std::vector<std::vector<Message>> per_party(spec_.n);
    for (int i = 0; i < spec_.n; ++i) {
      RoundContext ctx;
      ctx.w = &w;
      ctx.input = &inputs_[i];
      ctx.party = i;
      ctx.round = static_cast<int>(r);
      ctx.history = channels;
      ctx.own = &histories[i];

      RandomStream rng = PartyStream(seed, i, static_cast<int>(r));
      std::vector<uint64_t> words;
      rng.set_journal(&words);
      per_party[i] = spec_.randomizers[i]->SampleRound(ctx, rng);
      rng.set_journal(nullptr);
      histories[i].words.push_back(std::move(words));

      // Branch index: the unique enumerated branch with this message vector.
      const std::vector<BranchOutcome>& list =
          Branches(i, static_cast<int>(r), history_key, ctx);
      int branch = -1;
      for (size_t b = 0; b < list.size(); ++b) {
        if (list[b].messages == per_party[i]) {
          branch = static_cast<int>(b);
          break;
        }
      }
      if (branch < 0) {
        throw InternalError("party " + std::to_string(i) +
                            " sampled a message vector absent from its "
                            "branch enumeration in round " +
                            std::to_string(r));
      }
      histories[i].branches[r] = branch;
      histories[i].sent.push_back(per_party[i]);
    }

    ChannelOutput channel;
    if (options_.ideal_sum &&
        spec_.rounds[r].kind == ChannelKind::kShuffle) {
      std::vector<std::vector<uint64_t>> vectors;
      vectors.reserve(spec_.n);
      for (int i = 0; i < spec_.n; ++i) {
        vectors.push_back(
            DecodeVectorMessage(per_party[i].at(0), options_.dim));
      }
      channel = IdealSumChannel(spec_.rounds[r], vectors, options_.q,
                                options_.dim);
    } else if (spec_.rounds[r].kind == ChannelKind::kShuffle) {
      channel = ShuffleRound(spec_.rounds[r], std::move(per_party));
    } else {
      channel = PublicRound(spec_.rounds[r], std::move(per_party));
    }
    // Extend the memoization key by this round's canonical channel bytes.
    Bytes channel_bytes;
    codec::PutU8(channel_bytes, static_cast<uint8_t>(channel.kind));
    codec::PutUvarint(channel_bytes, channel.messages.size());
    for (const Message& m : channel.messages) {
      codec::PutBlob(channel_bytes, m);
    }
    codec::PutBlob(history_key, channel_bytes);
    channels.push_back(std::move(channel));
  }

  CoalitionView view;
  view.w = w;
  view.members = members_;
  for (int m : members_) {
    view.inputs.push_back(inputs_[m]);
    std::vector<std::vector<uint64_t>> rounds;
    for (size_t r = 0; r < spec_.rounds.size(); ++r) {
      rounds.push_back({static_cast<uint64_t>(histories[m].branches[r])});
    }
    view.randomness.push_back(std::move(rounds));
  }
  view.channel_outputs = std::move(channels);
  return view.Encode();
}

}  // namespace shuffledp

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

#include "reduction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "codec.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace shuffledp {

namespace {

// Uniform message count across parties for the single shuffle round.
int CheckOneRoundShape(const ProtocolSpec& spec) {
  if (spec.rounds.size() != 1) {
    throw ConfigError("reduction: spec must have exactly one round, has " +
                      std::to_string(spec.rounds.size()));
  }
  if (spec.rounds[0].kind != ChannelKind::kShuffle) {
    throw ConfigError("reduction: the single round must be a shuffle");
  }
  const int ell = spec.rounds[0].CountFor(0);
  for (int j = 1; j < spec.n; ++j) {
    if (spec.rounds[0].CountFor(j) != ell) {
      throw ConfigError(
          "reduction: parties must send the same number of messages");
    }
  }
  if (ell < 1) throw ConfigError("reduction: message count must be positive");
  return ell;
}

Bytes SortedBundleKey(std::vector<Message> bundle) {
  std::sort(bundle.begin(), bundle.end());
  return codec::EncodeSeq(bundle);
}

}  // namespace

LocalRandomizerResult RunLocalRandomizer(const ProtocolSpec& spec, int party,
                                         const Value& input,
                                         std::span<const Value> domain,
                                         uint64_t seed) {
  ValidateSpec(spec);
  const int ell = CheckOneRoundShape(spec);
  if (party < 0 || party >= spec.n) {
    throw ConfigError("reduction: party index out of range");
  }
  if (domain.empty()) {
    throw ConfigError("reduction: uniform input domain is empty");
  }

  LocalRandomizerResult result;
  result.w = DerivePublicRandomness(seed, spec.public_randomness_bits);

  std::vector<Message> pool;
  pool.reserve(static_cast<size_t>(ell) * static_cast<size_t>(spec.n));
  for (int j = 0; j < spec.n; ++j) {
    Value xj;
    if (j == party) {
      xj = input;
    } else {
      RandomStream pick = DeriveStream(seed, kStreamHarness, j, 1);
      xj = domain[pick.UniformBelow(domain.size())];
    }
    PartyHistory history;
    RoundContext ctx;
    ctx.w = &result.w;
    ctx.input = &xj;
    ctx.party = j;
    ctx.round = 0;
    ctx.own = &history;
    RandomStream rng = PartyStream(seed, j, 0);
    std::vector<Message> bundle = spec.randomizers[j]->SampleRound(ctx, rng);
    if (bundle.size() != static_cast<size_t>(ell)) {
      throw InternalError("reduction: party " + std::to_string(j) + " sent " +
                          std::to_string(bundle.size()) + " messages, spec " +
                          "says " + std::to_string(ell));
    }
    if (j == party) {
      result.own_sorted = bundle;
      std::sort(result.own_sorted.begin(), result.own_sorted.end());
    }
    for (auto& msg : bundle) pool.push_back(std::move(msg));
  }

  // Draw ell distinct slots uniformly; a partial shuffle covers both the
  // shuffling and the repetition-free draw.
  RandomStream draw = DeriveStream(seed, kStreamHarness, party, 2);
  std::vector<size_t> slots(pool.size());
  for (size_t s = 0; s < slots.size(); ++s) slots[s] = s;
  for (int t = 0; t < ell; ++t) {
    const size_t rest = slots.size() - static_cast<size_t>(t);
    const size_t pick = static_cast<size_t>(t) + draw.UniformBelow(rest);
    std::swap(slots[static_cast<size_t>(t)], slots[pick]);
    result.selected.push_back(pool[slots[static_cast<size_t>(t)]]);
  }
  std::sort(result.selected.begin(), result.selected.end());
  return result;
}

FiniteDistribution SubsetDrawDistribution(std::span<const Message> pool,
                                          size_t ell) {
  if (ell > pool.size()) {
    throw ConfigError("subset draw: ell exceeds the pool size");
  }
  uint64_t ordered = 1;
  for (size_t t = 0; t < ell; ++t) {
    ordered *= pool.size() - t;
    if (ordered > 1'000'000) {
      throw BudgetError("subset draw: ordered draw count passed 10^6");
    }
  }
  const Rational each = MakeRational(1, ordered);

  std::map<Bytes, Rational> masses;
  std::vector<bool> used(pool.size(), false);
  std::vector<Message> picked;
  auto rec = [&](auto&& self, size_t depth) -> void {
    if (depth == ell) {
      std::vector<Message> sorted = picked;
      std::sort(sorted.begin(), sorted.end());
      masses[codec::EncodeSeq(sorted)] += each;
      return;
    }
    for (size_t s = 0; s < pool.size(); ++s) {
      if (used[s]) continue;
      used[s] = true;
      picked.push_back(pool[s]);
      self(self, depth + 1);
      picked.pop_back();
      used[s] = false;
    }
  };
  rec(rec, 0);

  FiniteDistribution dist;
  for (auto& [outcome, mass] : masses) dist.Add(outcome, mass);
  dist.CheckNormalized("subset draw distribution");
  return dist;
}

double MiReferenceBits(size_t n, size_t ell, double eps, double delta,
                       uint64_t domain_size) {
  if (n == 0 || ell == 0 || domain_size == 0) {
    throw ConfigError("mi reference: n, ell, and domain size must be positive");
  }
  if (delta < 0 || eps < 0) {
    throw ConfigError("mi reference: eps and delta must be nonnegative");
  }
  if (delta > 0 && eps == 0) {
    throw ConfigError("mi reference: delta > 0 needs eps > 0");
  }
  const double en = std::exp(1.0) * static_cast<double>(n);
  double leakage = eps * eps;
  if (delta > 0) {
    leakage += (delta / eps) * std::log2(static_cast<double>(domain_size));
    leakage += (delta / eps) * std::log2(eps / delta);
  }
  return std::pow(en, static_cast<double>(ell)) * leakage +
         static_cast<double>(ell) * std::log2(4.0 * en);
}

MiDiagnostic MeasureMiDiagnostic(const ProtocolSpec& spec, int party,
                                 std::span<const Value> domain, double eps,
                                 double delta) {
  ValidateSpec(spec);
  const int ell = CheckOneRoundShape(spec);
  if (party < 0 || party >= spec.n) {
    throw ConfigError("mi diagnostic: party index out of range");
  }
  if (domain.empty()) throw ConfigError("mi diagnostic: empty input domain");
  const Randomizer& randomizer = *spec.randomizers[party];
  if (!randomizer.Enumerable()) {
    throw ConfigError("mi diagnostic: randomizer for party " +
                      std::to_string(party) + " is not enumerable");
  }
  const int bits = spec.public_randomness_bits;
  if (bits > 20) {
    throw BudgetError("mi diagnostic: public randomness above 20 bits");
  }

  const Rational z_mass = MakeRational(1, domain.size());
  const Rational w_mass = MakeRational(1, uint64_t{1} << bits);

  JointTable table(3);
  std::map<Bytes, uint64_t> bundle_ids;
  for (size_t z = 0; z < domain.size(); ++z) {
    for (uint64_t wv = 0; wv < (uint64_t{1} << bits); ++wv) {
      const Bytes w = EncodePublicRandomness(wv, bits);
      PartyHistory history;
      RoundContext ctx;
      ctx.w = &w;
      ctx.input = &domain[z];
      ctx.party = party;
      ctx.round = 0;
      ctx.own = &history;
      Rational check = 0;
      for (const BranchOutcome& branch : randomizer.EnumerateRound(ctx)) {
        if (branch.messages.size() != static_cast<size_t>(ell)) {
          throw InternalError("mi diagnostic: branch message count mismatch");
        }
        check += branch.prob;
        const Bytes key = SortedBundleKey(branch.messages);
        const auto [it, unused] = bundle_ids.emplace(key, bundle_ids.size());
        const uint64_t point[3] = {it->second, wv, static_cast<uint64_t>(z)};
        table.Add(point, branch.prob * z_mass * w_mass);
      }
      if (check != 1) {
        throw InternalError("mi diagnostic: branch probabilities of party " +
                            std::to_string(party) + " do not sum to 1");
      }
    }
  }
  table.CheckNormalized("mi diagnostic joint");

  MiDiagnostic out;
  const size_t yw[] = {0, 1};
  const size_t zc[] = {2};
  out.measured_bits = MutualInformationBits(table, yw, zc);
  out.n = static_cast<size_t>(spec.n);
  out.ell = static_cast<size_t>(ell);
  out.eps = eps;
  out.delta = delta;
  out.domain_size = domain.size();
  out.reference_bits = MiReferenceBits(out.n, out.ell, eps, delta,
                                       out.domain_size);
  return out;
}

}  // namespace shuffledp

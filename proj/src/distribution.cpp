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

#include "distribution.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace shuffledp {

void FiniteDistribution::Add(const Bytes& outcome, const Rational& mass) {
  if (mass <= 0) {
    throw InternalError("distribution: mass must be positive, got " +
                        RationalToString(mass));
  }
  weights_[outcome] += mass;
}

Rational FiniteDistribution::Total() const {
  Rational total = 0;
  for (const auto& [outcome, mass] : weights_) total += mass;
  return total;
}

void FiniteDistribution::CheckNormalized(const char* what) const {
  Rational total = Total();
  if (total != 1) {
    throw InternalError(std::string(what) + ": masses sum to " +
                        RationalToString(total) + ", expected 1");
  }
}

Rational FiniteDistribution::MassOf(const Bytes& outcome) const {
  auto it = weights_.find(outcome);
  return it == weights_.end() ? Rational(0) : it->second;
}

void FiniteDistribution::Scale(const Rational& factor) {
  if (factor <= 0) {
    throw InternalError("distribution: scale factor must be positive");
  }
  for (auto& [outcome, mass] : weights_) mass *= factor;
}

FiniteDistribution FiniteDistribution::PointMass(const Bytes& outcome) {
  FiniteDistribution d;
  d.Add(outcome, Rational(1));
  return d;
}

FiniteDistribution FiniteDistribution::FromCounts(
    const std::map<Bytes, uint64_t>& counts) {
  uint64_t total = 0;
  for (const auto& [outcome, count] : counts) total += count;
  if (total == 0) {
    throw InternalError("distribution: empty count table");
  }
  FiniteDistribution d;
  for (const auto& [outcome, count] : counts) {
    if (count == 0) continue;
    d.Add(outcome, MakeRational(count, total));
  }
  return d;
}

Rational TotalVariation(const FiniteDistribution& a,
                        const FiniteDistribution& b) {
  a.CheckNormalized("total variation, first argument");
  b.CheckNormalized("total variation, second argument");
  Rational l1 = 0;
  auto ia = a.weights().begin();
  auto ib = b.weights().begin();
  while (ia != a.weights().end() || ib != b.weights().end()) {
    if (ib == b.weights().end() ||
        (ia != a.weights().end() && ia->first < ib->first)) {
      l1 += ia->second;
      ++ia;
    } else if (ia == a.weights().end() || ib->first < ia->first) {
      l1 += ib->second;
      ++ib;
    } else {
      l1 += abs(ia->second - ib->second);
      ++ia;
      ++ib;
    }
  }
  return l1 / 2;
}

namespace {

// Plug-in TV between two count vectors over a shared outcome index space.
double PlugInTv(const std::vector<uint64_t>& c0,
                const std::vector<uint64_t>& c1, uint64_t n0, uint64_t n1) {
  double l1 = 0.0;
  for (size_t i = 0; i < c0.size(); ++i) {
    l1 += std::abs(static_cast<double>(c0[i]) / static_cast<double>(n0) -
                   static_cast<double>(c1[i]) / static_cast<double>(n1));
  }
  return l1 / 2.0;
}

}  // namespace

TvEstimate EstimateTotalVariation(const Sampler& sample0,
                                  const Sampler& sample1, uint64_t trials,
                                  uint64_t seed, uint64_t resamples) {
  if (trials < 1000) {
    throw ConfigError("tv estimate needs at least 1000 trials, got " +
                      std::to_string(trials));
  }
  // Index outcomes so resampling works on flat arrays.
  std::map<Bytes, size_t> index;
  std::vector<uint32_t> draws0, draws1;
  draws0.reserve(trials);
  draws1.reserve(trials);
  for (uint64_t t = 0; t < trials; ++t) {
    for (int side = 0; side < 2; ++side) {
      Bytes outcome = side == 0 ? sample0(t) : sample1(t);
      auto [it, inserted] = index.try_emplace(outcome, index.size());
      (side == 0 ? draws0 : draws1).push_back(
          static_cast<uint32_t>(it->second));
    }
  }
  const size_t k = index.size();
  std::vector<uint64_t> base0(k, 0), base1(k, 0);
  for (uint32_t id : draws0) base0[id] += 1;
  for (uint32_t id : draws1) base1[id] += 1;

  TvEstimate result;
  result.trials = trials;
  result.resamples = resamples;
  result.estimate = PlugInTv(base0, base1, trials, trials);

  RandomStream boot = DeriveStream(seed, kStreamHarness, /*a=*/0xb007,
                                   /*b=*/0);
  std::vector<double> stats;
  stats.reserve(resamples);
  std::vector<uint64_t> r0(k), r1(k);
  for (uint64_t r = 0; r < resamples; ++r) {
    std::fill(r0.begin(), r0.end(), 0);
    std::fill(r1.begin(), r1.end(), 0);
    for (uint64_t t = 0; t < trials; ++t) {
      r0[draws0[boot.UniformBelow(trials)]] += 1;
      r1[draws1[boot.UniformBelow(trials)]] += 1;
    }
    stats.push_back(PlugInTv(r0, r1, trials, trials));
  }
  std::sort(stats.begin(), stats.end());
  const size_t lo_idx = static_cast<size_t>(0.025 * (stats.size() - 1));
  const size_t hi_idx = static_cast<size_t>(0.975 * (stats.size() - 1));
  result.lo = stats[lo_idx];
  result.hi = stats[hi_idx];
  return result;
}

}  // namespace shuffledp

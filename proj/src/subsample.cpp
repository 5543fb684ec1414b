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

#include "subsample.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rng.hpp"

namespace shuffledp {

size_t SubsampleSize(size_t base_n, double eps, double eps_star) {
  if (base_n == 0) throw ConfigError("subsample: base mechanism takes no inputs");
  if (!(eps > 0) || eps > 1) {
    throw ConfigError("subsample: eps must be in (0, 1]");
  }
  if (!(eps_star >= 0)) {
    throw ConfigError("subsample: eps* must be nonnegative");
  }
  const double t = std::ceil(static_cast<double>(base_n) / eps *
                             (3.0 + std::exp(eps_star)));
  if (!(t < 1e12)) throw ConfigError("subsample: required input count overflows");
  return static_cast<size_t>(t);
}

double AmplifiedDeltaBound(double eps, double base_delta, double eps_star) {
  if (!(eps > 0) || eps > 1) {
    throw ConfigError("subsample: eps must be in (0, 1]");
  }
  if (base_delta < 0) throw ConfigError("subsample: negative delta");
  return 4.0 * eps * base_delta / (3.0 + std::exp(eps_star));
}

FiniteDistribution SubsampledOutputDistribution(
    const Mechanism& base, size_t base_n, std::span<const Value> inputs) {
  if (base_n == 0 || base_n > inputs.size()) {
    throw ConfigError("subsample: need at least " + std::to_string(base_n) +
                      " inputs, got " + std::to_string(inputs.size()));
  }
  mpz_class subset_count;
  mpz_bin_uiui(subset_count.get_mpz_t(), inputs.size(), base_n);
  if (subset_count > 1'000'000) {
    throw BudgetError("subsample: " + subset_count.get_str() +
                      " subsets exceed the enumeration budget of 10^6");
  }
  Rational weight(1);
  weight /= Rational(subset_count);

  FiniteDistribution out;
  std::vector<size_t> pick(base_n);
  std::vector<Value> sub(base_n);
  auto rec = [&](auto&& self, size_t depth, size_t from) -> void {
    if (depth == base_n) {
      for (size_t j = 0; j < base_n; ++j) sub[j] = inputs[pick[j]];
      FiniteDistribution piece = base(sub);
      piece.CheckNormalized("subsample: base mechanism output");
      for (const auto& [outcome, mass] : piece.weights()) {
        out.Add(outcome, mass * weight);
      }
      return;
    }
    for (size_t v = from; v + (base_n - depth) <= inputs.size(); ++v) {
      pick[depth] = v;
      self(self, depth + 1, v + 1);
    }
  };
  rec(rec, 0, 0);
  out.CheckNormalized("subsample: mixture output");
  return out;
}

Value RunSubsampled(const MechanismSampler& base, size_t base_n,
                    std::span<const Value> inputs, uint64_t seed) {
  if (base_n == 0 || base_n > inputs.size()) {
    throw ConfigError("subsample: need at least " + std::to_string(base_n) +
                      " inputs, got " + std::to_string(inputs.size()));
  }
  RandomStream pick = DeriveStream(seed, kStreamHarness, 0, 3);
  std::vector<size_t> slots(inputs.size());
  for (size_t s = 0; s < slots.size(); ++s) slots[s] = s;
  for (size_t t = 0; t < base_n; ++t) {
    const size_t j = t + pick.UniformBelow(slots.size() - t);
    std::swap(slots[t], slots[j]);
  }
  slots.resize(base_n);
  std::sort(slots.begin(), slots.end());
  std::vector<Value> sub;
  sub.reserve(base_n);
  for (size_t s : slots) sub.push_back(inputs[s]);
  return base(sub, DeriveTrialSeed(seed, 0x5542));
}

Mechanism KRandomizedResponse(uint64_t k, const Rational& keep) {
  if (k < 2) throw ConfigError("randomized response: domain needs 2+ values");
  if (!(keep > Rational(1, k)) || !(keep < 1)) {
    throw ConfigError("randomized response: keep probability outside (1/k, 1)");
  }
  return [k, keep](std::span<const Value> inputs) {
    if (inputs.size() != 1) {
      throw ConfigError("randomized response: exactly one input expected");
    }
    const uint64_t x = static_cast<uint64_t>(inputs[0].AsInt());
    if (x >= k) throw ConfigError("randomized response: input outside domain");
    Rational other = (1 - keep) / Rational(k - 1);
    FiniteDistribution out;
    for (uint64_t v = 0; v < k; ++v) {
      out.Add(Value::Int(static_cast<int64_t>(v)).Encode(),
              v == x ? keep : other);
    }
    return out;
  };
}

MechanismSampler KRandomizedResponseSampler(uint64_t k, uint64_t keep_num,
                                            uint64_t keep_den) {
  if (k < 2) throw ConfigError("randomized response: domain needs 2+ values");
  if (keep_den == 0 || keep_num >= keep_den || keep_num * k <= keep_den) {
    throw ConfigError("randomized response: keep probability outside (1/k, 1)");
  }
  return [k, keep_num, keep_den](std::span<const Value> inputs, uint64_t seed) {
    if (inputs.size() != 1) {
      throw ConfigError("randomized response: exactly one input expected");
    }
    const uint64_t x = static_cast<uint64_t>(inputs[0].AsInt());
    if (x >= k) throw ConfigError("randomized response: input outside domain");
    RandomStream rng = DeriveStream(seed, kStreamParty, 0, 0);
    if (rng.Bernoulli(keep_num, keep_den)) return Value::Int(x);
    const uint64_t other = rng.UniformBelow(k - 1);
    return Value::Int(other < x ? other : other + 1);
  };
}

}  // namespace shuffledp

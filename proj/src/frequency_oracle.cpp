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

#include "frequency_oracle.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"

namespace shuffledp {

double FrequencyOracleBias(double eps) {
  if (!(eps > 0)) {
    throw ConfigError("frequency oracle: eps must be positive");
  }
  // Written as 1 / (1 + e^-eps) to stay accurate for large eps.
  return 1.0 / (1.0 + std::exp(-eps));
}

FrequencyOracle::FrequencyOracle(size_t parties, uint64_t domain_size,
                                 double eps, RandomStream& hash_stream)
    : domain_size_(domain_size), eps_(eps) {
  if (parties == 0) throw ConfigError("frequency oracle: no parties");
  if (domain_size == 0) throw ConfigError("frequency oracle: empty domain");
  bias_ = FrequencyOracleBias(eps);
  scale_ = (std::exp(eps) + 1.0) / (std::exp(eps) - 1.0);
  hashes_.reserve(parties);
  // All hashes share one modulus; searching for the prime once keeps
  // construction linear in the number of parties.
  hashes_.push_back(SampleAffineHash(hash_stream, domain_size, 2));
  for (size_t i = 1; i < parties; ++i) {
    AffineHash h = hashes_.front();
    h.a = hash_stream.UniformBelow(h.p);
    h.b = hash_stream.UniformBelow(h.p);
    hashes_.push_back(h);
  }
}

int FrequencyOracle::Respond(size_t party, uint64_t value,
                             RandomStream& rng) const {
  if (value >= domain_size_) {
    throw ConfigError("frequency oracle: value " + std::to_string(value) +
                      " outside domain of size " +
                      std::to_string(domain_size_));
  }
  const int sign = hashes_.at(party).SignAt(value);
  return rng.BernoulliReal(bias_) ? sign : -sign;
}

double FrequencyOracle::Query(std::span<const int> reports, uint64_t y) const {
  if (reports.size() != hashes_.size()) {
    throw ConfigError("frequency oracle: report count " +
                      std::to_string(reports.size()) + " does not match " +
                      std::to_string(hashes_.size()) + " parties");
  }
  if (y >= domain_size_) {
    throw ConfigError("frequency oracle: query outside the domain");
  }
  long long sum = 0;
  for (size_t i = 0; i < reports.size(); ++i) {
    sum += static_cast<long long>(reports[i]) * hashes_[i].SignAt(y);
  }
  return scale_ * static_cast<double>(sum);
}

FrequencyOracle::Peak FrequencyOracle::Argmax(
    std::span<const int> reports, std::span<const uint64_t> candidates) const {
  if (candidates.empty()) {
    throw ConfigError("frequency oracle: empty candidate list");
  }
  Peak best;
  bool first = true;
  for (uint64_t y : candidates) {
    const double estimate = Query(reports, y);
    // Strict comparisons keep the smallest value among exact ties; the
    // candidate order does not matter beyond that.
    if (first || estimate > best.estimate ||
        (estimate == best.estimate && y < best.value)) {
      best.value = y;
      best.estimate = estimate;
      first = false;
    }
  }
  return best;
}

std::vector<uint64_t> ArgmaxCandidates(uint64_t domain_size,
                                       uint64_t full_range_cap,
                                       std::span<const uint64_t> fallback) {
  if (domain_size <= full_range_cap) {
    std::vector<uint64_t> all(domain_size);
    for (uint64_t y = 0; y < domain_size; ++y) all[y] = y;
    return all;
  }
  if (fallback.empty()) {
    throw ConfigError(
        "frequency oracle: domain too large for a full-range argmax and no "
        "candidate list was supplied");
  }
  return std::vector<uint64_t>(fallback.begin(), fallback.end());
}

}  // namespace shuffledp

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
//
// Locally private histogram over a finite domain. Party i holds a public
// sign hash h_i and reports c_i = r_i * h_i(x_i), where r_i = +1 with
// probability e^eps / (e^eps + 1). Any value's count is estimated from the
// reports as D(y) = (e^eps + 1)/(e^eps - 1) * sum_i c_i * h_i(y), which is
// unbiased because the sign hashes decorrelate y from every x_i != y.
//
// The per-report likelihood ratio is e^eps by the choice of the flip
// probability; sampling realizes that probability through a 64-bit uniform
// threshold, so each drawn report is within 2^-64 of the designed bias.

#ifndef SHUFFLEDP_FREQUENCY_ORACLE_HPP_
#define SHUFFLEDP_FREQUENCY_ORACLE_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "hashing.hpp"
#include "rng.hpp"

namespace shuffledp {

// Designed probability of reporting the true sign: e^eps / (e^eps + 1).
double FrequencyOracleBias(double eps);

class FrequencyOracle {
 public:
  // Hashes are drawn from the given stream, which the callers derive from
  // public randomness so that every participant reconstructs the same
  // oracle.
  FrequencyOracle(size_t parties, uint64_t domain_size, double eps,
                  RandomStream& hash_stream);

  size_t parties() const { return hashes_.size(); }
  uint64_t domain_size() const { return domain_size_; }
  double eps() const { return eps_; }
  const AffineHash& hash(size_t party) const { return hashes_.at(party); }

  // The +1/-1 report of one party, consuming that party's stream.
  int Respond(size_t party, uint64_t value, RandomStream& rng) const;

  // Debiased count estimate for y from all reports.
  double Query(std::span<const int> reports, uint64_t y) const;

  struct Peak {
    uint64_t value = 0;
    double estimate = 0.0;
  };

  // Largest estimate over the candidate list; ties keep the smallest value.
  // Candidates must be nonempty.
  Peak Argmax(std::span<const int> reports,
              std::span<const uint64_t> candidates) const;

 private:
  uint64_t domain_size_ = 0;
  double eps_ = 0.0;
  double bias_ = 0.0;   // e^eps / (e^eps + 1)
  double scale_ = 0.0;  // (e^eps + 1) / (e^eps - 1)
  std::vector<AffineHash> hashes_;
};

// Candidate list for an argmax query: the full domain when it has at most
// `full_range_cap` values, otherwise the supplied fallback (which must then
// be nonempty).
std::vector<uint64_t> ArgmaxCandidates(uint64_t domain_size,
                                       uint64_t full_range_cap,
                                       std::span<const uint64_t> fallback);

}  // namespace shuffledp

#endif  // SHUFFLEDP_FREQUENCY_ORACLE_HPP_

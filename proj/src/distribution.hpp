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
// Finite probability distributions over opaque byte-encoded outcomes, with
// exact rational masses. Empirical frequency tables use the same type:
// count/total is a rational too, so normalization is exact in both modes.

#ifndef SHUFFLEDP_DISTRIBUTION_HPP_
#define SHUFFLEDP_DISTRIBUTION_HPP_

#include <cstdint>
#include <functional>
#include <map>

#include "codec.hpp"
#include "rational.hpp"

namespace shuffledp {

class FiniteDistribution {
 public:
  FiniteDistribution() = default;

  // Accumulates mass on an outcome; mass must be positive.
  void Add(const Bytes& outcome, const Rational& mass);

  const std::map<Bytes, Rational>& weights() const { return weights_; }
  size_t Size() const { return weights_.size(); }

  Rational Total() const;
  bool IsNormalized() const { return Total() == 1; }
  // Throws WorkbenchError(kInternal) naming `what` unless the total is 1.
  void CheckNormalized(const char* what) const;

  // Zero when the outcome is absent.
  Rational MassOf(const Bytes& outcome) const;

  void Scale(const Rational& factor);

  bool operator==(const FiniteDistribution&) const = default;

  static FiniteDistribution PointMass(const Bytes& outcome);
  static FiniteDistribution FromCounts(
      const std::map<Bytes, uint64_t>& counts);

 private:
  std::map<Bytes, Rational> weights_;
};

// Exact total variation distance: half the L1 distance between the mass
// functions. Both arguments must be normalized.
Rational TotalVariation(const FiniteDistribution& a,
                        const FiniteDistribution& b);

// Empirical total-variation estimate with a bootstrap percentile interval.
// The plug-in estimate between two empirical frequency tables is biased
// upward for close distributions; this is a diagnostic, not a bound.
struct TvEstimate {
  double estimate = 0.0;
  double lo = 0.0;  // 2.5th percentile over bootstrap resamples
  double hi = 0.0;  // 97.5th percentile
  uint64_t trials = 0;
  uint64_t resamples = 0;
};

// A sampler must be a deterministic function of its trial index.
using Sampler = std::function<Bytes(uint64_t trial)>;

TvEstimate EstimateTotalVariation(const Sampler& sample0,
                                  const Sampler& sample1, uint64_t trials,
                                  uint64_t seed, uint64_t resamples = 1000);

}  // namespace shuffledp

#endif  // SHUFFLEDP_DISTRIBUTION_HPP_

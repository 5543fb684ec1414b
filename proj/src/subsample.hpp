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
// Privacy amplification by subsampling: a mechanism rated (eps*, delta) on
// n inputs is run on a uniform size-n subset of t = ceil((n/eps)(3+e^eps*))
// supplied inputs, and the wrapped mechanism is claimed
// (eps, 4 eps delta / (3+e^eps*))-private.
//
// The subset is part of the mechanism's secret randomness, so the wrapper
// is modeled directly at the output-distribution level rather than as a
// multi-party protocol round (per-party randomness there is independent,
// and the channel's public string would leak the subset).

#ifndef SHUFFLEDP_SUBSAMPLE_HPP_
#define SHUFFLEDP_SUBSAMPLE_HPP_

#include <cstdint>
#include <functional>
#include <span>

#include "distribution.hpp"
#include "rational.hpp"
#include "value.hpp"

namespace shuffledp {

// Exact output distribution of a mechanism on a concrete input tuple,
// outcomes in a canonical byte encoding.
using Mechanism =
    std::function<FiniteDistribution(std::span<const Value> inputs)>;

// One sampled output; must be deterministic in the seed.
using MechanismSampler =
    std::function<Value(std::span<const Value> inputs, uint64_t seed)>;

// t = ceil((base_n / eps) * (3 + e^eps_star)); eps must be in (0, 1].
size_t SubsampleSize(size_t base_n, double eps, double eps_star);

// The claimed post-amplification delta: 4 * eps * base_delta / (3+e^eps_star).
double AmplifiedDeltaBound(double eps, double base_delta, double eps_star);

// Mixture over all size-base_n subsets of the inputs, uniformly weighted.
// The subset keeps the original input order. Refuses more than 10^6
// subsets.
FiniteDistribution SubsampledOutputDistribution(const Mechanism& base,
                                                size_t base_n,
                                                std::span<const Value> inputs);

// Sampling counterpart: draws the subset from the seed, then runs the base
// sampler on a derived seed.
Value RunSubsampled(const MechanismSampler& base, size_t base_n,
                    std::span<const Value> inputs, uint64_t seed);

// k-ary randomized response on one input from {0..k-1}: report the truth
// with probability keep, otherwise one of the other k-1 values uniformly.
// Rated eps* = ln(keep (k-1) / (1-keep)) with zero delta. keep must be in
// (1/k, 1) for a positive eps*.
Mechanism KRandomizedResponse(uint64_t k, const Rational& keep);
MechanismSampler KRandomizedResponseSampler(uint64_t k, uint64_t keep_num,
                                            uint64_t keep_den);

}  // namespace shuffledp

#endif  // SHUFFLEDP_SUBSAMPLE_HPP_

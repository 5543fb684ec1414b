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
// Single-input mechanism carved out of a one-round protocol: party i runs on
// its true input, every other party runs on a uniformly drawn input, the
// combined messages are shuffled, and a uniform size-ell subset is returned
// (sorted) together with the public randomness. The marginal of (own sorted
// bundle, public randomness, input) is that of a real protocol run, which
// makes single-input information analyses transferable to the protocol.

#ifndef SHUFFLEDP_REDUCTION_HPP_
#define SHUFFLEDP_REDUCTION_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "distribution.hpp"
#include "information.hpp"
#include "model.hpp"
#include "value.hpp"

namespace shuffledp {

struct LocalRandomizerResult {
  Bytes w;
  std::vector<Message> selected;    // sorted, one party's worth of messages
  std::vector<Message> own_sorted;  // party i's actual bundle, sorted
};

// spec must have exactly one round, a shuffle, with the same message count
// for every party. domain is the uniform input pool for the other parties.
LocalRandomizerResult RunLocalRandomizer(const ProtocolSpec& spec, int party,
                                         const Value& input,
                                         std::span<const Value> domain,
                                         uint64_t seed);

// Exact distribution of drawing `ell` slots without repetition from the
// pool and reporting the drawn messages in sorted order. Outcomes are
// encoded with EncodeSeq over the sorted draw. Refuses pools whose ordered
// draw count exceeds a fixed budget.
FiniteDistribution SubsetDrawDistribution(std::span<const Message> pool,
                                          size_t ell);

struct MiDiagnostic {
  double measured_bits = 0.0;
  double reference_bits = 0.0;
  // The reference has a unit constant in front of an asymptotic bound, so
  // the comparison is informational only and never a pass/fail gate.
  bool binding = false;
  size_t n = 0;
  size_t ell = 0;
  double eps = 0.0;
  double delta = 0.0;
  uint64_t domain_size = 0;
};

// Unit-constant reference: (e n)^ell (eps^2 + (delta/eps) log2|X| +
// (delta/eps) log2(eps/delta)) + ell log2(4 e n). delta = 0 drops the middle
// terms; delta > 0 requires eps > 0.
double MiReferenceBits(size_t n, size_t ell, double eps, double delta,
                       uint64_t domain_size);

// Exact I(own sorted bundle, public randomness; input) for party i of a
// one-round spec with an enumerable randomizer, the input uniform over the
// domain. eps/delta parametrize the reference value only.
MiDiagnostic MeasureMiDiagnostic(const ProtocolSpec& spec, int party,
                                 std::span<const Value> domain, double eps,
                                 double delta);

}  // namespace shuffledp

#endif  // SHUFFLEDP_REDUCTION_HPP_

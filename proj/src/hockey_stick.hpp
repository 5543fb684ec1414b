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
// Hockey-stick divergence between finite distributions: the least delta such
// that P(T) <= e^eps * Q(T) + delta for every event T, which for finite
// spaces is sum_t max(0, P(t) - e^eps * Q(t)). Outcome selection is decided
// exactly (directed-rounding brackets of e^eps refined on demand), and the
// result is kept as the exact pair (P, Q) of selected masses. The delta
// value itself is only formed in double precision at report time, since
// e^eps is irrational for rational eps != 0.

#ifndef SHUFFLEDP_HOCKEY_STICK_HPP_
#define SHUFFLEDP_HOCKEY_STICK_HPP_

#include <vector>

#include "distribution.hpp"
#include "rational.hpp"

namespace shuffledp {

struct HockeyStickTerm {
  // Total mass of the maximizing event under each distribution, so
  // delta = p - e^eps * q with p, q exact.
  Rational p = 0;
  Rational q = 0;

  // True exactly when the divergence is zero (no outcome selected).
  bool IsZero() const { return p == 0 && q == 0; }

  double Delta(double eps) const;

  bool operator==(const HockeyStickTerm&) const = default;
};

// One direction: sum over outcomes where d0 strictly exceeds e^eps * d1.
HockeyStickTerm DirectedHockeyStick(const FiniteDistribution& d0,
                                    const FiniteDistribution& d1,
                                    ExpBracket& bracket);

struct ClosenessResult {
  double eps = 0.0;
  HockeyStickTerm forward;  // d0 against d1
  HockeyStickTerm reverse;  // d1 against d0

  // Both directions empty, so the distributions are (eps, 0)-close.
  bool ExactlyZero() const { return forward.IsZero() && reverse.IsZero(); }

  // max over both directions, the least delta making them (eps, delta)-close.
  double Delta() const;
};

// Both distributions must be normalized; eps must be nonnegative.
ClosenessResult HockeyStickCloseness(const FiniteDistribution& d0,
                                     const FiniteDistribution& d1,
                                     double eps);
ClosenessResult HockeyStickCloseness(const FiniteDistribution& d0,
                                     const FiniteDistribution& d1,
                                     ExpBracket& bracket);

// Mass pairs over the union support, for evaluating the same distribution
// pair against many eps values without repeated map lookups. Outcome
// identities are dropped; only the (p, q) pairs matter for the divergence.
std::vector<HockeyStickTerm> AlignedMasses(const FiniteDistribution& d0,
                                           const FiniteDistribution& d1);

ClosenessResult ClosenessFromMasses(const std::vector<HockeyStickTerm>& pairs,
                                    ExpBracket& bracket);

}  // namespace shuffledp

#endif  // SHUFFLEDP_HOCKEY_STICK_HPP_

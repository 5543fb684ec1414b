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

#include "hockey_stick.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace shuffledp {

double HockeyStickTerm::Delta(double eps) const {
  const double value =
      RationalToDouble(p) - std::exp(eps) * RationalToDouble(q);
  return std::max(value, 0.0);
}

HockeyStickTerm DirectedHockeyStick(const FiniteDistribution& d0,
                                    const FiniteDistribution& d1,
                                    ExpBracket& bracket) {
  HockeyStickTerm term;
  for (const auto& [outcome, p] : d0.weights()) {
    const Rational q = d1.MassOf(outcome);
    if (bracket.Above(p, q)) {
      term.p += p;
      term.q += q;
    }
  }
  return term;
}

double ClosenessResult::Delta() const {
  return std::max({forward.Delta(eps), reverse.Delta(eps), 0.0});
}

ClosenessResult HockeyStickCloseness(const FiniteDistribution& d0,
                                     const FiniteDistribution& d1,
                                     ExpBracket& bracket) {
  d0.CheckNormalized("hockey stick, first distribution");
  d1.CheckNormalized("hockey stick, second distribution");
  ClosenessResult result;
  result.eps = bracket.eps();
  result.forward = DirectedHockeyStick(d0, d1, bracket);
  result.reverse = DirectedHockeyStick(d1, d0, bracket);
  return result;
}

ClosenessResult HockeyStickCloseness(const FiniteDistribution& d0,
                                     const FiniteDistribution& d1,
                                     double eps) {
  if (!(eps >= 0)) {
    throw ConfigError("hockey stick: eps must be nonnegative, got " +
                      std::to_string(eps));
  }
  ExpBracket bracket(eps);
  return HockeyStickCloseness(d0, d1, bracket);
}

std::vector<HockeyStickTerm> AlignedMasses(const FiniteDistribution& d0,
                                           const FiniteDistribution& d1) {
  d0.CheckNormalized("aligned masses, first distribution");
  d1.CheckNormalized("aligned masses, second distribution");
  std::vector<HockeyStickTerm> pairs;
  pairs.reserve(std::max(d0.weights().size(), d1.weights().size()));
  auto a = d0.weights().begin();
  auto b = d1.weights().begin();
  while (a != d0.weights().end() || b != d1.weights().end()) {
    HockeyStickTerm term;
    if (b == d1.weights().end() ||
        (a != d0.weights().end() && a->first < b->first)) {
      term.p = a->second;
      ++a;
    } else if (a == d0.weights().end() || b->first < a->first) {
      term.q = b->second;
      ++b;
    } else {
      term.p = a->second;
      term.q = b->second;
      ++a;
      ++b;
    }
    pairs.push_back(std::move(term));
  }
  return pairs;
}

ClosenessResult ClosenessFromMasses(const std::vector<HockeyStickTerm>& pairs,
                                    ExpBracket& bracket) {
  ClosenessResult result;
  result.eps = bracket.eps();
  for (const HockeyStickTerm& term : pairs) {
    if (bracket.Above(term.p, term.q)) {
      result.forward.p += term.p;
      result.forward.q += term.q;
    }
    if (bracket.Above(term.q, term.p)) {
      result.reverse.p += term.q;
      result.reverse.q += term.p;
    }
  }
  return result;
}

}  // namespace shuffledp

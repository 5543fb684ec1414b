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
// Exact rational arithmetic helpers. Probability bookkeeping is done with
// GMP rationals end-to-end; the only transcendental that ever meets a
// rational is e^eps, which is handled through directed-rounding brackets so
// that every comparison "p > e^eps * q" is decided exactly (a rational can
// never equal e^eps for eps != 0).

#ifndef SHUFFLEDP_RATIONAL_HPP_
#define SHUFFLEDP_RATIONAL_HPP_

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace shuffledp {

using Rational = mpq_class;

Rational MakeRational(uint64_t num, uint64_t den);

// Exact conversion; every finite double is a dyadic rational.
Rational RationalFromDouble(double x);

// "num/den" in lowest terms, or just "num" for integers.
std::string RationalToString(const Rational& x);
Rational RationalFromString(const std::string& text);

double RationalToDouble(const Rational& x);

// Directed brackets of e^eps at a given binary precision, refinable on
// demand. eps is taken as the exact dyadic rational of the given double.
class ExpBracket {
 public:
  explicit ExpBracket(double eps, int precision_bits = 192);

  // Bracket for eps = ln(ratio), ratio > 0 rational. Here e^eps IS the
  // rational, so every comparison reduces to an exact rational compare.
  // Useful for randomizers whose privacy threshold is the log of a branch
  // probability ratio.
  static ExpBracket LnOfRational(const Rational& ratio);

  double eps() const { return eps_; }

  // Decides p > e^eps * q exactly for p, q >= 0.
  bool Above(const Rational& p, const Rational& q) const;

  // e^eps with ~53-bit accuracy, for final double-valued summaries.
  double Approx() const;

 private:
  ExpBracket() = default;

  void Refine(int precision_bits) const;

  double eps_ = 0.0;
  bool exact_one_ = false;   // eps == 0, e^eps == 1 exactly
  bool exact_ratio_ = false; // e^eps == ratio_ exactly
  Rational ratio_;
  mutable int precision_ = 0;
  mutable Rational lo_, hi_;
};

// Largest binomial-tail style helper: sum_{j=0}^{m} C(n, j) as an exact
// integer.
mpz_class BinomialPartialSum(unsigned n, unsigned m);

}  // namespace shuffledp

#endif  // SHUFFLEDP_RATIONAL_HPP_

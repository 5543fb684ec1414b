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
// Discrete information measures over joint tables with exact rational
// masses. Entropies are base 2, with 0 * log 0 = 0; masses stay rational
// until the final logarithm, which is evaluated in double precision.

#ifndef SHUFFLEDP_INFORMATION_HPP_
#define SHUFFLEDP_INFORMATION_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "rational.hpp"

namespace shuffledp {

// A joint distribution over tuples of discrete labels. Coordinates are
// addressed by index; an empty coordinate set marginalizes to the trivial
// point distribution, which makes conditional formulas uniform.
class JointTable {
 public:
  explicit JointTable(size_t arity);

  void Add(std::span<const uint64_t> point, const Rational& mass);

  size_t arity() const { return arity_; }
  const std::map<std::vector<uint64_t>, Rational>& weights() const {
    return weights_;
  }

  Rational Total() const;
  void CheckNormalized(const char* what) const;

  JointTable Marginal(std::span<const size_t> coords) const;

 private:
  size_t arity_;
  std::map<std::vector<uint64_t>, Rational> weights_;
};

// H of the full tuple, in bits.
double EntropyBits(const JointTable& table);
// H of a coordinate subset.
double EntropyBits(const JointTable& table, std::span<const size_t> coords);
// H(A | B) = H(A u B) - H(B).
double ConditionalEntropyBits(const JointTable& table,
                              std::span<const size_t> a,
                              std::span<const size_t> b);
// I(A; B) = H(A) + H(B) - H(A u B).
double MutualInformationBits(const JointTable& table,
                             std::span<const size_t> a,
                             std::span<const size_t> b);
// I(A; B | C) = H(A u C) + H(B u C) - H(A u B u C) - H(C).
double ConditionalMutualInformationBits(const JointTable& table,
                                        std::span<const size_t> a,
                                        std::span<const size_t> b,
                                        std::span<const size_t> c);

}  // namespace shuffledp

#endif  // SHUFFLEDP_INFORMATION_HPP_

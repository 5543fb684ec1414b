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

#include "information.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace shuffledp {

JointTable::JointTable(size_t arity) : arity_(arity) {}

void JointTable::Add(std::span<const uint64_t> point, const Rational& mass) {
  if (point.size() != arity_) {
    throw InternalError("joint table: point has arity " +
                        std::to_string(point.size()) + ", table has " +
                        std::to_string(arity_));
  }
  if (mass <= 0) {
    throw InternalError("joint table: mass must be positive");
  }
  weights_[std::vector<uint64_t>(point.begin(), point.end())] += mass;
}

Rational JointTable::Total() const {
  Rational total = 0;
  for (const auto& [point, mass] : weights_) total += mass;
  return total;
}

void JointTable::CheckNormalized(const char* what) const {
  Rational total = Total();
  if (total != 1) {
    throw InternalError(std::string(what) + ": masses sum to " +
                        RationalToString(total) + ", expected 1");
  }
}

JointTable JointTable::Marginal(std::span<const size_t> coords) const {
  for (size_t c : coords) {
    if (c >= arity_) {
      throw InternalError("joint table: coordinate " + std::to_string(c) +
                          " out of range for arity " + std::to_string(arity_));
    }
  }
  JointTable out(coords.size());
  std::vector<uint64_t> projected(coords.size());
  for (const auto& [point, mass] : weights_) {
    for (size_t i = 0; i < coords.size(); ++i) projected[i] = point[coords[i]];
    out.Add(projected, mass);
  }
  return out;
}

double EntropyBits(const JointTable& table) {
  table.CheckNormalized("entropy");
  double h = 0.0;
  for (const auto& [point, mass] : table.weights()) {
    const double p = RationalToDouble(mass);
    h -= p * std::log2(p);
  }
  // Point masses can land at -0.0; keep entropies clean.
  return h == 0.0 ? 0.0 : h;
}

double EntropyBits(const JointTable& table, std::span<const size_t> coords) {
  return EntropyBits(table.Marginal(coords));
}

namespace {

std::vector<size_t> Union(std::span<const size_t> a,
                          std::span<const size_t> b) {
  std::vector<size_t> u(a.begin(), a.end());
  for (size_t c : b) {
    if (std::find(u.begin(), u.end(), c) == u.end()) u.push_back(c);
  }
  return u;
}

}  // namespace

double ConditionalEntropyBits(const JointTable& table,
                              std::span<const size_t> a,
                              std::span<const size_t> b) {
  return EntropyBits(table, Union(a, b)) - EntropyBits(table, b);
}

double MutualInformationBits(const JointTable& table,
                             std::span<const size_t> a,
                             std::span<const size_t> b) {
  return EntropyBits(table, a) + EntropyBits(table, b) -
         EntropyBits(table, Union(a, b));
}

double ConditionalMutualInformationBits(const JointTable& table,
                                        std::span<const size_t> a,
                                        std::span<const size_t> b,
                                        std::span<const size_t> c) {
  const std::vector<size_t> ac = Union(a, c);
  const std::vector<size_t> bc = Union(b, c);
  const std::vector<size_t> abc = Union(ac, b);
  return EntropyBits(table, ac) + EntropyBits(table, bc) -
         EntropyBits(table, abc) - EntropyBits(table, c);
}

}  // namespace shuffledp

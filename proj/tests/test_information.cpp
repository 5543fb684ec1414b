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

#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "information.hpp"
#include "rng.hpp"

namespace shuffledp {
namespace {

constexpr double kTol = 1e-10;

const std::array<size_t, 1> kA = {0};
const std::array<size_t, 1> kB = {1};
const std::array<size_t, 1> kC = {2};

JointTable UniformPair() {
  JointTable t(2);
  for (uint64_t x = 0; x < 2; ++x) {
    for (uint64_t y = 0; y < 2; ++y) {
      t.Add(std::array<uint64_t, 2>{x, y}, Rational(1, 4));
    }
  }
  return t;
}

TEST_CASE("tables normalize, merge duplicate points, and marginalize") {
  JointTable t(2);
  t.Add(std::array<uint64_t, 2>{0, 0}, Rational(1, 4));
  t.Add(std::array<uint64_t, 2>{0, 0}, Rational(1, 4));
  t.Add(std::array<uint64_t, 2>{1, 1}, Rational(1, 2));
  CHECK(t.Total() == Rational(1));
  t.CheckNormalized("test table");
  CHECK(t.weights().size() == 2);

  const JointTable first = t.Marginal(kA);
  CHECK(first.arity() == 1);
  CHECK(first.weights().at({0}) == Rational(1, 2));
  CHECK(first.weights().at({1}) == Rational(1, 2));

  JointTable bad(2);
  bad.Add(std::array<uint64_t, 2>{0, 0}, Rational(1, 3));
  CHECK_THROWS_AS(bad.CheckNormalized("bad table"), WorkbenchError);

  CHECK_THROWS_AS(t.Add(std::array<uint64_t, 1>{0}, Rational(1)),
                  WorkbenchError);
}

TEST_CASE("entropy of simple closed forms") {
  // Uniform over 4 points: 2 bits; each marginal: 1 bit.
  const JointTable u = UniformPair();
  CHECK(EntropyBits(u) == doctest::Approx(2.0).epsilon(kTol));
  CHECK(EntropyBits(u, kA) == doctest::Approx(1.0).epsilon(kTol));

  // Point mass: zero entropy.
  JointTable point(1);
  point.Add(std::array<uint64_t, 1>{3}, Rational(1));
  CHECK(EntropyBits(point) == doctest::Approx(0.0).epsilon(kTol));

  // Bern(1/8).
  JointTable bern(1);
  bern.Add(std::array<uint64_t, 1>{0}, Rational(7, 8));
  bern.Add(std::array<uint64_t, 1>{1}, Rational(1, 8));
  const double p = 1.0 / 8.0;
  const double want = -p * std::log2(p) - (1 - p) * std::log2(1 - p);
  CHECK(EntropyBits(bern) == doctest::Approx(want).epsilon(kTol));
}

TEST_CASE("chain rule and mutual information identities") {
  // X uniform bit, Y = X with prob 3/4 else flipped, Z = X xor Y.
  JointTable t(3);
  for (uint64_t x = 0; x < 2; ++x) {
    for (uint64_t y = 0; y < 2; ++y) {
      const Rational mass =
          x == y ? Rational(3, 8) : Rational(1, 8);
      t.Add(std::array<uint64_t, 3>{x, y, x ^ y}, mass);
    }
  }
  t.CheckNormalized("xor triple");

  // H(X, Y) = H(X) + H(Y | X).
  const std::array<size_t, 2> ab = {0, 1};
  CHECK(EntropyBits(t, ab) ==
        doctest::Approx(EntropyBits(t, kA) + ConditionalEntropyBits(t, kB, kA))
            .epsilon(kTol));
  // I(X; Y) = H(X) - H(X | Y), symmetric.
  const double mi = MutualInformationBits(t, kA, kB);
  CHECK(mi == doctest::Approx(EntropyBits(t, kA) -
                              ConditionalEntropyBits(t, kA, kB))
                  .epsilon(kTol));
  CHECK(mi == doctest::Approx(MutualInformationBits(t, kB, kA)).epsilon(kTol));
  CHECK(mi > 0.0);

  // Z is a function of (X, Y): H(Z | X, Y) = 0.
  CHECK(ConditionalEntropyBits(t, kC, ab) ==
        doctest::Approx(0.0).epsilon(kTol));
  // X independent of Z here: I(X; Z) = 0 but I(X; Z | Y) > 0.
  CHECK(MutualInformationBits(t, kA, kC) == doctest::Approx(0.0).epsilon(kTol));
  CHECK(ConditionalMutualInformationBits(t, kA, kC, kB) > 0.1);
}

JointTable RandomTriple(RandomStream& rng, uint64_t sizes0, uint64_t sizes1,
                        uint64_t sizes2) {
  // Random rational masses with a common denominator.
  JointTable t(3);
  std::vector<uint64_t> raw;
  uint64_t total = 0;
  for (uint64_t i = 0; i < sizes0 * sizes1 * sizes2; ++i) {
    raw.push_back(1 + rng.UniformBelow(16));
    total += raw.back();
  }
  size_t idx = 0;
  for (uint64_t x = 0; x < sizes0; ++x) {
    for (uint64_t y = 0; y < sizes1; ++y) {
      for (uint64_t z = 0; z < sizes2; ++z) {
        t.Add(std::array<uint64_t, 3>{x, y, z},
              MakeRational(raw[idx++], total));
      }
    }
  }
  t.CheckNormalized("random triple");
  return t;
}

TEST_CASE("information quantities respect their classical bounds") {
  RandomStream rng(314);
  for (int rep = 0; rep < 200; ++rep) {
    const JointTable t = RandomTriple(rng, 2, 3, 2);
    const double hx = EntropyBits(t, kA);
    const double hy = EntropyBits(t, kB);
    const double mi = MutualInformationBits(t, kA, kB);
    CHECK(mi >= -kTol);
    CHECK(mi <= hx + kTol);
    CHECK(mi <= hy + kTol);
    // Conditioning cannot raise entropy.
    CHECK(ConditionalEntropyBits(t, kA, kB) <= hx + kTol);
    // I(A; B | C) >= 0.
    CHECK(ConditionalMutualInformationBits(t, kA, kB, kC) >= -kTol);
    // |I(A;B) - I(A;B|C)| <= H(C).
    const double gap =
        MutualInformationBits(t, kA, kB) -
        ConditionalMutualInformationBits(t, kA, kB, kC);
    CHECK(std::abs(gap) <= EntropyBits(t, kC) + kTol);
  }
}

TEST_CASE("empty coordinate sets give the unconditional quantities") {
  const JointTable u = UniformPair();
  const std::array<size_t, 0> none = {};
  CHECK(EntropyBits(u, none) == doctest::Approx(0.0).epsilon(kTol));
  CHECK(ConditionalEntropyBits(u, kA, none) ==
        doctest::Approx(EntropyBits(u, kA)).epsilon(kTol));
  CHECK(ConditionalMutualInformationBits(u, kA, kB, none) ==
        doctest::Approx(MutualInformationBits(u, kA, kB)).epsilon(kTol));
}

}  // namespace
}  // namespace shuffledp

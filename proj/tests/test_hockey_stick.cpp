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

#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "distribution.hpp"
#include "errors.hpp"
#include "hockey_stick.hpp"
#include "rng.hpp"

namespace shuffledp {
namespace {

FiniteDistribution Bern(const Rational& p_one) {
  FiniteDistribution d;
  if (p_one != 1) d.Add("0", 1 - p_one);
  if (p_one != 0) d.Add("1", p_one);
  return d;
}

TEST_CASE("finite distributions accumulate, scale, and normalize") {
  FiniteDistribution d;
  d.Add("a", Rational(1, 4));
  d.Add("a", Rational(1, 4));
  d.Add("b", Rational(1, 2));
  CHECK(d.Size() == 2);
  CHECK(d.MassOf("a") == Rational(1, 2));
  CHECK(d.MassOf("missing") == Rational(0));
  CHECK(d.IsNormalized());
  d.CheckNormalized("test");

  d.Scale(Rational(1, 2));
  CHECK(d.Total() == Rational(1, 2));
  CHECK_FALSE(d.IsNormalized());
  CHECK_THROWS_AS(d.CheckNormalized("scaled"), WorkbenchError);

  CHECK_THROWS_AS(d.Add("c", Rational(0)), WorkbenchError);

  const FiniteDistribution point = FiniteDistribution::PointMass("x");
  CHECK(point.MassOf("x") == Rational(1));

  const FiniteDistribution emp = FiniteDistribution::FromCounts(
      std::map<Bytes, uint64_t>{{"a", 1}, {"b", 3}});
  CHECK(emp.MassOf("a") == Rational(1, 4));
  CHECK(emp.MassOf("b") == Rational(3, 4));
}

TEST_CASE("total variation closed forms") {
  FiniteDistribution p;
  p.Add("a", Rational(1, 2));
  p.Add("b", Rational(1, 2));
  FiniteDistribution q;
  q.Add("b", Rational(1, 2));
  q.Add("c", Rational(1, 2));
  CHECK(TotalVariation(p, q) == Rational(1, 2));
  CHECK(TotalVariation(q, p) == Rational(1, 2));
  CHECK(TotalVariation(p, p) == Rational(0));

  CHECK(TotalVariation(Bern(Rational(3, 4)), Bern(Rational(1, 4))) ==
        Rational(1, 2));

  FiniteDistribution unnormalized;
  unnormalized.Add("a", Rational(1, 3));
  CHECK_THROWS_AS(TotalVariation(unnormalized, p), WorkbenchError);
}

TEST_CASE("divergence at eps zero is total variation") {
  const FiniteDistribution p = Bern(Rational(5, 8));
  const FiniteDistribution q = Bern(Rational(1, 8));
  const ClosenessResult res = HockeyStickCloseness(p, q, 0.0);
  CHECK(res.forward.p == Rational(5, 8));
  CHECK(res.forward.q == Rational(1, 8));
  CHECK(res.reverse.p == Rational(7, 8));
  CHECK(res.reverse.q == Rational(3, 8));
  // Masses in eighths are exact in double, so Delta is exactly 1/2.
  CHECK(res.Delta() == 0.5);
  CHECK(RationalToDouble(TotalVariation(p, q)) == 0.5);
}

TEST_CASE("outcome selection flips at the exact probability ratio") {
  // Bern(3/4) vs Bern(1/4): the only positive term is outcome 1 with ratio 3.
  const FiniteDistribution p = Bern(Rational(3, 4));
  const FiniteDistribution q = Bern(Rational(1, 4));

  const ClosenessResult below = HockeyStickCloseness(p, q, 1.0);
  CHECK(below.forward.p == Rational(3, 4));
  CHECK(below.forward.q == Rational(1, 4));
  CHECK(below.Delta() > 0.0);

  const ClosenessResult above = HockeyStickCloseness(p, q, 1.2);
  CHECK(above.ExactlyZero());
  CHECK(above.Delta() == 0.0);

  // A bracket pinned to e^eps = 3 exactly sits on the boundary: selection is
  // strict, so the term vanishes.
  ExpBracket at_three = ExpBracket::LnOfRational(Rational(3));
  const ClosenessResult at = HockeyStickCloseness(p, q, at_three);
  CHECK(at.ExactlyZero());
  CHECK_FALSE(at_three.Above(Rational(3, 4), Rational(1, 4)));
  CHECK(at_three.Above(Rational(3, 4) + Rational(1, 1000000), Rational(1, 4)));
}

TEST_CASE("ratio brackets decide comparisons against exact rationals") {
  ExpBracket half = ExpBracket::LnOfRational(Rational(1, 2));
  CHECK(half.eps() == doctest::Approx(-std::log(2.0)));
  CHECK(half.Above(Rational(51, 100), Rational(1)));
  CHECK_FALSE(half.Above(Rational(1, 2), Rational(1)));
  CHECK_FALSE(half.Above(Rational(49, 100), Rational(1)));
  CHECK(half.Approx() == doctest::Approx(0.5));
}

TEST_CASE("comparisons refine until a dyadic splinter of e is separated") {
  // Two 300-bit dyadic brackets of e = exp(1). The gap is far below the
  // starting precision, so deciding them forces refinement.
  mpfr_t x;
  mpfr_init2(x, 300);
  mpfr_set_ui(x, 1, MPFR_RNDN);
  mpfr_exp(x, x, MPFR_RNDD);
  mpq_t lo_q;
  mpq_init(lo_q);
  mpfr_get_q(lo_q, x);
  const Rational lo = Rational(mpq_class(lo_q));

  mpfr_set_ui(x, 1, MPFR_RNDN);
  mpfr_exp(x, x, MPFR_RNDU);
  mpq_t hi_q;
  mpq_init(hi_q);
  mpfr_get_q(hi_q, x);
  const Rational hi = Rational(mpq_class(hi_q));
  mpq_clear(lo_q);
  mpq_clear(hi_q);
  mpfr_clear(x);

  REQUIRE(lo < hi);
  ExpBracket bracket(1.0);
  // p > e * q with q = 1: true for the upper dyadic, false for the lower.
  CHECK(bracket.Above(hi, Rational(1)));
  CHECK_FALSE(bracket.Above(lo, Rational(1)));
}

TEST_CASE("delta terms clamp at zero in the double summary") {
  HockeyStickTerm term;
  term.p = Rational(1, 4);
  term.q = Rational(1, 2);
  CHECK(term.Delta(0.0) == 0.0);
  term.p = Rational(3, 4);
  CHECK(term.Delta(0.0) == 0.25);
  CHECK(HockeyStickTerm{}.IsZero());
}

FiniteDistribution RandomDistribution(RandomStream& rng, int outcomes) {
  FiniteDistribution d;
  std::vector<uint64_t> raw;
  uint64_t total = 0;
  for (int i = 0; i < outcomes; ++i) {
    raw.push_back(1 + rng.UniformBelow(32));
    total += raw.back();
  }
  for (int i = 0; i < outcomes; ++i) {
    Bytes outcome;
    codec::PutUvarint(outcome, static_cast<uint64_t>(i));
    d.Add(outcome, MakeRational(raw[static_cast<size_t>(i)], total));
  }
  return d;
}

TEST_CASE("aligned-mass evaluation matches the direct path on an eps grid") {
  RandomStream rng(2718);
  for (int rep = 0; rep < 20; ++rep) {
    const FiniteDistribution p = RandomDistribution(rng, 12);
    const FiniteDistribution q = RandomDistribution(rng, 12);
    const std::vector<HockeyStickTerm> pairs = AlignedMasses(p, q);
    double last = 2.0;
    for (double eps : {0.0, 0.2, 0.5, 1.0, 2.0, 5.0}) {
      ExpBracket bracket(eps);
      const ClosenessResult direct = HockeyStickCloseness(p, q, bracket);
      const ClosenessResult from_masses = ClosenessFromMasses(pairs, bracket);
      CHECK(direct.forward == from_masses.forward);
      CHECK(direct.reverse == from_masses.reverse);
      // Widening eps can only shrink the divergence.
      CHECK(direct.Delta() <= last + 1e-15);
      last = direct.Delta();
    }
    // At eps = 0 the divergence reduces to total variation.
    const ClosenessResult tv = HockeyStickCloseness(p, q, 0.0);
    CHECK(tv.forward.p - tv.forward.q == TotalVariation(p, q));
  }
}

TEST_CASE("directed divergence handles support gaps asymmetrically") {
  // q puts half its mass where p has none; that direction alone is positive.
  const FiniteDistribution p = FiniteDistribution::PointMass("a");
  FiniteDistribution q;
  q.Add("a", Rational(1, 2));
  q.Add("b", Rational(1, 2));
  ExpBracket bracket(1.0);
  const HockeyStickTerm fwd = DirectedHockeyStick(p, q, bracket);
  const HockeyStickTerm rev = DirectedHockeyStick(q, p, bracket);
  // Forward: 1 > e * 1/2 fails, so nothing is selected.
  CHECK(fwd.IsZero());
  // Reverse: the mass at "b" faces zero on the other side.
  CHECK(rev.p == Rational(1, 2));
  CHECK(rev.q == Rational(0));
  const ClosenessResult res = HockeyStickCloseness(p, q, 1.0);
  CHECK(res.Delta() == 0.5);
}

TEST_CASE("empirical total variation estimates behave at the extremes") {
  // Identical samplers: estimate must be small; disjoint: estimate 1.
  const Sampler zeros = [](uint64_t) { return Bytes("z"); };
  const Sampler ones = [](uint64_t) { return Bytes("o"); };
  const TvEstimate same = EstimateTotalVariation(zeros, zeros, 500, 1);
  CHECK(same.estimate == 0.0);
  CHECK(same.trials == 500);
  const TvEstimate apart = EstimateTotalVariation(zeros, ones, 500, 1);
  CHECK(apart.estimate == 1.0);
  CHECK(apart.lo <= apart.estimate);
  CHECK(apart.hi >= apart.estimate);

  // A fair-vs-biased coin pair: estimate within a loose band of the true 1/4.
  const TvEstimate mid = EstimateTotalVariation(
      [](uint64_t t) {
        RandomStream rng = DeriveStream(900, kStreamHarness, t, 0);
        return Bytes(rng.Bernoulli(1, 2) ? "1" : "0");
      },
      [](uint64_t t) {
        RandomStream rng = DeriveStream(901, kStreamHarness, t, 0);
        return Bytes(rng.Bernoulli(3, 4) ? "1" : "0");
      },
      4000, 77);
  CHECK(mid.estimate > 0.25 - 0.05);
  CHECK(mid.estimate < 0.25 + 0.05);
  CHECK(mid.lo <= mid.hi);
}

}  // namespace
}  // namespace shuffledp

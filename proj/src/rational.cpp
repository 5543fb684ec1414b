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

#include "rational.hpp"

#include <mpfr.h>

#include <cmath>

#include "errors.hpp"

namespace shuffledp {

Rational MakeRational(uint64_t num, uint64_t den) {
  if (den == 0) throw InternalError("rational: zero denominator");
  mpz_class n, d;
  mpz_import(n.get_mpz_t(), 1, 1, sizeof(num), 0, 0, &num);
  mpz_import(d.get_mpz_t(), 1, 1, sizeof(den), 0, 0, &den);
  Rational out(n, d);
  out.canonicalize();
  return out;
}

Rational RationalFromDouble(double x) {
  Rational out;
  mpq_set_d(out.get_mpq_t(), x);
  return out;
}

std::string RationalToString(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

Rational RationalFromString(const std::string& text) {
  Rational out;
  if (out.set_str(text, 10) != 0) {
    throw ConfigError("rational: cannot parse '" + text + "'");
  }
  out.canonicalize();
  return out;
}

double RationalToDouble(const Rational& x) { return x.get_d(); }

namespace {

Rational ExpDirected(double eps, int precision_bits, mpfr_rnd_t rnd) {
  mpfr_t x;
  mpfr_init2(x, precision_bits);
  mpfr_set_d(x, eps, MPFR_RNDN);  // exact: precision >= 53
  mpfr_exp(x, x, rnd);
  Rational out;
  mpfr_get_q(out.get_mpq_t(), x);
  mpfr_clear(x);
  return out;
}

}  // namespace

ExpBracket::ExpBracket(double eps, int precision_bits) : eps_(eps) {
  if (eps < 0) throw ConfigError("exp bracket: negative epsilon");
  exact_one_ = (eps == 0.0);
  precision_ = precision_bits;
  if (!exact_one_) Refine(precision_bits);
}

void ExpBracket::Refine(int precision_bits) const {
  precision_ = precision_bits;
  lo_ = ExpDirected(eps_, precision_bits, MPFR_RNDD);
  hi_ = ExpDirected(eps_, precision_bits, MPFR_RNDU);
}

ExpBracket ExpBracket::LnOfRational(const Rational& ratio) {
  if (sgn(ratio) <= 0) throw ConfigError("exp bracket: ratio must be positive");
  if (ratio < 1) throw ConfigError("exp bracket: negative epsilon");
  ExpBracket out;
  out.eps_ = std::log(RationalToDouble(ratio));
  out.exact_one_ = (ratio == 1);
  out.exact_ratio_ = true;
  out.ratio_ = ratio;
  return out;
}

bool ExpBracket::Above(const Rational& p, const Rational& q) const {
  if (sgn(q) == 0) return sgn(p) > 0;
  if (exact_one_) return p > q;
  if (exact_ratio_) return p > ratio_ * q;
  for (int prec = precision_; prec <= 4096; prec *= 2) {
    if (p > hi_ * q) return true;
    if (p <= lo_ * q) return false;
    Refine(prec * 2);
  }
  // p/q within 2^-4096 of e^eps: out of scope for the distributions handled
  // here, and a sign that something upstream produced a pathological ratio.
  throw InternalError("exp bracket: comparison did not separate");
}

double ExpBracket::Approx() const {
  if (exact_one_) return 1.0;
  if (exact_ratio_) return RationalToDouble(ratio_);
  mpfr_t x;
  mpfr_init2(x, 64);
  mpfr_set_d(x, eps_, MPFR_RNDN);
  mpfr_exp(x, x, MPFR_RNDN);
  double out = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  return out;
}

mpz_class BinomialPartialSum(unsigned n, unsigned m) {
  mpz_class total = 0;
  mpz_class term;
  for (unsigned j = 0; j <= m && j <= n; ++j) {
    mpz_bin_uiui(term.get_mpz_t(), n, j);
    total += term;
  }
  return total;
}

}  // namespace shuffledp

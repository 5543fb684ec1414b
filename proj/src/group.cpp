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

#include "group.hpp"

#include <gmpxx.h>

#include "errors.hpp"

namespace shuffledp {

uint64_t SmallestPrimeAtLeast(uint64_t bound) {
  if (bound <= 2) return 2;
  mpz_class start(0);
  mpz_import(start.get_mpz_t(), 1, 1, sizeof(bound), 0, 0, &bound);
  mpz_class prime;
  mpz_nextprime(prime.get_mpz_t(), mpz_class(start - 1).get_mpz_t());
  if (!prime.fits_ulong_p()) throw ConfigError("group: modulus out of range");
  return static_cast<uint64_t>(prime.get_ui());
}

Bytes EncodeVectorMessage(std::span<const uint64_t> coords) {
  Bytes out;
  codec::PutU8(out, kTagVector);
  for (uint64_t c : coords) codec::PutUvarint(out, c);
  return out;
}

std::vector<uint64_t> DecodeVectorMessage(const Bytes& msg, size_t dim) {
  codec::Reader r(msg);
  if (r.U8() != kTagVector) throw InternalError("vector message: bad tag");
  std::vector<uint64_t> coords;
  coords.reserve(dim);
  for (size_t i = 0; i < dim; ++i) coords.push_back(r.Uvarint());
  r.ExpectDone();
  return coords;
}

void AccumulateVector(std::vector<uint64_t>& acc, std::span<const uint64_t> add,
                      uint64_t q) {
  if (acc.size() != add.size()) throw InternalError("vector sum: length mismatch");
  for (size_t i = 0; i < acc.size(); ++i) acc[i] = AddMod(acc[i], add[i], q);
}

}  // namespace shuffledp

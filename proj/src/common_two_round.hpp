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
// Two-round common-element protocol. Every party maps its input through a
// public hash into a range of about n^2/delta buckets and contributes one
// bit of a locally private histogram over the buckets via the public
// channel. Everyone then derives the same histogram peak: if even the peak
// estimate falls short of 98n/100 the run aborts with Bottom; otherwise
// parties whose bucket hit the peak submit their input to the shuffle with
// probability 1/2 (Bottom otherwise) and the analyzer answers with the most
// frequent submitted value, ties to the smallest.
//
// The histogram stage is pluggable: the real one-bit oracle, exact counts
// of the parties' buckets, or a fixed injected table (for threshold tests).

#ifndef SHUFFLEDP_COMMON_TWO_ROUND_HPP_
#define SHUFFLEDP_COMMON_TWO_ROUND_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "model.hpp"
#include "value.hpp"

namespace shuffledp {

struct CommonTwoRoundParams {
  int n = 0;
  uint64_t domain_size = 0;
  double eps = 1.0;    // histogram privacy budget
  double delta = 0.01; // sizes the hash range
  uint64_t range_cap = 1'000'000;
  // Peak search runs over the image of the input hash by default (every
  // bucket any party can occupy); full_range_argmax scans all buckets
  // instead and is refused above this many.
  bool full_range_argmax = false;
  uint64_t candidate_cap = 1'000'000;
};

struct HistogramBackend {
  enum class Kind { kReal, kExactCounts, kTable };
  Kind kind = Kind::kReal;
  // kExactCounts: the inputs whose buckets are counted exactly.
  std::vector<uint64_t> true_inputs;
  // kTable: bucket -> injected estimate, used as-is.
  std::map<uint64_t, double> table;
};

uint64_t CommonTwoRoundRange(const CommonTwoRoundParams& params);

void ValidateCommonTwoRoundParams(const CommonTwoRoundParams& params);

// Round 1 public (one histogram bit per party), round 2 shuffled (one value
// or Bottom per party). Not enumerable; the histogram bias is irrational.
ProtocolSpec CommonTwoRoundSpec(const CommonTwoRoundParams& params,
                                const HistogramBackend& backend);

// What the public round determines, exposed for tests and reports.
struct PeakSelection {
  bool found = false;
  uint64_t bucket = 0;
  double estimate = 0.0;
};

PeakSelection CommonTwoRoundSelection(const CommonTwoRoundParams& params,
                                      const HistogramBackend& backend,
                                      const Bytes& w,
                                      const ChannelOutput& round1);

}  // namespace shuffledp

#endif  // SHUFFLEDP_COMMON_TWO_ROUND_HPP_

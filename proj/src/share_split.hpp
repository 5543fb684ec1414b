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
// Split-and-mix summation: every party splits each coordinate of its vector
// into ell additive shares mod q and sends the shares through the shuffle;
// the analyzer adds everything back up. The sum is exact for every seed and
// every ell; larger ell only makes the shuffled share multiset less
// informative about individual inputs.

#ifndef SHUFFLEDP_SHARE_SPLIT_HPP_
#define SHUFFLEDP_SHARE_SPLIT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "model.hpp"

namespace shuffledp {

// ell = sigma + ceil(lg q) + ceil(lg n); sigma is the statistical slack.
int DefaultShareCount(uint64_t q, uint64_t n, int sigma);

// First ell-1 shares uniform, last one balances to value mod q.
std::vector<uint64_t> SplitIntoShares(uint64_t value, uint64_t q, int ell,
                                      RandomStream& rng);

inline constexpr uint8_t kTagShare = 0x01;

Message EncodeShareMessage(uint64_t coord, uint64_t share);

// Sums all share messages in a shuffle output per coordinate; every message
// must carry kTagShare and a coordinate below dim.
std::vector<uint64_t> SumSharesFromChannel(const ChannelOutput& channel,
                                           uint64_t q, size_t dim);

struct ShareSumParams {
  int n = 0;
  uint64_t q = 0;
  int dim = 1;
  int ell = 0;    // <= 0 resolves to DefaultShareCount with sigma
  int sigma = 40;

  int ResolvedShareCount() const;
};

// One shuffle round; party inputs are Value::Seq vectors of dim coordinates;
// outcome is the summed vector. Randomizers are enumerable (q^((ell-1)*dim)
// branches each).
ProtocolSpec ShareSumSpec(const ShareSumParams& params);

}  // namespace shuffledp

#endif  // SHUFFLEDP_SHARE_SPLIT_HPP_

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
// Privacy audit driver. For every coordinate i, every pair of candidate
// values for that coordinate (all other coordinates pinned at a base
// assignment), and every coalition that excludes party i, the audit
// enumerates the exact coalition-view distributions of the two neighboring
// input vectors and evaluates their hockey-stick divergence on an eps grid.
//
// The quantification over coalitions is truncated at a size cap (plus any
// explicitly requested sets); the cap is recorded in the report. Divergences
// are exact mass pairs; doubles appear only in the summary tables.

#ifndef SHUFFLEDP_DP_AUDIT_HPP_
#define SHUFFLEDP_DP_AUDIT_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "enumeration.hpp"
#include "hockey_stick.hpp"
#include "model.hpp"
#include "value.hpp"

namespace shuffledp {

struct CoalitionFamily {
  // All coalitions of size <= size_cap are generated (the empty coalition,
  // i.e. the bare channel view, included).
  size_t size_cap = 2;
  std::vector<std::vector<int>> extra;
};

struct DpAuditOptions {
  std::vector<double> eps_grid;  // strictly ascending, nonnegative
  CoalitionFamily coalitions;
  EnumerateOptions enumerate;
  // Security parameter of the channel sub-protocol the audited ideal
  // functionality stands in for; folded in at report time as
  // (e^eps + 1) * channel_delta + max ideal delta.
  double channel_delta = 0.0;
  // Enumeration tasks run on this many threads (1 = fully serial). Results
  // do not depend on the worker count.
  size_t workers = 1;
};

struct AuditDeltaCell {
  ClosenessResult closeness;

  double eps() const { return closeness.eps; }
  double Delta() const { return closeness.Delta(); }
};

struct AuditRow {
  size_t party = 0;
  Value lhs;
  Value rhs;
  std::vector<int> coalition;
  std::vector<AuditDeltaCell> cells;  // parallel to eps_grid
};

struct DpAuditReport {
  std::vector<double> eps_grid;
  size_t coalition_cap = 0;
  uint64_t distributions_enumerated = 0;
  std::vector<AuditRow> rows;
  // Coalition size -> per-eps maximum delta over rows of that size.
  std::map<size_t, std::vector<double>> max_delta;
  // Per-eps maximum over every audited row.
  std::vector<double> overall_delta;
  double channel_delta = 0.0;
  std::vector<double> end_to_end_delta;  // per eps
};

// Candidate values per coordinate; coordinates with fewer than two
// candidates contribute no rows. The spec's randomizers must be enumerable.
DpAuditReport RunDpAudit(const ProtocolSpec& spec,
                         const std::vector<Value>& base_inputs,
                         const std::vector<std::vector<Value>>& domains,
                         const DpAuditOptions& options);

// Same candidate set for every coordinate.
DpAuditReport RunDpAudit(const ProtocolSpec& spec,
                         const std::vector<Value>& base_inputs,
                         const std::vector<Value>& shared_domain,
                         const DpAuditOptions& options);

}  // namespace shuffledp

#endif  // SHUFFLEDP_DP_AUDIT_HPP_

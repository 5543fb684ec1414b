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

#include "dp_audit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <thread>
#include <utility>

#include "codec.hpp"
#include "errors.hpp"

namespace shuffledp {

namespace {

void CheckGrid(const std::vector<double>& grid) {
  if (grid.empty()) throw ConfigError("audit: eps grid is empty");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0)) {
      throw ConfigError("audit: eps grid entries must be nonnegative");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ConfigError("audit: eps grid must be strictly ascending");
    }
  }
}

std::vector<std::vector<int>> BuildFamily(int n, const CoalitionFamily& fam) {
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> out;
  const size_t cap = std::min<size_t>(fam.size_cap, static_cast<size_t>(n));
  // Sizes 0..cap, lexicographic within a size.
  for (size_t size = 0; size <= cap; ++size) {
    std::vector<int> pick(size);
    std::function<void(size_t, int)> rec = [&](size_t depth, int from) {
      if (depth == size) {
        if (seen.insert(pick).second) out.push_back(pick);
        return;
      }
      for (int v = from; v < n; ++v) {
        pick[depth] = v;
        rec(depth + 1, v + 1);
      }
    };
    rec(0, 0);
  }
  for (const auto& coalition : fam.extra) {
    std::vector<int> c = coalition;
    std::sort(c.begin(), c.end());
    if (std::adjacent_find(c.begin(), c.end()) != c.end()) {
      throw ConfigError("audit: explicit coalition repeats a party");
    }
    if (!c.empty() && (c.front() < 0 || c.back() >= n)) {
      throw ConfigError("audit: explicit coalition member out of range");
    }
    if (seen.insert(c).second) out.push_back(std::move(c));
  }
  return out;
}

Bytes TaskKey(const std::vector<Value>& inputs,
              const std::vector<int>& coalition) {
  Bytes key;
  codec::PutUvarint(key, inputs.size());
  for (const Value& v : inputs) codec::PutBlob(key, v.Encode());
  codec::PutUvarint(key, coalition.size());
  for (int m : coalition) codec::PutUvarint(key, static_cast<uint64_t>(m));
  return key;
}

}  // namespace

DpAuditReport RunDpAudit(const ProtocolSpec& spec,
                         const std::vector<Value>& base_inputs,
                         const std::vector<std::vector<Value>>& domains,
                         const DpAuditOptions& options) {
  ValidateSpec(spec);
  const int n = spec.n;
  if (base_inputs.size() != static_cast<size_t>(n)) {
    throw ConfigError("audit: base input count " +
                      std::to_string(base_inputs.size()) + " does not match " +
                      std::to_string(n) + " parties");
  }
  if (domains.size() != static_cast<size_t>(n)) {
    throw ConfigError("audit: need one candidate list per party");
  }
  CheckGrid(options.eps_grid);

  const auto family = BuildFamily(n, options.coalitions);

  struct RowPlan {
    size_t party;
    Value lhs, rhs;
    const std::vector<int>* coalition;
    Bytes lhs_key, rhs_key;
  };
  std::vector<RowPlan> plans;
  std::map<Bytes, std::pair<std::vector<Value>, std::vector<int>>> tasks;

  for (int i = 0; i < n; ++i) {
    const auto& dom = domains[static_cast<size_t>(i)];
    for (size_t a = 0; a < dom.size(); ++a) {
      for (size_t b = a + 1; b < dom.size(); ++b) {
        if (dom[a] == dom[b]) {
          throw ConfigError("audit: candidate list for party " +
                            std::to_string(i) + " repeats a value");
        }
        for (const auto& coalition : family) {
          if (std::binary_search(coalition.begin(), coalition.end(), i)) {
            continue;
          }
          RowPlan plan;
          plan.party = static_cast<size_t>(i);
          plan.lhs = dom[a];
          plan.rhs = dom[b];
          plan.coalition = &coalition;
          std::vector<Value> lhs_inputs = base_inputs;
          lhs_inputs[static_cast<size_t>(i)] = dom[a];
          std::vector<Value> rhs_inputs = base_inputs;
          rhs_inputs[static_cast<size_t>(i)] = dom[b];
          plan.lhs_key = TaskKey(lhs_inputs, coalition);
          plan.rhs_key = TaskKey(rhs_inputs, coalition);
          tasks.emplace(plan.lhs_key,
                        std::make_pair(std::move(lhs_inputs), coalition));
          tasks.emplace(plan.rhs_key,
                        std::make_pair(std::move(rhs_inputs), coalition));
          plans.push_back(std::move(plan));
        }
      }
    }
  }

  // Enumerate each distinct (inputs, coalition) view distribution once.
  std::vector<const Bytes*> task_keys;
  task_keys.reserve(tasks.size());
  for (const auto& [key, unused] : tasks) task_keys.push_back(&key);
  std::map<Bytes, FiniteDistribution> views;
  for (const Bytes* key : task_keys) views.emplace(*key, FiniteDistribution());

  const size_t workers =
      std::max<size_t>(1, std::min(options.workers, task_keys.size()));
  auto run_slice = [&](size_t offset) {
    for (size_t t = offset; t < task_keys.size(); t += workers) {
      const auto& [inputs, coalition] = tasks.at(*task_keys[t]);
      views.at(*task_keys[t]) =
          ExactViewDistribution(spec, inputs, coalition, options.enumerate);
    }
  };
  if (workers == 1) {
    run_slice(0);
  } else {
    // Tasks write to disjoint pre-inserted map slots, so no locking is
    // needed; exceptions surface after the join.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(workers);
    for (size_t wkr = 0; wkr < workers; ++wkr) {
      pool.emplace_back([&, wkr] {
        try {
          run_slice(wkr);
        } catch (...) {
          failures[wkr] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  DpAuditReport report;
  report.eps_grid = options.eps_grid;
  report.coalition_cap = options.coalitions.size_cap;
  report.distributions_enumerated = task_keys.size();
  report.channel_delta = options.channel_delta;

  std::vector<ExpBracket> brackets;
  brackets.reserve(options.eps_grid.size());
  for (double eps : options.eps_grid) brackets.emplace_back(eps);

  report.overall_delta.assign(options.eps_grid.size(), 0.0);
  for (const RowPlan& plan : plans) {
    AuditRow row;
    row.party = plan.party;
    row.lhs = plan.lhs;
    row.rhs = plan.rhs;
    row.coalition = *plan.coalition;
    const auto pairs =
        AlignedMasses(views.at(plan.lhs_key), views.at(plan.rhs_key));
    auto& by_size = report.max_delta[row.coalition.size()];
    if (by_size.empty()) by_size.assign(options.eps_grid.size(), 0.0);
    for (size_t g = 0; g < options.eps_grid.size(); ++g) {
      AuditDeltaCell cell;
      cell.closeness = ClosenessFromMasses(pairs, brackets[g]);
      const double delta = cell.Delta();
      by_size[g] = std::max(by_size[g], delta);
      report.overall_delta[g] = std::max(report.overall_delta[g], delta);
      row.cells.push_back(std::move(cell));
    }
    report.rows.push_back(std::move(row));
  }

  report.end_to_end_delta.reserve(options.eps_grid.size());
  for (size_t g = 0; g < options.eps_grid.size(); ++g) {
    const double factor = std::exp(options.eps_grid[g]) + 1.0;
    report.end_to_end_delta.push_back(factor * options.channel_delta +
                                      report.overall_delta[g]);
  }
  return report;
}

DpAuditReport RunDpAudit(const ProtocolSpec& spec,
                         const std::vector<Value>& base_inputs,
                         const std::vector<Value>& shared_domain,
                         const DpAuditOptions& options) {
  std::vector<std::vector<Value>> domains(base_inputs.size(), shared_domain);
  return RunDpAudit(spec, base_inputs, domains, options);
}

}  // namespace shuffledp

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

#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "dp_audit.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "value.hpp"

namespace shuffledp {
namespace {

// Binary randomized response: keep the input with probability keep_num/
// keep_den, otherwise emit the flipped bit.
class FlipRandomizer final : public Randomizer {
 public:
  FlipRandomizer(uint64_t keep_num, uint64_t keep_den)
      : keep_num_(keep_num), keep_den_(keep_den) {}

  int MessageCount(int) const override { return 1; }

  std::vector<Message> SampleRound(const RoundContext& ctx,
                                   RandomStream& rng) const override {
    const uint64_t x = ctx.input->AsInt();
    const uint64_t y = rng.Bernoulli(keep_num_, keep_den_) ? x : 1 - x;
    return {Message(1, static_cast<char>('0' + y))};
  }

  bool Enumerable() const override { return true; }

  std::vector<BranchOutcome> EnumerateRound(
      const RoundContext& ctx) const override {
    const uint64_t x = ctx.input->AsInt();
    const Rational keep = MakeRational(keep_num_, keep_den_);
    return {{keep, {Message(1, static_cast<char>('0' + x))}},
            {1 - keep, {Message(1, static_cast<char>('0' + (1 - x)))}}};
  }

 private:
  uint64_t keep_num_;
  uint64_t keep_den_;
};

// Sends the input in the clear; zero privacy at every eps below infinity.
class LeakRandomizer final : public Randomizer {
 public:
  int MessageCount(int) const override { return 1; }
  std::vector<Message> SampleRound(const RoundContext& ctx,
                                   RandomStream&) const override {
    return {Message(1, static_cast<char>('0' + ctx.input->AsInt()))};
  }
  bool Enumerable() const override { return true; }
  std::vector<BranchOutcome> EnumerateRound(
      const RoundContext& ctx) const override {
    return {
        {Rational(1), {Message(1, static_cast<char>('0' + ctx.input->AsInt()))}}};
  }
};

// Ignores its input entirely; perfect privacy.
class BlindRandomizer final : public Randomizer {
 public:
  int MessageCount(int) const override { return 1; }
  std::vector<Message> SampleRound(const RoundContext&,
                                   RandomStream& rng) const override {
    return {rng.Bernoulli(1, 2) ? Message("H") : Message("T")};
  }
  bool Enumerable() const override { return true; }
  std::vector<BranchOutcome> EnumerateRound(
      const RoundContext&) const override {
    return {{Rational(1, 2), {Message("H")}},
            {Rational(1, 2), {Message("T")}}};
  }
};

template <typename R, typename... Args>
ProtocolSpec OneRoundSpec(int n, Args&&... args) {
  ProtocolSpec spec;
  spec.n = n;
  spec.public_randomness_bits = 0;
  spec.rounds.push_back(RoundSpec{ChannelKind::kShuffle, 1, {}});
  auto r = std::make_shared<const R>(std::forward<Args>(args)...);
  spec.randomizers.assign(static_cast<size_t>(n), r);
  spec.analyzer = [](const Bytes&, std::span<const ChannelOutput>) {
    return Value::Bottom();
  };
  return spec;
}

const std::vector<Value> kBits = {Value::Int(0), Value::Int(1)};

TEST_CASE("randomized response audits to its closed-form curve") {
  // keep 3/4: the view ratio is 3, so delta(eps) = 3/4 - e^eps / 4 until
  // eps reaches ln 3, and exactly zero beyond.
  const ProtocolSpec spec = OneRoundSpec<FlipRandomizer>(1, 3, 4);
  DpAuditOptions options;
  options.eps_grid = {0.0, 0.5, 1.0, 1.2, 3.0};
  options.coalitions.size_cap = 0;

  const DpAuditReport report =
      RunDpAudit(spec, {Value::Int(0)}, kBits, options);
  REQUIRE(report.rows.size() == 1);
  const AuditRow& row = report.rows[0];
  CHECK(row.party == 0);
  CHECK(row.lhs == Value::Int(0));
  CHECK(row.rhs == Value::Int(1));
  CHECK(row.coalition.empty());
  REQUIRE(row.cells.size() == 5);

  for (size_t g = 0; g < 3; ++g) {
    CHECK(row.cells[g].closeness.forward.p == Rational(3, 4));
    CHECK(row.cells[g].closeness.forward.q == Rational(1, 4));
    CHECK(row.cells[g].closeness.reverse.p == Rational(3, 4));
    CHECK(row.cells[g].closeness.reverse.q == Rational(1, 4));
    const double eps = options.eps_grid[g];
    CHECK(row.cells[g].Delta() ==
          doctest::Approx(0.75 - std::exp(eps) / 4.0).epsilon(1e-12));
  }
  CHECK(row.cells[0].Delta() == 0.5);
  // Beyond ln 3 nothing is selected.
  CHECK(row.cells[3].closeness.ExactlyZero());
  CHECK(row.cells[4].closeness.ExactlyZero());

  // Deltas never increase along the grid.
  for (size_t g = 1; g < row.cells.size(); ++g) {
    CHECK(row.cells[g].Delta() <= row.cells[g - 1].Delta() + 1e-15);
  }
  CHECK(report.distributions_enumerated == 2);
}

TEST_CASE("an input-oblivious protocol audits to zero everywhere") {
  const ProtocolSpec spec = OneRoundSpec<BlindRandomizer>(2);
  DpAuditOptions options;
  options.eps_grid = {0.0, 1.0};
  options.coalitions.size_cap = 1;

  const DpAuditReport report =
      RunDpAudit(spec, {Value::Int(0), Value::Int(0)}, kBits, options);
  // Per party: one pair, coalitions {} and {the other one}.
  REQUIRE(report.rows.size() == 4);
  for (const AuditRow& row : report.rows) {
    for (const AuditDeltaCell& cell : row.cells) {
      CHECK(cell.closeness.ExactlyZero());
    }
  }
  CHECK(report.overall_delta == std::vector<double>{0.0, 0.0});
  REQUIRE(report.max_delta.count(0) == 1);
  REQUIRE(report.max_delta.count(1) == 1);
  CHECK(report.max_delta.at(0) == std::vector<double>{0.0, 0.0});
  CHECK(report.max_delta.at(1) == std::vector<double>{0.0, 0.0});

  // Shared tasks between rows are enumerated once: the all-base pair under
  // the empty coalition is used by both parties.
  CHECK(report.distributions_enumerated == 7);
}

TEST_CASE("a plaintext leak audits to delta one and folds channel slack") {
  const ProtocolSpec spec = OneRoundSpec<LeakRandomizer>(1);
  DpAuditOptions options;
  options.eps_grid = {0.0, 2.0};
  options.coalitions.size_cap = 0;
  options.channel_delta = 0.01;

  const DpAuditReport report =
      RunDpAudit(spec, {Value::Int(0)}, kBits, options);
  CHECK(report.overall_delta == std::vector<double>{1.0, 1.0});
  for (size_t g = 0; g < 2; ++g) {
    const double factor = std::exp(options.eps_grid[g]) + 1.0;
    CHECK(report.end_to_end_delta[g] ==
          doctest::Approx(factor * 0.01 + 1.0).epsilon(1e-12));
  }
  CHECK(report.channel_delta == 0.01);
}

TEST_CASE("audit reports are identical across worker counts") {
  const ProtocolSpec spec = OneRoundSpec<FlipRandomizer>(3, 2, 3);
  DpAuditOptions serial;
  serial.eps_grid = {0.0, 0.7};
  serial.coalitions.size_cap = 1;
  DpAuditOptions parallel = serial;
  parallel.workers = 4;

  const std::vector<Value> base = {Value::Int(0), Value::Int(1), Value::Int(0)};
  const DpAuditReport a = RunDpAudit(spec, base, kBits, serial);
  const DpAuditReport b = RunDpAudit(spec, base, kBits, parallel);

  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t r = 0; r < a.rows.size(); ++r) {
    CHECK(a.rows[r].party == b.rows[r].party);
    CHECK(a.rows[r].lhs == b.rows[r].lhs);
    CHECK(a.rows[r].rhs == b.rows[r].rhs);
    CHECK(a.rows[r].coalition == b.rows[r].coalition);
    REQUIRE(a.rows[r].cells.size() == b.rows[r].cells.size());
    for (size_t g = 0; g < a.rows[r].cells.size(); ++g) {
      CHECK(a.rows[r].cells[g].closeness.forward ==
            b.rows[r].cells[g].closeness.forward);
      CHECK(a.rows[r].cells[g].closeness.reverse ==
            b.rows[r].cells[g].closeness.reverse);
    }
  }
  CHECK(a.overall_delta == b.overall_delta);
  CHECK(a.distributions_enumerated == b.distributions_enumerated);
}

TEST_CASE("coalitions against larger groups strictly help the adversary") {
  // With 3 parties running keep-2/3 response, a coalition that sees one more
  // party's branch can only match or increase the divergence.
  const ProtocolSpec spec = OneRoundSpec<FlipRandomizer>(3, 2, 3);
  DpAuditOptions options;
  options.eps_grid = {0.3};
  options.coalitions.size_cap = 2;
  const std::vector<Value> base(3, Value::Int(0));
  const DpAuditReport report = RunDpAudit(spec, base, kBits, options);
  REQUIRE(report.max_delta.count(0) == 1);
  REQUIRE(report.max_delta.count(2) == 1);
  CHECK(report.max_delta.at(0)[0] <= report.max_delta.at(1)[0] + 1e-15);
  CHECK(report.max_delta.at(1)[0] <= report.max_delta.at(2)[0] + 1e-15);
  // Full-minus-one coalition: the honest noise is gone entirely except the
  // audited party's own flip, which pins the two-view ratio at 2.
  CHECK(report.max_delta.at(2)[0] > 0.0);
}

TEST_CASE("audit validates grids, domains, and explicit coalitions") {
  const ProtocolSpec spec = OneRoundSpec<BlindRandomizer>(2);
  const std::vector<Value> base(2, Value::Int(0));

  DpAuditOptions options;
  options.coalitions.size_cap = 0;

  options.eps_grid = {};
  CHECK_THROWS_AS(RunDpAudit(spec, base, kBits, options), WorkbenchError);
  options.eps_grid = {-0.5};
  CHECK_THROWS_AS(RunDpAudit(spec, base, kBits, options), WorkbenchError);
  options.eps_grid = {1.0, 1.0};
  CHECK_THROWS_AS(RunDpAudit(spec, base, kBits, options), WorkbenchError);

  options.eps_grid = {1.0};
  const std::vector<Value> dup = {Value::Int(0), Value::Int(0)};
  CHECK_THROWS_AS(RunDpAudit(spec, base, dup, options), WorkbenchError);

  options.coalitions.extra = {{1, 1}};
  CHECK_THROWS_AS(RunDpAudit(spec, base, kBits, options), WorkbenchError);
  options.coalitions.extra = {{7}};
  CHECK_THROWS_AS(RunDpAudit(spec, base, kBits, options), WorkbenchError);

  // A valid explicit coalition beyond the cap is honored and deduplicated.
  options.coalitions.extra = {{1}, {1}};
  const DpAuditReport report = RunDpAudit(spec, base, kBits, options);
  size_t with_extra = 0;
  for (const AuditRow& row : report.rows) {
    if (row.coalition == std::vector<int>{1}) ++with_extra;
  }
  // Only party 0 can be audited against coalition {1}; one pair, one row.
  CHECK(with_extra == 1);
}

TEST_CASE("single-candidate coordinates contribute no rows") {
  const ProtocolSpec spec = OneRoundSpec<BlindRandomizer>(2);
  DpAuditOptions options;
  options.eps_grid = {0.0};
  options.coalitions.size_cap = 0;
  const std::vector<std::vector<Value>> domains = {
      {Value::Int(0), Value::Int(1)}, {Value::Int(0)}};
  const DpAuditReport report =
      RunDpAudit(spec, {Value::Int(0), Value::Int(0)}, domains, options);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].party == 0);
}

}  // namespace
}  // namespace shuffledp

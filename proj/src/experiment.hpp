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
// Batch experiment front-end: a JSON config names a command (run, mc,
// audit, info) and a protocol from the registry; execution produces a JSON
// report (plus an optional CSV for audit sweeps). Reports are a pure
// function of (config, tool version): rerunning the same config yields
// byte-identical output. Timing therefore never enters the report; callers
// print wall-clock to stderr if they want it.

#ifndef SHUFFLEDP_EXPERIMENT_HPP_
#define SHUFFLEDP_EXPERIMENT_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace shuffledp {

// One flat struct covers all commands; protocols read the fields they need
// and validate them. Zero means "use the protocol's default" for sizes that
// have one (q, message_len) and "unset" elsewhere.
struct ExperimentConfig {
  std::string command = "info";  // run | mc | audit | info
  std::string protocol;
  int n = 0;
  uint64_t x_size = 0;  // |X|
  uint64_t y_size = 0;  // |Y|
  double alpha = 0.5;
  double eps = 1.0;
  std::vector<double> eps_grid;  // audit grid, strictly ascending
  double delta = 0.01;
  int k = 1;       // security parameter (key bits)
  int sigma = 40;  // share-count statistical slack
  uint64_t q = 0;  // group modulus; 0 picks the protocol default
  int ell = 0;     // shares per value; 0 picks the sigma-derived default
  int dim = 1;     // split-sum vector length
  int message_len = 0;  // secure-message payload bits; 0 means k
  uint64_t trials = 0;
  int coalition_cap = 2;
  uint64_t seed = 1;
  std::string histogram = "real";  // real | injected
  uint64_t common_input = 0;
  std::vector<uint64_t> inputs;  // explicit per-party inputs (row-major)
  std::vector<uint64_t> y_of_x;  // nested instance vector, one y per x
  uint64_t range_cap = 1'000'000;
  uint64_t budget = 100'000'000;  // enumeration leaf budget
  double channel_delta = 0.0;     // summation sub-protocol margin, composed
                                  // into audit reports
  bool allow_small_group = false;
  int workers = 0;  // 0 reads SHUFFLEDP_WORKERS, then falls back to 1
  std::string output;  // report path; empty writes to stdout
  std::string csv;     // audit-table path; empty skips the CSV

  bool operator==(const ExperimentConfig&) const = default;
};

// Strict parse: unknown fields, wrong types, out-of-range values, unsorted
// eps grids, and unregistered protocols are all rejected here.
ExperimentConfig ParseConfig(const std::string& json_text);

// Canonical JSON with a fixed field order; ParseConfig(SerializeConfig(c))
// reproduces c exactly.
std::string SerializeConfig(const ExperimentConfig& config);

struct ExperimentReport {
  std::string json;  // report body, newline-terminated
  std::string csv;   // nonempty only when the command produced a table
};

ExperimentReport RunExperiment(const ExperimentConfig& config);

}  // namespace shuffledp

#endif  // SHUFFLEDP_EXPERIMENT_HPP_

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

// Command-line front end. Builds one JSON config from an optional config
// file plus flag overrides (flags beat file), hands it to the library, and
// writes the report where the config says. All validation lives behind the
// C API; this file is plumbing only.
//
// Exit codes: 0 success, 2 config error, 3 enumeration budget refusal,
// 4 internal error. Wall-clock goes to stderr so report bytes depend only
// on (config, seed, version).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shuffledp.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitConfig = 2;

bool WriteFileOrComplain(const std::string& path, const char* data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (out) out << data;
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation, testing and privacy-audit workbench for "
               "shuffle-model protocols"};
  app.set_version_flag("--version", sdp_version());
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "JSON config file; flags override its fields");

  std::string protocol;
  std::string histogram;
  std::string output;
  std::string csv;
  int n = 0;
  int k = 0;
  int sigma = 0;
  int ell = 0;
  int dim = 0;
  int message_len = 0;
  int coalition_cap = 0;
  int workers = 0;
  std::uint64_t x_size = 0;
  std::uint64_t y_size = 0;
  std::uint64_t q = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t common_input = 0;
  std::uint64_t range_cap = 0;
  std::uint64_t budget = 0;
  double alpha = 0;
  double eps = 0;
  double delta = 0;
  double channel_delta = 0;
  std::vector<double> eps_grid;
  std::vector<std::uint64_t> inputs;
  std::vector<std::uint64_t> y_of_x;

  app.add_option("--protocol", protocol, "protocol registry name");
  app.add_option("--n", n, "number of parties");
  app.add_option("--x-size", x_size, "x input domain size");
  app.add_option("--y-size", y_size, "y input domain size");
  app.add_option("--alpha", alpha, "fraction of parties in the x group");
  app.add_option("--eps", eps, "privacy parameter for parameterized protocols");
  app.add_option("--eps-grid", eps_grid, "audit epsilon grid, ascending")
      ->delimiter(',');
  app.add_option("--delta", delta, "failure probability parameter");
  app.add_option("--k", k, "per-pair security parameter");
  app.add_option("--sigma", sigma, "statistical security exponent");
  app.add_option("--q", q, "group modulus override");
  app.add_option("--ell", ell, "additive share count override");
  app.add_option("--dim", dim, "coordinates per split-sum input");
  app.add_option("--message-len", message_len, "secure-message payload bits");
  app.add_option("--trials", trials, "Monte Carlo trial count");
  app.add_option("--coalition-cap", coalition_cap,
                 "audit all coalitions up to this size");
  app.add_option("--seed", seed, "decimal 64-bit master seed");
  app.add_option("--histogram", histogram,
                 "round-1 estimate backend: real or injected");
  app.add_option("--common-input", common_input,
                 "input value shared by every party");
  app.add_option("--inputs", inputs, "explicit per-party inputs")
      ->delimiter(',');
  app.add_option("--y-of-x", y_of_x, "shared y value per x, nested protocols")
      ->delimiter(',');
  app.add_option("--range-cap", range_cap, "hash range upper bound");
  app.add_option("--budget", budget, "audit enumeration leaf budget");
  app.add_option("--channel-delta", channel_delta,
                 "security parameter charged per ideal-sum view");
  app.add_flag("--allow-small-group",
               "accept parameters below the analyzed regime");
  app.add_option("--workers", workers, "worker thread count");
  app.add_option("--output", output, "report path (default stdout)");
  app.add_option("--csv", csv, "audit CSV table path");

  CLI::App* cmd_run =
      app.add_subcommand("run", "single execution with a transcript dump");
  CLI::App* cmd_mc = app.add_subcommand(
      "mc", "correctness rate over seeded trials with a 95% interval");
  CLI::App* cmd_audit = app.add_subcommand(
      "audit", "exact privacy deltas over enumerated coalition views");
  CLI::App* cmd_info =
      app.add_subcommand("info", "describe the protocol registry");
  std::string info_name;
  cmd_info->add_option("name", info_name, "registry entry to describe");
  for (CLI::App* sub : {cmd_run, cmd_mc, cmd_audit, cmd_info}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  Json merged = Json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read config file " << config_path << "\n";
      return kExitConfig;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
      merged = Json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
      std::cerr << "error: " << config_path << ": " << e.what() << "\n";
      return kExitConfig;
    }
    if (!merged.is_object()) {
      std::cerr << "error: " << config_path
                << ": config file must hold a JSON object\n";
      return kExitConfig;
    }
  }

  const auto set_if = [&](const char* flag, const char* key, auto&& value) {
    if (app.count(flag) > 0) merged[key] = value;
  };
  set_if("--protocol", "protocol", protocol);
  set_if("--n", "n", n);
  set_if("--x-size", "x_size", x_size);
  set_if("--y-size", "y_size", y_size);
  set_if("--alpha", "alpha", alpha);
  set_if("--eps", "eps", eps);
  set_if("--eps-grid", "eps_grid", eps_grid);
  set_if("--delta", "delta", delta);
  set_if("--k", "k", k);
  set_if("--sigma", "sigma", sigma);
  set_if("--q", "q", q);
  set_if("--ell", "ell", ell);
  set_if("--dim", "dim", dim);
  set_if("--message-len", "message_len", message_len);
  set_if("--trials", "trials", trials);
  set_if("--coalition-cap", "coalition_cap", coalition_cap);
  set_if("--seed", "seed", seed);
  set_if("--histogram", "histogram", histogram);
  set_if("--common-input", "common_input", common_input);
  set_if("--inputs", "inputs", inputs);
  set_if("--y-of-x", "y_of_x", y_of_x);
  set_if("--range-cap", "range_cap", range_cap);
  set_if("--budget", "budget", budget);
  set_if("--channel-delta", "channel_delta", channel_delta);
  set_if("--allow-small-group", "allow_small_group", true);
  set_if("--workers", "workers", workers);
  set_if("--output", "output", output);
  set_if("--csv", "csv", csv);

  if (app.got_subcommand(cmd_run)) merged["command"] = "run";
  if (app.got_subcommand(cmd_mc)) merged["command"] = "mc";
  if (app.got_subcommand(cmd_audit)) merged["command"] = "audit";
  if (app.got_subcommand(cmd_info)) {
    merged["command"] = "info";
    if (cmd_info->count("name") > 0) merged["protocol"] = info_name;
  }

  const std::string config_json = merged.dump();
  char* report = nullptr;
  char* table = nullptr;
  char* error = nullptr;
  const auto started = std::chrono::steady_clock::now();
  const int rc = sdp_execute(config_json.c_str(), &report, &table, &error);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();

  int exit_code = rc;
  if (rc != 0) {
    std::cerr << "error: " << (error != nullptr ? error : "unknown failure")
              << "\n";
  } else {
    const std::string out_path = merged.value("output", std::string());
    const std::string csv_path = merged.value("csv", std::string());
    if (out_path.empty()) {
      std::fputs(report, stdout);
    } else if (!WriteFileOrComplain(out_path, report)) {
      exit_code = kExitConfig;
    }
    if (exit_code == 0 && table != nullptr &&
        !WriteFileOrComplain(csv_path, table)) {
      exit_code = kExitConfig;
    }
    std::fprintf(stderr, "wall_clock_seconds %.3f\n", elapsed);
  }

  sdp_free_string(report);
  sdp_free_string(table);
  sdp_free_string(error);
  return exit_code;
}

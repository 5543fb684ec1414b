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

#include "shuffledp.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "errors.hpp"
#include "experiment.hpp"
#include "version.hpp"

namespace {

char* CopyString(const std::string& s) {
  // malloc so sdp_free_string can be plain free across language borders.
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Store(char** slot, const std::string& s) {
  if (slot != nullptr) *slot = CopyString(s);
}

template <typename Fn>
int Guarded(char** error_out, Fn&& fn) {
  try {
    return fn();
  } catch (const shuffledp::WorkbenchError& e) {
    Store(error_out, e.what());
    return static_cast<int>(e.code());
  } catch (const std::bad_alloc&) {
    Store(error_out, "internal: out of memory");
    return SDP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    Store(error_out, std::string("internal: ") + e.what());
    return SDP_ERR_INTERNAL;
  }
}

}  // namespace

extern "C" {

int sdp_execute(const char* config_json, char** report_json, char** csv_out,
                char** error_out) {
  if (report_json != nullptr) *report_json = nullptr;
  if (csv_out != nullptr) *csv_out = nullptr;
  if (error_out != nullptr) *error_out = nullptr;
  if (config_json == nullptr) {
    Store(error_out, "config: null configuration string");
    return SDP_ERR_CONFIG;
  }
  return Guarded(error_out, [&]() {
    const shuffledp::ExperimentConfig config =
        shuffledp::ParseConfig(config_json);
    const shuffledp::ExperimentReport report =
        shuffledp::RunExperiment(config);
    Store(report_json, report.json);
    if (!report.csv.empty()) Store(csv_out, report.csv);
    return SDP_OK;
  });
}

int sdp_canonical_config(const char* config_json, char** canonical_out,
                         char** error_out) {
  if (canonical_out != nullptr) *canonical_out = nullptr;
  if (error_out != nullptr) *error_out = nullptr;
  if (config_json == nullptr) {
    Store(error_out, "config: null configuration string");
    return SDP_ERR_CONFIG;
  }
  return Guarded(error_out, [&]() {
    const shuffledp::ExperimentConfig config =
        shuffledp::ParseConfig(config_json);
    Store(canonical_out, shuffledp::SerializeConfig(config));
    return SDP_OK;
  });
}

void sdp_free_string(char* s) { std::free(s); }

const char* sdp_version(void) {
  static const std::string banner = std::string(shuffledp::kToolName) + " " +
                                    shuffledp::kToolVersion;
  return banner.c_str();
}

}  // extern "C"

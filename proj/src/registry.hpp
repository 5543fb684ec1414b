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
// Catalog of the protocols the batch front-end can name, with the commands
// each one supports. The builders for the two toy protocols used in audit
// examples live here too.

#ifndef SHUFFLEDP_REGISTRY_HPP_
#define SHUFFLEDP_REGISTRY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"

namespace shuffledp {

struct ProtocolCapabilities {
  bool run = false;
  bool mc = false;
  bool audit = false;  // exact-enumeration audits possible
};

struct RegistryEntry {
  std::string name;
  std::string summary;
  ProtocolCapabilities caps;
};

const std::vector<RegistryEntry>& ProtocolRegistry();

// Null when unknown.
const RegistryEntry* FindProtocol(const std::string& name);

// "a, b, c" for error messages naming the registry.
std::string RegistryNamesJoined();

// Input-ignoring baseline: every party sends a fixed byte, the analyzer
// answers 0. Its audit table is zero everywhere.
ProtocolSpec ConstantSpec(int n);

// Each party keeps its value with probability keep_num/keep_den, otherwise
// sends a uniform other value; the analyzer answers the most frequent value
// (ties to the smallest). Enumerable, so single-party audits give the
// closed-form randomized-response curve.
ProtocolSpec RandomizedResponseSpec(int n, uint64_t domain_size,
                                    uint64_t keep_num, uint64_t keep_den);

}  // namespace shuffledp

#endif  // SHUFFLEDP_REGISTRY_HPP_

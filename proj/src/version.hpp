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

#ifndef SHUFFLEDP_VERSION_HPP_
#define SHUFFLEDP_VERSION_HPP_

namespace shuffledp {

inline constexpr const char* kToolName = "shuffledp";

// Reports embed this; bump it when report content changes meaning, since
// regeneration promises byte-identical output per (config, seed, version).
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace shuffledp

#endif  // SHUFFLEDP_VERSION_HPP_

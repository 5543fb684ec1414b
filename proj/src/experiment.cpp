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

#include "experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <thread>
#include <utility>

#include <boost/math/distributions/binomial.hpp>
#include <json.hpp>

#include "common_prelude.hpp"
#include "common_two_round.hpp"
#include "dp_audit.hpp"
#include "errors.hpp"
#include "nested.hpp"
#include "registry.hpp"
#include "secure_message.hpp"
#include "share_split.hpp"
#include "version.hpp"

namespace shuffledp {

namespace {

using Json = nlohmann::ordered_json;

std::string HexBytes(const Bytes& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (char c : bytes) {
    const uint8_t b = static_cast<uint8_t>(c);
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

// Report convention for real numbers that carry audit semantics.
std::string Fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Config parsing

class ConfigReader {
 public:
  explicit ConfigReader(const Json& j) : j_(j) {
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
  }

  ~ConfigReader() = default;

  void FinishedReading() const {
    for (const auto& item : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), item.key()) == seen_.end()) {
        throw ConfigError("config: unknown field '" + item.key() + "'");
      }
    }
  }

  std::string String(const char* key, const std::string& fallback) {
    const Json* v = Look(key);
    if (v == nullptr) return fallback;
    if (!v->is_string()) throw ConfigError(TypeComplaint(key, "a string"));
    return v->get<std::string>();
  }

  bool Bool(const char* key, bool fallback) {
    const Json* v = Look(key);
    if (v == nullptr) return fallback;
    if (!v->is_boolean()) throw ConfigError(TypeComplaint(key, "a boolean"));
    return v->get<bool>();
  }

  int Int(const char* key, int fallback) {
    const Json* v = Look(key);
    if (v == nullptr) return fallback;
    if (!v->is_number_integer() && !v->is_number_unsigned()) {
      throw ConfigError(TypeComplaint(key, "an integer"));
    }
    const int64_t raw = v->get<int64_t>();
    if (raw < 0 || raw > INT32_MAX) {
      throw ConfigError("config: field '" + std::string(key) +
                        "' out of range");
    }
    return static_cast<int>(raw);
  }

  uint64_t U64(const char* key, uint64_t fallback) {
    const Json* v = Look(key);
    if (v == nullptr) return fallback;
    if (v->is_number_unsigned()) return v->get<uint64_t>();
    if (v->is_number_integer() && v->get<int64_t>() >= 0) {
      return static_cast<uint64_t>(v->get<int64_t>());
    }
    throw ConfigError(TypeComplaint(key, "a nonnegative integer"));
  }

  double Double(const char* key, double fallback) {
    const Json* v = Look(key);
    if (v == nullptr) return fallback;
    if (!v->is_number()) throw ConfigError(TypeComplaint(key, "a number"));
    return v->get<double>();
  }

  std::vector<double> DoubleVec(const char* key) {
    const Json* v = Look(key);
    std::vector<double> out;
    if (v == nullptr) return out;
    if (!v->is_array()) throw ConfigError(TypeComplaint(key, "an array"));
    for (const Json& item : *v) {
      if (!item.is_number()) {
        throw ConfigError(TypeComplaint(key, "an array of numbers"));
      }
      out.push_back(item.get<double>());
    }
    return out;
  }

  std::vector<uint64_t> U64Vec(const char* key) {
    const Json* v = Look(key);
    std::vector<uint64_t> out;
    if (v == nullptr) return out;
    if (!v->is_array()) throw ConfigError(TypeComplaint(key, "an array"));
    for (const Json& item : *v) {
      if (item.is_number_unsigned()) {
        out.push_back(item.get<uint64_t>());
      } else if (item.is_number_integer() && item.get<int64_t>() >= 0) {
        out.push_back(static_cast<uint64_t>(item.get<int64_t>()));
      } else {
        throw ConfigError(
            TypeComplaint(key, "an array of nonnegative integers"));
      }
    }
    return out;
  }

 private:
  const Json* Look(const char* key) {
    seen_.push_back(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  static std::string TypeComplaint(const char* key, const char* want) {
    return std::string("config: field '") + key + "' must be " + want;
  }

  const Json& j_;
  std::vector<std::string> seen_;
};

Json ConfigJson(const ExperimentConfig& c) {
  Json j;
  j["command"] = c.command;
  j["protocol"] = c.protocol;
  j["n"] = c.n;
  j["x_size"] = c.x_size;
  j["y_size"] = c.y_size;
  j["alpha"] = c.alpha;
  j["eps"] = c.eps;
  j["eps_grid"] = c.eps_grid;
  j["delta"] = c.delta;
  j["k"] = c.k;
  j["sigma"] = c.sigma;
  j["q"] = c.q;
  j["ell"] = c.ell;
  j["dim"] = c.dim;
  j["message_len"] = c.message_len;
  j["trials"] = c.trials;
  j["coalition_cap"] = c.coalition_cap;
  j["seed"] = c.seed;
  j["histogram"] = c.histogram;
  j["common_input"] = c.common_input;
  j["inputs"] = c.inputs;
  j["y_of_x"] = c.y_of_x;
  j["range_cap"] = c.range_cap;
  j["budget"] = c.budget;
  j["channel_delta"] = c.channel_delta;
  j["allow_small_group"] = c.allow_small_group;
  j["workers"] = c.workers;
  j["output"] = c.output;
  j["csv"] = c.csv;
  return j;
}

int RequirePositive(int v, const char* field) {
  if (v <= 0) {
    throw ConfigError(std::string("config: field '") + field +
                      "' must be positive");
  }
  return v;
}

uint64_t RequirePositiveU64(uint64_t v, const char* field) {
  if (v == 0) {
    throw ConfigError(std::string("config: field '") + field +
                      "' must be positive");
  }
  return v;
}

size_t ResolveWorkers(int configured) {
  if (configured > 0) return static_cast<size_t>(configured);
  if (const char* env = std::getenv("SHUFFLEDP_WORKERS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed > 0) return static_cast<size_t>(parsed);
  }
  return 1;
}

// ---------------------------------------------------------------------------
// Per-protocol parameter glue

CommonPreludeParams PreludeFrom(const ExperimentConfig& c) {
  CommonPreludeParams p;
  p.n = RequirePositive(c.n, "n");
  p.domain_size = RequirePositiveU64(c.x_size, "x_size");
  p.q = c.q != 0 ? c.q : 16 * p.domain_size;
  p.sigma = c.sigma;
  p.allow_small_group = c.allow_small_group;
  return p;
}

NestedParams NestedFrom(const ExperimentConfig& c) {
  NestedParams p;
  p.n = RequirePositive(c.n, "n");
  p.alpha = c.alpha;
  p.x_size = RequirePositiveU64(c.x_size, "x_size");
  p.y_size = RequirePositiveU64(c.y_size, "y_size");
  p.q = c.q != 0 ? c.q : 16 * p.x_size * p.y_size;
  p.sigma = c.sigma;
  p.allow_small_group = c.allow_small_group;
  return p;
}

CommonTwoRoundParams TwoRoundFrom(const ExperimentConfig& c) {
  CommonTwoRoundParams p;
  p.n = RequirePositive(c.n, "n");
  p.domain_size = RequirePositiveU64(c.x_size, "x_size");
  p.eps = c.eps;
  p.delta = c.delta;
  p.range_cap = c.range_cap;
  return p;
}

NestedTwoRoundParams NestedTwoFrom(const ExperimentConfig& c) {
  NestedTwoRoundParams p;
  p.n = RequirePositive(c.n, "n");
  p.alpha = c.alpha;
  p.x_size = RequirePositiveU64(c.x_size, "x_size");
  p.y_size = RequirePositiveU64(c.y_size, "y_size");
  p.eps = c.eps;
  p.delta = c.delta;
  p.range_cap = c.range_cap;
  p.injected_exact = c.histogram == "injected";
  return p;
}

ShareSumParams SplitSumFrom(const ExperimentConfig& c) {
  ShareSumParams p;
  p.n = RequirePositive(c.n, "n");
  p.q = RequirePositiveU64(c.q, "q");
  p.dim = RequirePositive(c.dim, "dim");
  p.ell = c.ell;
  p.sigma = c.sigma;
  return p;
}

int SmtMessageLen(const ExperimentConfig& c) {
  const int len = c.message_len > 0 ? c.message_len : c.k;
  RequirePositive(len, "message_len");
  if (len > c.k) {
    throw ConfigError("config: message_len exceeds k (" + std::to_string(len) +
                      " > " + std::to_string(c.k) + " payload bits)");
  }
  return len;
}

uint64_t CheckedCommonInput(const ExperimentConfig& c, uint64_t domain,
                            const char* what) {
  if (c.common_input >= domain) {
    throw ConfigError("config: common_input " +
                      std::to_string(c.common_input) + " outside the " +
                      what + " domain of size " + std::to_string(domain));
  }
  return c.common_input;
}

// Explicit per-party values when given, else the common input everywhere.
std::vector<uint64_t> FlatInputs(const ExperimentConfig& c, size_t count,
                                 uint64_t domain, const char* what) {
  std::vector<uint64_t> flat;
  if (c.inputs.empty()) {
    flat.assign(count, CheckedCommonInput(c, domain, what));
    return flat;
  }
  if (c.inputs.size() != count) {
    throw ConfigError("config: field 'inputs' lists " +
                      std::to_string(c.inputs.size()) + " values, want " +
                      std::to_string(count));
  }
  for (uint64_t v : c.inputs) {
    if (v >= domain) {
      throw ConfigError("config: input " + std::to_string(v) +
                        " outside the " + std::string(what) +
                        " domain of size " + std::to_string(domain));
    }
  }
  return c.inputs;
}

std::vector<Value> IntValues(std::span<const uint64_t> flat) {
  std::vector<Value> out;
  out.reserve(flat.size());
  for (uint64_t v : flat) out.push_back(Value::Int(v));
  return out;
}

std::vector<uint64_t> NestedVectorFrom(const ExperimentConfig& c,
                                       uint64_t x_size, uint64_t y_size) {
  std::vector<uint64_t> y_of_x = c.y_of_x;
  if (y_of_x.empty()) y_of_x.assign(x_size, 0);
  if (y_of_x.size() != x_size) {
    throw ConfigError("config: field 'y_of_x' lists " +
                      std::to_string(y_of_x.size()) + " entries, want " +
                      std::to_string(x_size));
  }
  for (uint64_t y : y_of_x) {
    if (y >= y_size) {
      throw ConfigError("config: y_of_x entry " + std::to_string(y) +
                        " outside the y domain of size " +
                        std::to_string(y_size));
    }
  }
  return y_of_x;
}

std::vector<Value> SplitSumInputs(const ExperimentConfig& c,
                                  const ShareSumParams& p) {
  const size_t count =
      static_cast<size_t>(p.n) * static_cast<size_t>(p.dim);
  std::vector<uint64_t> flat = FlatInputs(c, count, p.q, "group");
  std::vector<Value> out;
  out.reserve(static_cast<size_t>(p.n));
  for (int i = 0; i < p.n; ++i) {
    std::vector<Value> coords;
    coords.reserve(static_cast<size_t>(p.dim));
    for (int d = 0; d < p.dim; ++d) {
      coords.push_back(
          Value::Int(flat[static_cast<size_t>(i) * p.dim + d]));
    }
    out.push_back(Value::Seq(std::move(coords)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// run command

struct RunSetup {
  ProtocolSpec spec;
  std::vector<Value> inputs;
};

RunSetup BuildRunSetup(const ExperimentConfig& c) {
  RunSetup setup;
  if (c.protocol == "constant") {
    setup.spec = ConstantSpec(RequirePositive(c.n, "n"));
    setup.inputs.assign(static_cast<size_t>(c.n), Value::Int(0));
  } else if (c.protocol == "randomized-response") {
    const uint64_t domain = RequirePositiveU64(c.x_size, "x_size");
    setup.spec =
        RandomizedResponseSpec(RequirePositive(c.n, "n"), domain, 3, 4);
    setup.inputs = IntValues(
        FlatInputs(c, static_cast<size_t>(c.n), domain, "input"));
  } else if (c.protocol == "split-sum") {
    const ShareSumParams p = SplitSumFrom(c);
    setup.spec = ShareSumSpec(p);
    setup.inputs = SplitSumInputs(c, p);
  } else if (c.protocol == "secure-message") {
    const int len = SmtMessageLen(c);
    setup.spec = SmtProtocolSpec(c.k, len);
    const uint64_t limit = len == 64 ? UINT64_MAX
                                     : (uint64_t{1} << len) - 1;
    if (c.common_input > limit) {
      throw ConfigError("config: common_input does not fit in " +
                        std::to_string(len) + " message bits");
    }
    setup.inputs = {Value::Int(c.common_input), Value::Int(0)};
  } else if (c.protocol == "common-prelude") {
    const CommonPreludeParams p = PreludeFrom(c);
    setup.spec = CommonPreludeShareSpec(p);
    setup.inputs = IntValues(FlatInputs(c, static_cast<size_t>(p.n),
                                        p.domain_size, "input"));
  } else if (c.protocol == "common-two-round") {
    const CommonTwoRoundParams p = TwoRoundFrom(c);
    const std::vector<uint64_t> flat =
        FlatInputs(c, static_cast<size_t>(p.n), p.domain_size, "input");
    HistogramBackend backend;
    if (c.histogram == "injected") {
      backend.kind = HistogramBackend::Kind::kExactCounts;
      backend.true_inputs = flat;
    }
    setup.spec = CommonTwoRoundSpec(p, backend);
    setup.inputs = IntValues(flat);
  } else if (c.protocol == "nested-one-round") {
    const NestedParams p = NestedFrom(c);
    setup.spec = NestedOneRoundShareSpec(p);
    const std::vector<uint64_t> y_of_x =
        NestedVectorFrom(c, p.x_size, p.y_size);
    setup.inputs = NestedInputValues(
        p, MakeNestedInstance(p, CheckedCommonInput(c, p.x_size, "x"),
                              y_of_x));
  } else {
    throw InternalError("run: unhandled protocol " + c.protocol);
  }
  return setup;
}

Json TranscriptJson(const Transcript& t) {
  Json j;
  j["public_randomness"] = HexBytes(t.public_randomness);
  Json inputs = Json::array();
  for (const Value& v : t.inputs) inputs.push_back(v.ToString());
  j["inputs"] = std::move(inputs);
  Json rounds = Json::array();
  for (const ChannelOutput& out : t.channel_outputs) {
    Json round;
    round["channel"] =
        out.kind == ChannelKind::kShuffle ? "shuffle" : "public";
    Json messages = Json::array();
    for (const Message& m : out.messages) messages.push_back(HexBytes(m));
    round["messages"] = std::move(messages);
    rounds.push_back(std::move(round));
  }
  j["rounds"] = std::move(rounds);
  j["outcome"] = t.outcome.ToString();
  j["transcript_hex"] = HexBytes(t.Serialize());
  return j;
}

Json CmdRun(const ExperimentConfig& c) {
  if (c.protocol == "nested-two-round") {
    const NestedTwoRoundParams p = NestedTwoFrom(c);
    const std::vector<uint64_t> y_of_x =
        NestedVectorFrom(c, p.x_size, p.y_size);
    NestedParams split;
    split.n = p.n;
    split.alpha = p.alpha;
    split.x_size = p.x_size;
    split.y_size = p.y_size;
    split.q = 2;
    split.allow_small_group = true;
    const NestedInputs instance = MakeNestedInstance(
        split, CheckedCommonInput(c, p.x_size, "x"), y_of_x);
    const NestedTwoRoundResult result =
        RunNestedTwoRound(p, instance, c.seed);
    Json j;
    j["stage1"] = result.stage1.ToString();
    j["stage2"] = result.stage2.ToString();
    j["outcome"] = result.stage2.ToString();
    return j;
  }
  const RunSetup setup = BuildRunSetup(c);
  return TranscriptJson(RunProtocol(setup.spec, setup.inputs, c.seed));
}

// ---------------------------------------------------------------------------
// mc command

using TrialFn = std::function<ElementTrial(uint64_t)>;
// Each worker thread gets its own TrialFn so per-spec caches stay private.
using TrialFactory = std::function<TrialFn()>;

struct McCounts {
  uint64_t found = 0;
  uint64_t bottom = 0;
  uint64_t fail = 0;
  uint64_t noise_fired = 0;
  uint64_t nobody_participated = 0;
  uint64_t accidental_zero = 0;

  void Add(const ElementTrial& trial) {
    switch (trial.outcome.status) {
      case ElementStatus::kFound:
        ++found;
        break;
      case ElementStatus::kBottom:
        ++bottom;
        break;
      case ElementStatus::kFail:
        ++fail;
        break;
    }
    switch (trial.failure) {
      case ElementFailure::kNone:
        break;
      case ElementFailure::kNoiseFired:
        ++noise_fired;
        break;
      case ElementFailure::kNobodyParticipated:
        ++nobody_participated;
        break;
      case ElementFailure::kAccidentalZero:
        ++accidental_zero;
        break;
    }
  }

  void Merge(const McCounts& other) {
    found += other.found;
    bottom += other.bottom;
    fail += other.fail;
    noise_fired += other.noise_fired;
    nobody_participated += other.nobody_participated;
    accidental_zero += other.accidental_zero;
  }
};

McCounts RunTrials(uint64_t trials, uint64_t seed, size_t workers,
                   const TrialFactory& factory) {
  if (workers <= 1 || trials < 2 * workers) {
    McCounts counts;
    TrialFn run = factory();
    for (uint64_t t = 0; t < trials; ++t) {
      counts.Add(run(DeriveTrialSeed(seed, t)));
    }
    return counts;
  }
  std::vector<McCounts> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        TrialFn run = factory();
        for (uint64_t t = w; t < trials; t += workers) {
          partial[w].Add(run(DeriveTrialSeed(seed, t)));
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  McCounts counts;
  for (const McCounts& p : partial) counts.Merge(p);
  return counts;
}

ElementTrial PlainTrial(const ProtocolSpec& spec,
                        const std::vector<Value>& inputs,
                        const Value& expected, uint64_t seed) {
  ElementTrial trial;
  trial.outcome =
      ClassifyElementOutcome(RunProtocol(spec, inputs, seed).outcome,
                             expected);
  return trial;
}

ElementTrial SmtTrial(int k, int len, uint64_t seed) {
  RandomStream message_rng = DeriveStream(seed, kStreamHarness, 0, 12);
  std::vector<uint8_t> message(static_cast<size_t>(len));
  for (uint8_t& bit : message) {
    bit = static_cast<uint8_t>(message_rng.UniformBelow(2));
  }

  RandomStream sender_rng = DeriveStream(seed, kStreamHarness, 1, 12);
  const SmtSendResult sent = SmtSend(0, 1, k, message, sender_rng);

  RandomStream receiver_rng = DeriveStream(seed, kStreamHarness, 2, 12);
  std::vector<uint8_t> receiver_bits(static_cast<size_t>(kSmtBitFactor) * k);
  for (uint8_t& bit : receiver_bits) {
    bit = static_cast<uint8_t>(receiver_rng.UniformBelow(2));
  }

  std::vector<Message> channel = sent.messages;
  for (Message& m : SmtReceiverMessages(0, 1, k, receiver_bits)) {
    channel.push_back(std::move(m));
  }
  std::sort(channel.begin(), channel.end());

  const std::vector<uint8_t> recovered =
      SmtReceive(0, 1, k, receiver_bits, channel);

  ElementTrial trial;
  trial.outcome.status = recovered == message ? ElementStatus::kFound
                                              : ElementStatus::kFail;
  return trial;
}

ElementTrial SplitSumTrial(const ProtocolSpec& spec,
                           const ShareSumParams& p, uint64_t seed) {
  RandomStream input_rng = DeriveStream(seed, kStreamHarness, 0, 11);
  std::vector<Value> inputs;
  std::vector<uint64_t> sums(static_cast<size_t>(p.dim), 0);
  inputs.reserve(static_cast<size_t>(p.n));
  for (int i = 0; i < p.n; ++i) {
    std::vector<Value> coords;
    coords.reserve(static_cast<size_t>(p.dim));
    for (int d = 0; d < p.dim; ++d) {
      const uint64_t v = input_rng.UniformBelow(p.q);
      sums[static_cast<size_t>(d)] = (sums[static_cast<size_t>(d)] + v) % p.q;
      coords.push_back(Value::Int(v));
    }
    inputs.push_back(Value::Seq(std::move(coords)));
  }
  std::vector<Value> expected_coords;
  expected_coords.reserve(sums.size());
  for (uint64_t s : sums) expected_coords.push_back(Value::Int(s));
  return PlainTrial(spec, inputs, Value::Seq(std::move(expected_coords)),
                    seed);
}

TrialFactory BuildTrialFactory(const ExperimentConfig& c) {
  if (c.protocol == "randomized-response") {
    const uint64_t domain = RequirePositiveU64(c.x_size, "x_size");
    const int n = RequirePositive(c.n, "n");
    const uint64_t input = CheckedCommonInput(c, domain, "input");
    return [n, domain, input]() -> TrialFn {
      auto spec = std::make_shared<ProtocolSpec>(
          RandomizedResponseSpec(n, domain, 3, 4));
      auto inputs = std::make_shared<std::vector<Value>>(
          static_cast<size_t>(n), Value::Int(input));
      return [spec, inputs, input](uint64_t seed) {
        return PlainTrial(*spec, *inputs, Value::Int(input), seed);
      };
    };
  }
  if (c.protocol == "split-sum") {
    const ShareSumParams p = SplitSumFrom(c);
    return [p]() -> TrialFn {
      auto spec = std::make_shared<ProtocolSpec>(ShareSumSpec(p));
      return [spec, p](uint64_t seed) {
        return SplitSumTrial(*spec, p, seed);
      };
    };
  }
  if (c.protocol == "secure-message") {
    const int k = RequirePositive(c.k, "k");
    const int len = SmtMessageLen(c);
    return [k, len]() -> TrialFn {
      return [k, len](uint64_t seed) { return SmtTrial(k, len, seed); };
    };
  }
  if (c.protocol == "common-prelude") {
    const CommonPreludeParams p = PreludeFrom(c);
    ValidateCommonPreludeParams(p);
    const uint64_t input = CheckedCommonInput(c, p.domain_size, "input");
    return [p, input]() -> TrialFn {
      return [p, input](uint64_t seed) {
        return RunCommonPreludeTrial(p, input, seed);
      };
    };
  }
  if (c.protocol == "common-two-round") {
    const CommonTwoRoundParams p = TwoRoundFrom(c);
    const uint64_t input = CheckedCommonInput(c, p.domain_size, "input");
    const bool injected = c.histogram == "injected";
    return [p, input, injected]() -> TrialFn {
      HistogramBackend backend;
      if (injected) {
        backend.kind = HistogramBackend::Kind::kExactCounts;
        backend.true_inputs.assign(static_cast<size_t>(p.n), input);
      }
      auto spec =
          std::make_shared<ProtocolSpec>(CommonTwoRoundSpec(p, backend));
      auto inputs = std::make_shared<std::vector<Value>>(
          static_cast<size_t>(p.n), Value::Int(input));
      return [spec, inputs, input](uint64_t seed) {
        return PlainTrial(*spec, *inputs, Value::Int(input), seed);
      };
    };
  }
  if (c.protocol == "nested-one-round") {
    const NestedParams p = NestedFrom(c);
    ValidateNestedParams(p);
    const uint64_t input = CheckedCommonInput(c, p.x_size, "x");
    const std::vector<uint64_t> y_of_x =
        NestedVectorFrom(c, p.x_size, p.y_size);
    return [p, input, y_of_x]() -> TrialFn {
      return [p, input, y_of_x](uint64_t seed) {
        return RunNestedOneRoundTrial(p, input, y_of_x, seed);
      };
    };
  }
  if (c.protocol == "nested-two-round") {
    const NestedTwoRoundParams p = NestedTwoFrom(c);
    const std::vector<uint64_t> y_of_x =
        NestedVectorFrom(c, p.x_size, p.y_size);
    const uint64_t input = CheckedCommonInput(c, p.x_size, "x");
    return [p, input, y_of_x]() -> TrialFn {
      return [p, input, y_of_x](uint64_t seed) {
        ElementTrial trial;
        trial.outcome = RunNestedTwoRoundTrial(p, input, y_of_x, seed);
        return trial;
      };
    };
  }
  throw InternalError("mc: unhandled protocol " + c.protocol);
}

Json CmdMc(const ExperimentConfig& c) {
  if (c.trials == 0) {
    throw ConfigError("config: field 'trials' must be positive");
  }
  const McCounts counts = RunTrials(c.trials, c.seed,
                                    ResolveWorkers(c.workers),
                                    BuildTrialFactory(c));
  const double trials = static_cast<double>(c.trials);
  const double successes = static_cast<double>(counts.found);
  using boost::math::binomial_distribution;
  const double lo =
      binomial_distribution<>::find_lower_bound_on_p(trials, successes,
                                                     0.025);
  const double hi =
      binomial_distribution<>::find_upper_bound_on_p(trials, successes,
                                                     0.025);

  Json j;
  j["trials"] = c.trials;
  j["found"] = counts.found;
  j["bottom"] = counts.bottom;
  j["fail"] = counts.fail;
  j["success_rate"] = successes / trials;
  j["clopper_pearson_95"] = Json::array({lo, hi});
  const bool classified = c.protocol == "common-prelude" ||
                          c.protocol == "nested-one-round";
  if (classified) {
    Json breakdown;
    breakdown["noise_fired"] = counts.noise_fired;
    breakdown["nobody_participated"] = counts.nobody_participated;
    breakdown["accidental_zero"] = counts.accidental_zero;
    j["failure_modes"] = std::move(breakdown);
  }
  return j;
}

// ---------------------------------------------------------------------------
// audit command

struct AuditSetup {
  ProtocolSpec spec;
  std::vector<Value> base_inputs;
  std::vector<std::vector<Value>> domains;
  bool ideal_sum = false;
  uint64_t ideal_q = 0;
  size_t ideal_dim = 0;
};

std::vector<Value> IntDomain(uint64_t size) {
  std::vector<Value> out;
  out.reserve(size);
  for (uint64_t v = 0; v < size; ++v) out.push_back(Value::Int(v));
  return out;
}

// All q^dim coordinate vectors, refused beyond a small cap since audits
// enumerate every candidate pair.
std::vector<Value> VectorDomain(uint64_t q, int dim, uint64_t cap,
                                const char* what) {
  double total = 1;
  for (int d = 0; d < dim; ++d) total *= static_cast<double>(q);
  if (total > static_cast<double>(cap)) {
    throw ConfigError(std::string("config: ") + what + " audit domain has " +
                      Fmt12(total) + " candidate vectors, cap is " +
                      std::to_string(cap));
  }
  std::vector<Value> out;
  std::vector<uint64_t> odo(static_cast<size_t>(dim), 0);
  for (;;) {
    std::vector<Value> coords;
    coords.reserve(odo.size());
    for (uint64_t v : odo) coords.push_back(Value::Int(v));
    out.push_back(Value::Seq(std::move(coords)));
    size_t j = 0;
    while (j < odo.size() && ++odo[j] == q) {
      odo[j] = 0;
      ++j;
    }
    if (j == odo.size()) break;
  }
  return out;
}

AuditSetup BuildAuditSetup(const ExperimentConfig& c) {
  AuditSetup setup;
  if (c.protocol == "constant") {
    const int n = RequirePositive(c.n, "n");
    const uint64_t domain = c.x_size != 0 ? c.x_size : 2;
    setup.spec = ConstantSpec(n);
    setup.base_inputs.assign(static_cast<size_t>(n), Value::Int(0));
    setup.domains.assign(static_cast<size_t>(n), IntDomain(domain));
  } else if (c.protocol == "randomized-response") {
    const int n = RequirePositive(c.n, "n");
    const uint64_t domain = RequirePositiveU64(c.x_size, "x_size");
    setup.spec = RandomizedResponseSpec(n, domain, 3, 4);
    setup.base_inputs.assign(static_cast<size_t>(n),
                             Value::Int(CheckedCommonInput(c, domain,
                                                           "input")));
    setup.domains.assign(static_cast<size_t>(n), IntDomain(domain));
  } else if (c.protocol == "split-sum") {
    const ShareSumParams p = SplitSumFrom(c);
    setup.spec = ShareSumSpec(p);
    std::vector<Value> zero_coords(static_cast<size_t>(p.dim),
                                   Value::Int(0));
    setup.base_inputs.assign(static_cast<size_t>(p.n),
                             Value::Seq(zero_coords));
    setup.domains.assign(
        static_cast<size_t>(p.n),
        VectorDomain(p.q, p.dim, 4096, "split-sum"));
  } else if (c.protocol == "secure-message") {
    const int len = SmtMessageLen(c);
    if (len > 6) {
      throw ConfigError(
          "config: secure-message audits enumerate every payload, cap is 6 "
          "message bits");
    }
    setup.spec = SmtProtocolSpec(c.k, len);
    setup.base_inputs = {Value::Int(0), Value::Int(0)};
    setup.domains = {IntDomain(uint64_t{1} << len), {}};
  } else if (c.protocol == "common-prelude") {
    const CommonPreludeParams p = PreludeFrom(c);
    setup.spec = CommonPreludeIdealSpec(p);
    setup.base_inputs.assign(
        static_cast<size_t>(p.n),
        Value::Int(CheckedCommonInput(c, p.domain_size, "input")));
    setup.domains.assign(static_cast<size_t>(p.n),
                         IntDomain(p.domain_size));
    setup.ideal_sum = true;
    setup.ideal_q = p.q;
    setup.ideal_dim = p.domain_size;
  } else if (c.protocol == "nested-one-round") {
    const NestedParams p = NestedFrom(c);
    setup.spec = NestedOneRoundIdealSpec(p);
    const std::vector<uint64_t> y_of_x =
        NestedVectorFrom(c, p.x_size, p.y_size);
    setup.base_inputs = NestedInputValues(
        p, MakeNestedInstance(p, CheckedCommonInput(c, p.x_size, "x"),
                              y_of_x));
    const int x_count = NestedXPartyCount(p);
    const std::vector<Value> x_domain = IntDomain(p.x_size);
    const std::vector<Value> y_domain = VectorDomain(
        p.y_size, static_cast<int>(p.x_size), 4096, "nested y-vector");
    for (int i = 0; i < p.n; ++i) {
      setup.domains.push_back(i < x_count ? x_domain : y_domain);
    }
    setup.ideal_sum = true;
    setup.ideal_q = p.q;
    setup.ideal_dim =
        static_cast<size_t>(p.x_size) * static_cast<size_t>(p.y_size);
  } else {
    throw InternalError("audit: unhandled protocol " + c.protocol);
  }
  return setup;
}

std::string CoalitionLabel(std::span<const int> coalition) {
  std::string out;
  for (int member : coalition) {
    if (!out.empty()) out += "|";
    out += std::to_string(member);
  }
  return out;
}

std::string CsvQuote(const std::string& field) {
  return "\"" + field + "\"";
}

Json AuditJson(const DpAuditReport& r, const AuditSetup& setup) {
  Json j;
  j["note"] =
      "delta values are exact hockey-stick sums over the protocol's finite "
      "view space, so they cover every event";
  j["eps_grid"] = r.eps_grid;
  j["coalition_cap"] = r.coalition_cap;
  j["ideal_sum_views"] = setup.ideal_sum;
  j["distributions_enumerated"] = r.distributions_enumerated;
  Json rows = Json::array();
  for (const AuditRow& row : r.rows) {
    Json rj;
    rj["party"] = row.party;
    rj["lhs"] = row.lhs.ToString();
    rj["rhs"] = row.rhs.ToString();
    rj["coalition"] = row.coalition;
    Json cells = Json::array();
    for (const AuditDeltaCell& cell : row.cells) {
      Json cj;
      cj["eps"] = cell.eps();
      cj["delta"] = Fmt12(cell.Delta());
      cj["forward_p"] = RationalToString(cell.closeness.forward.p);
      cj["forward_q"] = RationalToString(cell.closeness.forward.q);
      cj["reverse_p"] = RationalToString(cell.closeness.reverse.p);
      cj["reverse_q"] = RationalToString(cell.closeness.reverse.q);
      cells.push_back(std::move(cj));
    }
    rj["cells"] = std::move(cells);
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  Json by_size;
  for (const auto& [size, deltas] : r.max_delta) {
    Json arr = Json::array();
    for (double d : deltas) arr.push_back(Fmt12(d));
    by_size[std::to_string(size)] = std::move(arr);
  }
  j["max_delta_by_coalition_size"] = std::move(by_size);
  Json overall = Json::array();
  for (double d : r.overall_delta) overall.push_back(Fmt12(d));
  j["overall_delta"] = std::move(overall);
  j["channel_delta"] = Fmt12(r.channel_delta);
  Json composed = Json::array();
  for (double d : r.end_to_end_delta) composed.push_back(Fmt12(d));
  j["end_to_end_delta"] = std::move(composed);
  return j;
}

std::string AuditCsv(const DpAuditReport& r) {
  std::string csv = "party,lhs,rhs,coalition,eps,delta\n";
  for (const AuditRow& row : r.rows) {
    for (const AuditDeltaCell& cell : row.cells) {
      csv += std::to_string(row.party);
      csv += ",";
      csv += CsvQuote(row.lhs.ToString());
      csv += ",";
      csv += CsvQuote(row.rhs.ToString());
      csv += ",";
      csv += CsvQuote(CoalitionLabel(row.coalition));
      csv += ",";
      csv += Fmt12(cell.eps());
      csv += ",";
      csv += Fmt12(cell.Delta());
      csv += "\n";
    }
  }
  return csv;
}

std::pair<Json, std::string> CmdAudit(const ExperimentConfig& c) {
  if (c.eps_grid.empty()) {
    throw ConfigError("config: audit needs a nonempty eps_grid");
  }
  const AuditSetup setup = BuildAuditSetup(c);
  DpAuditOptions options;
  options.eps_grid = c.eps_grid;
  if (c.coalition_cap < 0) {
    throw ConfigError("config: field 'coalition_cap' must be nonnegative");
  }
  options.coalitions.size_cap = static_cast<size_t>(c.coalition_cap);
  options.enumerate.leaf_budget = RequirePositiveU64(c.budget, "budget");
  options.enumerate.ideal_sum = setup.ideal_sum;
  options.enumerate.q = setup.ideal_q;
  options.enumerate.dim = setup.ideal_dim;
  options.channel_delta = c.channel_delta;
  options.workers = ResolveWorkers(c.workers);
  const DpAuditReport report =
      RunDpAudit(setup.spec, setup.base_inputs, setup.domains, options);
  return {AuditJson(report, setup), AuditCsv(report)};
}

// ---------------------------------------------------------------------------
// info command

Json EntryJson(const RegistryEntry& entry) {
  Json j;
  j["name"] = entry.name;
  j["summary"] = entry.summary;
  j["run"] = entry.caps.run;
  j["mc"] = entry.caps.mc;
  j["audit"] = entry.caps.audit;
  return j;
}

Json CmdInfo(const ExperimentConfig& c) {
  Json j;
  if (!c.protocol.empty()) {
    j["protocol"] = EntryJson(*FindProtocol(c.protocol));
    return j;
  }
  Json list = Json::array();
  for (const RegistryEntry& entry : ProtocolRegistry()) {
    list.push_back(EntryJson(entry));
  }
  j["protocols"] = std::move(list);
  return j;
}

void CheckCapability(const ExperimentConfig& c) {
  if (c.command == "info") return;
  const RegistryEntry* entry = FindProtocol(c.protocol);
  if (entry == nullptr) {
    throw InternalError("experiment: protocol vanished from the registry");
  }
  const bool ok = (c.command == "run" && entry->caps.run) ||
                  (c.command == "mc" && entry->caps.mc) ||
                  (c.command == "audit" && entry->caps.audit);
  if (!ok) {
    throw ConfigError("config: protocol '" + c.protocol +
                      "' does not support command '" + c.command + "'");
  }
}

}  // namespace

ExperimentConfig ParseConfig(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ConfigReader r(j);
  ExperimentConfig c;
  c.command = r.String("command", c.command);
  c.protocol = r.String("protocol", c.protocol);
  c.n = r.Int("n", c.n);
  c.x_size = r.U64("x_size", c.x_size);
  c.y_size = r.U64("y_size", c.y_size);
  c.alpha = r.Double("alpha", c.alpha);
  c.eps = r.Double("eps", c.eps);
  c.eps_grid = r.DoubleVec("eps_grid");
  c.delta = r.Double("delta", c.delta);
  c.k = r.Int("k", c.k);
  c.sigma = r.Int("sigma", c.sigma);
  c.q = r.U64("q", c.q);
  c.ell = r.Int("ell", c.ell);
  c.dim = r.Int("dim", c.dim);
  c.message_len = r.Int("message_len", c.message_len);
  c.trials = r.U64("trials", c.trials);
  c.coalition_cap = r.Int("coalition_cap", c.coalition_cap);
  c.seed = r.U64("seed", c.seed);
  c.histogram = r.String("histogram", c.histogram);
  c.common_input = r.U64("common_input", c.common_input);
  c.inputs = r.U64Vec("inputs");
  c.y_of_x = r.U64Vec("y_of_x");
  c.range_cap = r.U64("range_cap", c.range_cap);
  c.budget = r.U64("budget", c.budget);
  c.channel_delta = r.Double("channel_delta", c.channel_delta);
  c.allow_small_group = r.Bool("allow_small_group", c.allow_small_group);
  c.workers = r.Int("workers", c.workers);
  c.output = r.String("output", c.output);
  c.csv = r.String("csv", c.csv);
  r.FinishedReading();

  if (c.command != "run" && c.command != "mc" && c.command != "audit" &&
      c.command != "info") {
    throw ConfigError("config: command must be one of run, mc, audit, info");
  }
  if (c.histogram != "real" && c.histogram != "injected") {
    throw ConfigError("config: histogram must be 'real' or 'injected'");
  }
  if (c.command != "info" && c.protocol.empty()) {
    throw ConfigError("config: field 'protocol' is required; registry has: " +
                      RegistryNamesJoined());
  }
  if (!c.protocol.empty() && FindProtocol(c.protocol) == nullptr) {
    throw ConfigError("config: unknown protocol '" + c.protocol +
                      "'; registry has: " + RegistryNamesJoined());
  }
  for (size_t i = 0; i < c.eps_grid.size(); ++i) {
    if (c.eps_grid[i] < 0) {
      throw ConfigError("config: eps_grid values must be nonnegative");
    }
    if (i > 0 && !(c.eps_grid[i - 1] < c.eps_grid[i])) {
      throw ConfigError("config: eps_grid must be strictly ascending");
    }
  }
  if (!(c.channel_delta >= 0.0) || c.channel_delta > 1.0) {
    throw ConfigError("config: channel_delta must lie in [0, 1]");
  }
  return c;
}

std::string SerializeConfig(const ExperimentConfig& config) {
  return ConfigJson(config).dump(2) + "\n";
}

ExperimentReport RunExperiment(const ExperimentConfig& config) {
  CheckCapability(config);
  Json result;
  std::string csv;
  if (config.command == "run") {
    result = CmdRun(config);
  } else if (config.command == "mc") {
    result = CmdMc(config);
  } else if (config.command == "audit") {
    auto [json, table] = CmdAudit(config);
    result = std::move(json);
    csv = std::move(table);
  } else {
    result = CmdInfo(config);
  }

  Json report;
  report["tool"] = kToolName;
  report["version"] = kToolVersion;
  report["config"] = ConfigJson(config);
  report["result"] = std::move(result);

  ExperimentReport out;
  out.json = report.dump(2) + "\n";
  if (!config.csv.empty()) {
    if (config.command != "audit") {
      throw ConfigError("config: csv output only applies to audit runs");
    }
    out.csv = csv;
  }
  return out;
}

}  // namespace shuffledp

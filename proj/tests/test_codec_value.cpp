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

#include <cstdint>
#include <vector>

#include "codec.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "value.hpp"

namespace shuffledp {
namespace {

TEST_CASE("uvarint round-trips boundary values") {
  const uint64_t cases[] = {0,     1,          127,        128,
                            16383, 16384,      1u << 20,   uint64_t{1} << 62,
                            UINT64_MAX};
  for (uint64_t v : cases) {
    Bytes buf;
    codec::PutUvarint(buf, v);
    codec::Reader r(buf);
    CHECK(r.Uvarint() == v);
    CHECK(r.Done());
  }
}

TEST_CASE("uvarint rejects malformed input") {
  SUBCASE("truncated") {
    Bytes buf;
    buf.push_back(static_cast<char>(0x80));
    codec::Reader r(buf);
    CHECK_THROWS_AS(r.Uvarint(), WorkbenchError);
  }
  SUBCASE("non-minimal encoding") {
    // 1 encoded with a redundant continuation byte.
    Bytes buf;
    buf.push_back(static_cast<char>(0x81));
    buf.push_back(static_cast<char>(0x00));
    codec::Reader r(buf);
    CHECK_THROWS_AS(r.Uvarint(), WorkbenchError);
  }
  SUBCASE("overflow past 64 bits") {
    Bytes buf;
    for (int i = 0; i < 10; ++i) buf.push_back(static_cast<char>(0xff));
    buf.push_back(static_cast<char>(0x01));
    codec::Reader r(buf);
    CHECK_THROWS_AS(r.Uvarint(), WorkbenchError);
  }
}

TEST_CASE("blob framing keeps payload and detects truncation") {
  Bytes buf;
  codec::PutBlob(buf, "hello");
  codec::PutBlob(buf, "");
  codec::Reader r(buf);
  CHECK(r.Blob() == "hello");
  CHECK(r.Blob() == "");
  r.ExpectDone();

  Bytes cut = buf.substr(0, 3);
  codec::Reader bad(cut);
  CHECK_THROWS_AS(bad.Blob(), WorkbenchError);
}

TEST_CASE("reader flags trailing bytes") {
  Bytes buf;
  codec::PutU8(buf, 7);
  codec::PutU8(buf, 9);
  codec::Reader r(buf);
  r.U8();
  CHECK_FALSE(r.Done());
  CHECK_THROWS_AS(r.ExpectDone("unit"), WorkbenchError);
}

TEST_CASE("value encodes and decodes every kind") {
  std::vector<Value> cases = {
      Value::Bottom(),
      Value::Int(0),
      Value::Int(UINT64_MAX),
      Value::Blob(Bytes("\x00\xff\x10", 3)),
      Value::Seq({}),
      Value::Seq({Value::Int(3), Value::Bottom(),
                  Value::Seq({Value::Blob("x"), Value::Int(1)})}),
  };
  for (const Value& v : cases) {
    CHECK(Value::Decode(v.Encode()) == v);
  }
}

Value RandomValue(RandomStream& rng, int depth) {
  switch (depth == 0 ? rng.UniformBelow(3) : rng.UniformBelow(4)) {
    case 0:
      return Value::Bottom();
    case 1:
      return Value::Int(rng.Next());
    case 2:
      return Value::Blob(rng.RandomBytes(rng.UniformBelow(9)));
    default: {
      std::vector<Value> items;
      const uint64_t count = rng.UniformBelow(4);
      for (uint64_t i = 0; i < count; ++i) {
        items.push_back(RandomValue(rng, depth - 1));
      }
      return Value::Seq(std::move(items));
    }
  }
}

TEST_CASE("random values round-trip and order consistently") {
  RandomStream rng(0x5eed);
  for (int i = 0; i < 500; ++i) {
    const Value a = RandomValue(rng, 3);
    const Value b = RandomValue(rng, 3);
    CHECK(Value::Decode(a.Encode()) == a);
    // The order is total: exactly one of <, ==, > holds.
    const int lt = a < b ? 1 : 0;
    const int gt = b < a ? 1 : 0;
    const int eq = a == b ? 1 : 0;
    CHECK(lt + gt + eq == 1);
    if (eq == 1) CHECK(a.Encode() == b.Encode());
  }
}

TEST_CASE("value accessors enforce the kind") {
  CHECK(Value::Int(5).AsInt() == 5);
  CHECK_THROWS_AS(Value::Int(5).AsBytes(), WorkbenchError);
  CHECK_THROWS_AS(Value::Bottom().AsInt(), WorkbenchError);
  CHECK(Value::Bottom().is_bottom());
}

TEST_CASE("value ToString is stable and readable") {
  CHECK(Value::Bottom().ToString() == "_");
  CHECK(Value::Int(42).ToString() == "42");
  const Value seq = Value::Seq({Value::Int(1), Value::Int(2)});
  CHECK(seq.ToString().find('1') != std::string::npos);
  CHECK(seq.ToString().find('2') != std::string::npos);
}

}  // namespace
}  // namespace shuffledp

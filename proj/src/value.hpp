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

#ifndef SHUFFLEDP_VALUE_HPP_
#define SHUFFLEDP_VALUE_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "codec.hpp"

namespace shuffledp {

// Small algebraic value for protocol inputs and analyzer outcomes:
// Bottom (explicit abstention), an unsigned integer, a byte string, or a
// sequence of values. Carries a canonical injective byte encoding.
class Value {
 public:
  enum class Kind : uint8_t { kBottom = 0, kInt = 1, kBytes = 2, kSeq = 3 };

  Value() : kind_(Kind::kBottom) {}

  static Value Bottom() { return Value(); }
  static Value Int(uint64_t v) {
    Value out;
    out.kind_ = Kind::kInt;
    out.int_ = v;
    return out;
  }
  static Value Blob(Bytes b) {
    Value out;
    out.kind_ = Kind::kBytes;
    out.bytes_ = std::move(b);
    return out;
  }
  static Value Seq(std::vector<Value> items) {
    Value out;
    out.kind_ = Kind::kSeq;
    out.seq_ = std::move(items);
    return out;
  }

  Kind kind() const { return kind_; }
  bool is_bottom() const { return kind_ == Kind::kBottom; }

  uint64_t AsInt() const {
    if (kind_ != Kind::kInt) throw InternalError("Value: not an integer");
    return int_;
  }
  const Bytes& AsBytes() const {
    if (kind_ != Kind::kBytes) throw InternalError("Value: not bytes");
    return bytes_;
  }
  const std::vector<Value>& AsSeq() const {
    if (kind_ != Kind::kSeq) throw InternalError("Value: not a sequence");
    return seq_;
  }

  Bytes Encode() const;
  static Value Decode(const Bytes& data);

  // Human-readable form for reports: Bottom -> "_", ints decimal, bytes hex,
  // sequences bracketed.
  std::string ToString() const;

  bool operator==(const Value& other) const = default;
  std::strong_ordering operator<=>(const Value& other) const;

 private:
  void EncodeInto(Bytes& out) const;
  static Value DecodeFrom(codec::Reader& r);

  Kind kind_;
  uint64_t int_ = 0;
  Bytes bytes_;
  std::vector<Value> seq_;
};

}  // namespace shuffledp

#endif  // SHUFFLEDP_VALUE_HPP_

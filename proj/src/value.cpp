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

#include "value.hpp"

#include <sstream>

namespace shuffledp {

void Value::EncodeInto(Bytes& out) const {
  codec::PutU8(out, static_cast<uint8_t>(kind_));
  switch (kind_) {
    case Kind::kBottom:
      break;
    case Kind::kInt:
      codec::PutUvarint(out, int_);
      break;
    case Kind::kBytes:
      codec::PutBlob(out, bytes_);
      break;
    case Kind::kSeq:
      codec::PutUvarint(out, seq_.size());
      for (const Value& v : seq_) v.EncodeInto(out);
      break;
  }
}

Bytes Value::Encode() const {
  Bytes out;
  EncodeInto(out);
  return out;
}

Value Value::DecodeFrom(codec::Reader& r) {
  switch (static_cast<Kind>(r.U8())) {
    case Kind::kBottom:
      return Bottom();
    case Kind::kInt:
      return Int(r.Uvarint());
    case Kind::kBytes:
      return Blob(r.Blob());
    case Kind::kSeq: {
      uint64_t count = r.Uvarint();
      std::vector<Value> items;
      items.reserve(count);
      for (uint64_t i = 0; i < count; ++i) items.push_back(DecodeFrom(r));
      return Seq(std::move(items));
    }
  }
  throw InternalError("Value: unknown kind tag");
}

Value Value::Decode(const Bytes& data) {
  codec::Reader r(data);
  Value v = DecodeFrom(r);
  r.ExpectDone();
  return v;
}

std::strong_ordering Value::operator<=>(const Value& other) const {
  if (kind_ != other.kind_) return kind_ <=> other.kind_;
  switch (kind_) {
    case Kind::kBottom:
      return std::strong_ordering::equal;
    case Kind::kInt:
      return int_ <=> other.int_;
    case Kind::kBytes:
      return bytes_.compare(other.bytes_) <=> 0;
    case Kind::kSeq: {
      size_t n = std::min(seq_.size(), other.seq_.size());
      for (size_t i = 0; i < n; ++i) {
        auto c = seq_[i] <=> other.seq_[i];
        if (c != 0) return c;
      }
      return seq_.size() <=> other.seq_.size();
    }
  }
  return std::strong_ordering::equal;
}

std::string Value::ToString() const {
  switch (kind_) {
    case Kind::kBottom:
      return "_";
    case Kind::kInt:
      return std::to_string(int_);
    case Kind::kBytes: {
      static const char* kHex = "0123456789abcdef";
      std::string out = "0x";
      for (unsigned char c : bytes_) {
        out.push_back(kHex[c >> 4]);
        out.push_back(kHex[c & 0xf]);
      }
      return out;
    }
    case Kind::kSeq: {
      std::ostringstream out;
      out << "[";
      for (size_t i = 0; i < seq_.size(); ++i) {
        if (i) out << ",";
        out << seq_[i].ToString();
      }
      out << "]";
      return out.str();
    }
  }
  return "?";
}

}  // namespace shuffledp

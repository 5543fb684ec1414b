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
// Canonical byte encoding used for protocol messages, transcript
// serialization and view keys. Every encoder is injective given a schema and
// produces exactly one byte string per logical value; varints must be
// minimal, so decode(encode(x)) == x and encode(decode(b)) == b.

#ifndef SHUFFLEDP_CODEC_HPP_
#define SHUFFLEDP_CODEC_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace shuffledp {

// Raw byte storage. std::string keeps small payloads inline and its
// operator< is unsigned lexicographic order, which is the canonical message
// order used by the shuffle channel.
using Bytes = std::string;

namespace codec {

inline void PutU8(Bytes& out, uint8_t v) { out.push_back(static_cast<char>(v)); }

// Unsigned LEB128, minimal length.
inline void PutUvarint(Bytes& out, uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

inline void PutBlob(Bytes& out, std::string_view blob) {
  PutUvarint(out, blob.size());
  out.append(blob.data(), blob.size());
}

class Reader {
 public:
  explicit Reader(std::string_view data) : rest_(data) {}

  uint8_t U8() {
    if (rest_.empty()) throw InternalError("codec: truncated u8");
    uint8_t v = static_cast<uint8_t>(rest_.front());
    rest_.remove_prefix(1);
    return v;
  }

  uint64_t Uvarint() {
    uint64_t v = 0;
    int shift = 0;
    size_t i = 0;
    for (; i < rest_.size(); ++i) {
      uint8_t byte = static_cast<uint8_t>(rest_[i]);
      if (shift == 63 && byte > 1) throw InternalError("codec: varint overflow");
      v |= static_cast<uint64_t>(byte & 0x7f) << shift;
      if ((byte & 0x80) == 0) {
        // Reject non-minimal encodings so the mapping stays one-to-one.
        if (byte == 0 && i > 0) throw InternalError("codec: non-minimal varint");
        rest_.remove_prefix(i + 1);
        return v;
      }
      shift += 7;
      if (shift > 63) throw InternalError("codec: varint overflow");
    }
    throw InternalError("codec: truncated varint");
  }

  Bytes Blob() {
    uint64_t len = Uvarint();
    if (len > rest_.size()) throw InternalError("codec: truncated blob");
    Bytes b(rest_.substr(0, len));
    rest_.remove_prefix(len);
    return b;
  }

  bool Done() const { return rest_.empty(); }

  void ExpectDone(const char* what = "value") const {
    if (!Done()) {
      throw InternalError(std::string("codec: trailing bytes after ") + what);
    }
  }

  std::string_view Rest() const { return rest_; }

 private:
  std::string_view rest_;
};

// Tuple-of-byte-strings helpers for composite map keys.
inline Bytes EncodeSeq(std::span<const Bytes> parts) {
  Bytes out;
  PutUvarint(out, parts.size());
  for (const Bytes& p : parts) PutBlob(out, p);
  return out;
}

}  // namespace codec
}  // namespace shuffledp

#endif  // SHUFFLEDP_CODEC_HPP_

// Copyright 2026 The OTS-SKE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef OTSSKE_BYTES_HPP_
#define OTSSKE_BYTES_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace otsske {

using Bytes = std::vector<uint8_t>;
using ByteView = std::span<const uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) {
  auto v = as_bytes(s);
  return Bytes(v.begin(), v.end());
}

std::string to_hex(ByteView data);

// Throws Error(kInvalidEncoding) on odd length or a non-hex character.
Bytes from_hex(std::string_view hex);

// Big-endian writer for the wire formats. Variable-length fields are
// prefixed with an 8-byte big-endian length.
class ByteWriter {
 public:
  ByteWriter& put_u8(uint8_t v);
  ByteWriter& put_u64(uint64_t v);
  ByteWriter& put_raw(ByteView data);
  ByteWriter& put_prefixed(ByteView data);

  const Bytes& bytes() const { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

// Reader counterpart; every getter throws Error(kTruncated) when the input
// runs out.
class ByteReader {
 public:
  explicit ByteReader(ByteView in) : in_(in) {}

  uint8_t get_u8();
  uint64_t get_u64();
  ByteView get_raw(size_t n);
  // |max_len| bounds the declared length before any allocation happens.
  ByteView get_prefixed(size_t max_len = SIZE_MAX);

  size_t remaining() const { return in_.size() - pos_; }
  // Throws Error(kInvalidLength) if trailing bytes remain.
  void expect_end() const;

 private:
  ByteView in_;
  size_t pos_ = 0;
};

// Length-prefixed concatenation of |parts|; the unambiguous framing used
// for every multi-part hash input.
Bytes encode_parts(std::span<const ByteView> parts);

}  // namespace otsske

#endif  // OTSSKE_BYTES_HPP_

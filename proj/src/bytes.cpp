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

#include "otsske/bytes.hpp"

#include <string>

#include "otsske/error.hpp"

namespace otsske {

std::string to_hex(ByteView data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (uint8_t b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) {
    throw Error(ErrorCode::kInvalidEncoding, "hex string has odd length");
  }
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = hex_value(hex[2 * i]);
    int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) {
      throw Error(ErrorCode::kInvalidEncoding, "invalid hex digit");
    }
    out[i] = static_cast<uint8_t>(hi << 4 | lo);
  }
  return out;
}

ByteWriter& ByteWriter::put_u8(uint8_t v) {
  out_.push_back(v);
  return *this;
}

ByteWriter& ByteWriter::put_u64(uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out_.push_back(static_cast<uint8_t>(v >> shift));
  }
  return *this;
}

ByteWriter& ByteWriter::put_raw(ByteView data) {
  out_.insert(out_.end(), data.begin(), data.end());
  return *this;
}

ByteWriter& ByteWriter::put_prefixed(ByteView data) {
  put_u64(data.size());
  return put_raw(data);
}

uint8_t ByteReader::get_u8() { return get_raw(1)[0]; }

uint64_t ByteReader::get_u64() {
  ByteView raw = get_raw(8);
  uint64_t v = 0;
  for (uint8_t b : raw) v = v << 8 | b;
  return v;
}

ByteView ByteReader::get_raw(size_t n) {
  if (n > remaining()) {
    throw Error(ErrorCode::kTruncated, "input truncated: need " +
                                           std::to_string(n) + " bytes, have " +
                                           std::to_string(remaining()));
  }
  ByteView out = in_.subspan(pos_, n);
  pos_ += n;
  return out;
}

ByteView ByteReader::get_prefixed(size_t max_len) {
  uint64_t len = get_u64();
  if (len > max_len) {
    throw Error(ErrorCode::kInvalidLength,
                "length prefix " + std::to_string(len) + " exceeds limit " +
                    std::to_string(max_len));
  }
  return get_raw(static_cast<size_t>(len));
}

void ByteReader::expect_end() const {
  if (remaining() != 0) {
    throw Error(ErrorCode::kInvalidLength,
                std::to_string(remaining()) + " trailing bytes");
  }
}

Bytes encode_parts(std::span<const ByteView> parts) {
  ByteWriter w;
  for (ByteView p : parts) w.put_prefixed(p);
  return w.take();
}

}  // namespace otsske

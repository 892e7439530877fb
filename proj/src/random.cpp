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

#include "otsske/random.hpp"

#include <openssl/rand.h>
#include <openssl/sha.h>

#include <algorithm>

#include "otsske/bytes.hpp"
#include "otsske/error.hpp"

namespace otsske {

SeededRandom::SeededRandom(uint64_t seed, std::string_view label) {
  ByteWriter w;
  w.put_prefixed(as_bytes("OTSSKE/DRBG")).put_u64(seed).put_prefixed(
      as_bytes(label));
  SHA256(w.bytes().data(), w.bytes().size(), key_.data());
}

void SeededRandom::refill() {
  ByteWriter w;
  w.put_raw(key_).put_u64(counter_++);
  SHA256(w.bytes().data(), w.bytes().size(), block_.data());
  used_ = 0;
}

void SeededRandom::fill(std::span<uint8_t> out) {
  size_t done = 0;
  while (done < out.size()) {
    if (used_ == block_.size()) refill();
    size_t n = std::min(out.size() - done, block_.size() - used_);
    std::copy_n(block_.begin() + used_, n, out.begin() + done);
    used_ += n;
    done += n;
  }
}

void SystemRandom::fill(std::span<uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error(ErrorCode::kRandomnessFailure, "RAND_bytes failed");
  }
}

std::unique_ptr<RandomSource> make_random(std::optional<uint64_t> seed,
                                          std::string_view label) {
  if (seed) return std::make_unique<SeededRandom>(*seed, label);
  return std::make_unique<SystemRandom>();
}

}  // namespace otsske

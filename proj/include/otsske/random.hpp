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

#ifndef OTSSKE_RANDOM_HPP_
#define OTSSKE_RANDOM_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace otsske {

// All sampling in the library goes through this interface.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual void fill(std::span<uint8_t> out) = 0;
};

// Deterministic SHA-256 counter-mode generator. Streams with the same
// (seed, label) produce identical output; distinct labels give independent
// streams, which keeps multi-actor transcripts replayable regardless of
// thread interleaving.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(uint64_t seed, std::string_view label = "");

  void fill(std::span<uint8_t> out) override;

 private:
  void refill();

  std::array<uint8_t, 32> key_{};
  uint64_t counter_ = 0;
  std::array<uint8_t, 32> block_{};
  size_t used_ = 32;
};

// Operating-system entropy through OpenSSL's RAND_bytes.
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<uint8_t> out) override;
};

// A SeededRandom when |seed| is set, SystemRandom otherwise.
std::unique_ptr<RandomSource> make_random(std::optional<uint64_t> seed,
                                          std::string_view label = "");

}  // namespace otsske

#endif  // OTSSKE_RANDOM_HPP_

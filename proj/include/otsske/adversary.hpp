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

// Forgery harness for the key-exposure game: an adversary that has seen
// every announced aux, every served subkey subset and every exchanged quote
// tries to get a quote for a new result accepted. Only logged values are
// used.

#ifndef OTSSKE_ADVERSARY_HPP_
#define OTSSKE_ADVERSARY_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "otsske/ra.hpp"

namespace otsske::ra {

enum class ForgeryStrategy {
  kReplay,          // (a) logged quote, result swapped for the new one
  kReaggregate,     // (b) logged subset multiplied for the new selection
  kCrossSession,    // (c) another session's (aux, aggregate) under ctr = i*
  kMixAndMatch,     // (d) aux of i* with another session's aggregate
  kSameMessage,     // (e) re-signing the logged message; allowed to verify
};

enum class ForgeryOutcome { kVerified, kRejected, kInsufficientMaterial };

std::string_view strategy_name(ForgeryStrategy s);
std::string_view outcome_name(ForgeryOutcome o);

struct ForgeryTarget {
  uint64_t session = 0;  // i*
  Bytes result;          // R*, giving M* != M_i*
  Nonce nonce{};         // the verifier's fresh challenge
};

struct ForgeryAttempt {
  ForgeryStrategy strategy;
  ForgeryOutcome outcome;
  std::string detail;
};

// Runs strategies (a)-(e) in order against |target|.
std::vector<ForgeryAttempt> adversary_forge_attempts(const AdversaryLog& log,
                                                     const PublicKey& pk,
                                                     const SchemeParams& params,
                                                     const ForgeryTarget& target);

struct GameConfig {
  SchemeParams params;
  uint64_t seed = 0;
  uint32_t targets_per_session = 4;  // fresh results R* tried per session
};

struct GameReport {
  std::vector<std::string> lines;
  uint64_t new_message_attempts = 0;
  uint64_t new_message_verified = 0;
  uint64_t same_message_attempts = 0;
  uint64_t same_message_verified = 0;

  // New-message forgeries all failed and every same-message re-sign passed.
  bool expected_pattern() const {
    return new_message_attempts > 0 && new_message_verified == 0 &&
           same_message_attempts > 0 &&
           same_message_verified == same_message_attempts;
  }
};

// Runs N honest sessions, then the forgery catalogue for every session.
GameReport run_game(const GameConfig& config);

}  // namespace otsske::ra

#endif  // OTSSKE_ADVERSARY_HPP_

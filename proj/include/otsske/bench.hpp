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


// Timing harness comparing OTS-SKE against the ECDSA baseline.
//
// Timed regions:
//   otsske.keygen.{v,aux,sk}  the three phases inside gen_session
//   otsske.keygen.total       one whole gen_session call
//   otsske.sign               selection + aggregation (compressed variant)
//   otsske.verify             selection + the pairing check
//   ecdsa.keygen              scalar draw + public point
//   ecdsa.sign / ecdsa.verify SHA-256 of the message included, key
//                             objects rebuilt from bytes on every call

#ifndef OTSSKE_BENCH_HPP_
#define OTSSKE_BENCH_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "otsske/scheme.hpp"

namespace otsske::bench {

struct BenchConfig {
  SchemeParams params;
  uint32_t repetitions = 100;
  uint32_t warmup = 3;
  uint64_t seed = 0;
};

struct Stats {
  double mean_ms = 0;
  double median_ms = 0;
  double stddev_ms = 0;  // sample stddev; NaN with a single sample
  uint32_t samples = 0;
};

Stats summarize(const std::vector<double>& samples_ms);

// Published reference row (milliseconds), carried in the report and never
// compared against.
struct ReferenceRow {
  double keygen_v_ms = 131.4;
  double keygen_aux_ms = 4.0;
  double keygen_sk_ms = 253.2;
  double keygen_total_ms = 388.6;
  double sign_ms = 3.4;
  double verify_ms = 127.3;
  double ecdsa_keygen_ms = 21.2;
  double ecdsa_sign_ms = 23.1;
  double ecdsa_verify_ms = 74.2;
};

struct BenchReport {
  BenchConfig config;
  Stats keygen_v;
  Stats keygen_aux;
  Stats keygen_sk;
  Stats keygen_total;
  Stats sign;
  Stats verify;
  Stats ecdsa_keygen;
  Stats ecdsa_sign;
  Stats ecdsa_verify;

  uint64_t sign_pairings = 0;    // per compressed signature
  uint64_t verify_pairings = 0;  // per compressed verification
  uint64_t subkeys_per_keygen = 0;
  uint64_t otsske_verify_failures = 0;
  uint64_t ecdsa_verify_failures = 0;
  ReferenceRow reference;

  double phase_sum_ms() const {
    return keygen_v.mean_ms + keygen_aux.mean_ms + keygen_sk.mean_ms;
  }

  // One key=value per line.
  std::string to_key_value() const;
  // Aligned table for humans.
  std::string to_table() const;
};

// Throws kInvalidParameters when repetitions is 0 or params are invalid.
BenchReport bench_run(const BenchConfig& config);

// Keys that every report file carries.
const std::vector<std::string_view>& required_report_keys();

}  // namespace otsske::bench

#endif  // OTSSKE_BENCH_HPP_

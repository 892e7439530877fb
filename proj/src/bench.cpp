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


#include "otsske/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "otsske/ecdsa.hpp"
#include "otsske/error.hpp"

namespace otsske::bench {

namespace {

using Clock = std::chrono::steady_clock;

double since_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

std::string fmt(double v) {
  if (std::isnan(v)) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string fmt_ref(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

struct Row {
  std::string_view key;  // without the _ms suffix
  const Stats* stats;
  double reference;
};

std::vector<Row> rows(const BenchReport& r) {
  return {
      {"otsske.keygen.v", &r.keygen_v, r.reference.keygen_v_ms},
      {"otsske.keygen.aux", &r.keygen_aux, r.reference.keygen_aux_ms},
      {"otsske.keygen.sk", &r.keygen_sk, r.reference.keygen_sk_ms},
      {"otsske.keygen.total", &r.keygen_total, r.reference.keygen_total_ms},
      {"otsske.sign", &r.sign, r.reference.sign_ms},
      {"otsske.verify", &r.verify, r.reference.verify_ms},
      {"ecdsa.keygen", &r.ecdsa_keygen, r.reference.ecdsa_keygen_ms},
      {"ecdsa.sign", &r.ecdsa_sign, r.reference.ecdsa_sign_ms},
      {"ecdsa.verify", &r.ecdsa_verify, r.reference.ecdsa_verify_ms},
  };
}

}  // namespace

Stats summarize(const std::vector<double>& samples) {
  Stats s;
  s.samples = static_cast<uint32_t>(samples.size());
  if (samples.empty()) {
    s.mean_ms = s.median_ms = s.stddev_ms =
        std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  s.mean_ms = std::accumulate(samples.begin(), samples.end(), 0.0) /
              static_cast<double>(samples.size());
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  size_t mid = sorted.size() / 2;
  s.median_ms = sorted.size() % 2 ? sorted[mid]
                                  : (sorted[mid - 1] + sorted[mid]) / 2;
  if (samples.size() < 2) {
    s.stddev_ms = std::numeric_limits<double>::quiet_NaN();
  } else {
    double acc = 0;
    for (double v : samples) acc += (v - s.mean_ms) * (v - s.mean_ms);
    s.stddev_ms = std::sqrt(acc / static_cast<double>(samples.size() - 1));
  }
  return s;
}

const std::vector<std::string_view>& required_report_keys() {
  static const std::vector<std::string_view> keys = {
      "otsske.keygen.v_ms", "otsske.keygen.aux_ms", "otsske.keygen.sk_ms",
      "otsske.sign_ms",     "otsske.verify_ms",     "ecdsa.keygen_ms",
      "ecdsa.sign_ms",      "ecdsa.verify_ms",      "counts.sign_pairings",
      "counts.verify_pairings",
  };
  return keys;
}

BenchReport bench_run(const BenchConfig& config) {
  if (config.repetitions == 0) {
    throw Error(ErrorCode::kInvalidParameters, "repetitions must be >= 1");
  }
  const SchemeParams& params = config.params;
  params.validate();

  SeededRandom rng(config.seed, "bench");
  KeyPair keys = keygen_setup(params, rng);
  const PublicKey& pk = keys.public_key;

  BenchReport report;
  report.config = config;
  report.subkeys_per_keygen = params.subkeys_per_session();

  std::vector<double> v_ms, aux_ms, sk_ms, total_ms, sign_ms, verify_ms;
  std::vector<double> ec_keygen_ms, ec_sign_ms, ec_verify_ms;

  const uint32_t total = config.warmup + config.repetitions;
  for (uint32_t rep = 0; rep < total; ++rep) {
    const bool record = rep >= config.warmup;
    const uint64_t session = 1 + rep % params.sessions;
    Bytes message(16);
    rng.fill(message);
    Bytes prp_key(32);
    rng.fill(prp_key);

    // Phase breakdown and whole-call time come from separate calls so the
    // phase clocks do not inflate the total.
    KeygenPhaseTimes phases;
    gen_session(pk, keys.secret, params, session, rng, KeyMode::kProduction,
                &phases);
    auto start = Clock::now();
    SessionKeyMaterial mat = gen_session(pk, keys.secret, params, session, rng);
    double keygen_total = since_ms(start);

    start = Clock::now();
    reset_pairing_count();
    IndexSelection sel = prp_select(params, prp_key, message);
    CompressedSignature sig =
        sign_compressed(params, subkeys_at(mat, sel), sel, mat.aux);
    double sign = since_ms(start);
    uint64_t sign_pairings = pairing_count();

    reset_pairing_count();
    start = Clock::now();
    VerifyResult ok = verify_compressed(pk, params, session, sig, message);
    double verify = since_ms(start);
    uint64_t verify_pairings = pairing_count();

    start = Clock::now();
    ecdsa::KeyPair ec = ecdsa::keygen(rng);
    double ec_keygen = since_ms(start);
    start = Clock::now();
    ecdsa::Signature ec_sig = ecdsa::sign(ec.private_key, message, rng);
    double ec_sign = since_ms(start);
    start = Clock::now();
    bool ec_ok = ecdsa::verify(ec.public_key, message, ec_sig);
    double ec_verify = since_ms(start);

    if (!record) continue;
    v_ms.push_back(phases.share_ms);
    aux_ms.push_back(phases.aux_ms);
    sk_ms.push_back(phases.subkey_ms);
    total_ms.push_back(keygen_total);
    sign_ms.push_back(sign);
    verify_ms.push_back(verify);
    ec_keygen_ms.push_back(ec_keygen);
    ec_sign_ms.push_back(ec_sign);
    ec_verify_ms.push_back(ec_verify);
    // Counts are structural; keep the largest seen so a stray pairing in
    // any repetition shows up.
    report.sign_pairings = std::max(report.sign_pairings, sign_pairings);
    report.verify_pairings = std::max(report.verify_pairings, verify_pairings);
    report.otsske_verify_failures += !ok.ok();
    report.ecdsa_verify_failures += !ec_ok;
  }

  report.keygen_v = summarize(v_ms);
  report.keygen_aux = summarize(aux_ms);
  report.keygen_sk = summarize(sk_ms);
  report.keygen_total = summarize(total_ms);
  report.sign = summarize(sign_ms);
  report.verify = summarize(verify_ms);
  report.ecdsa_keygen = summarize(ec_keygen_ms);
  report.ecdsa_sign = summarize(ec_sign_ms);
  report.ecdsa_verify = summarize(ec_verify_ms);
  return report;
}

std::string BenchReport::to_key_value() const {
  std::ostringstream out;
  out << "bench.t=" << config.params.radix << "\n";
  out << "bench.n=" << config.params.symbols << "\n";
  out << "bench.N=" << config.params.sessions << "\n";
  out << "bench.lambda=" << config.params.security_level << "\n";
  out << "bench.repetitions=" << config.repetitions << "\n";
  out << "bench.warmup=" << config.warmup << "\n";
  out << "bench.seed=" << config.seed << "\n";
  for (const Row& row : rows(*this)) {
    out << row.key << "_ms=" << fmt(row.stats->mean_ms) << "\n";
    out << row.key << ".median_ms=" << fmt(row.stats->median_ms) << "\n";
    out << row.key << ".stddev_ms=" << fmt(row.stats->stddev_ms) << "\n";
  }
  out << "otsske.keygen.phase_sum_ms=" << fmt(phase_sum_ms()) << "\n";
  out << "counts.sign_pairings=" << sign_pairings << "\n";
  out << "counts.verify_pairings=" << verify_pairings << "\n";
  out << "counts.keygen_subkeys=" << subkeys_per_keygen << "\n";
  out << "counts.otsske_verify_failures=" << otsske_verify_failures << "\n";
  out << "counts.ecdsa_verify_failures=" << ecdsa_verify_failures << "\n";
  for (const Row& row : rows(*this)) {
    out << "reference." << row.key << "_ms=" << fmt_ref(row.reference) << "\n";
  }
  return out.str();
}

std::string BenchReport::to_table() const {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof(line),
                "t=%u n=%u N=%llu, %u repetitions (%u warmup), %llu subkeys "
                "per key generation\n",
                config.params.radix, config.params.symbols,
                static_cast<unsigned long long>(config.params.sessions),
                config.repetitions, config.warmup,
                static_cast<unsigned long long>(subkeys_per_keygen));
  out << line;
  std::snprintf(line, sizeof(line), "%-22s %10s %10s %10s %12s\n", "operation",
                "mean ms", "median ms", "stddev ms", "reference ms");
  out << line;
  for (const Row& row : rows(*this)) {
    std::snprintf(line, sizeof(line), "%-22s %10s %10s %10s %12s\n",
                  std::string(row.key).c_str(), fmt(row.stats->mean_ms).c_str(),
                  fmt(row.stats->median_ms).c_str(),
                  fmt(row.stats->stddev_ms).c_str(),
                  fmt_ref(row.reference).c_str());
    out << line;
  }
  std::snprintf(line, sizeof(line),
                "pairings: sign %llu, verify %llu; keygen phase sum %s ms\n",
                static_cast<unsigned long long>(sign_pairings),
                static_cast<unsigned long long>(verify_pairings),
                fmt(phase_sum_ms()).c_str());
  out << line;
  return out.str();
}

}  // namespace otsske::bench

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


// Acceptance suite. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "otsske/adversary.hpp"
#include "otsske/bench.hpp"
#include "otsske/codec.hpp"
#include "otsske/ecdsa.hpp"
#include "otsske/error.hpp"
#include "otsske/ra.hpp"
#include "otsske/scheme.hpp"

namespace otsske {
namespace {

// Pinned thresholds.
constexpr int kCorrectnessPairs = 100;
constexpr double kCorrectnessBudgetSeconds = 600.0;
constexpr int kRejectionTrials = 20;
constexpr int kRejectionClasses = 6;
constexpr uint64_t kMinForgeryAttempts = 100;
constexpr int kObliviousRuns = 50;
constexpr int kReplayQuotes = 100;
constexpr uint32_t kBenchReps = 10;
constexpr uint32_t kBenchWarmup = 2;
constexpr double kPhaseSumTolerance = 0.05;
constexpr uint32_t kCostReps = 20;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string str(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

Bytes random_bytes(RandomSource& rng, size_t n) {
  Bytes b(n);
  rng.fill(b);
  return b;
}

uint64_t random_below(RandomSource& rng, uint64_t bound) {
  uint8_t b[8];
  rng.fill(b);
  uint64_t v = 0;
  for (uint8_t x : b) v = (v << 8) | x;
  return v % bound;
}

// 1. Both variants sign and verify over random (session, message) pairs.
Outcome correctness() {
  auto start = std::chrono::steady_clock::now();
  SchemeParams p;  // t=4, n=32, N=8
  SeededRandom rng(101);
  KeyPair kp = keygen_setup(p, rng);
  int failures = 0;
  for (int i = 0; i < kCorrectnessPairs; ++i) {
    uint64_t session = random_below(rng, p.sessions + 1);
    Bytes msg = random_bytes(rng, 16);
    Bytes key = random_bytes(rng, 32);
    SessionKeyMaterial mat =
        gen_session(kp.public_key, kp.secret, p, session, rng);
    IndexSelection sel = prp_select(p, key, msg);
    auto picked = subkeys_at(mat, sel);
    auto c = sign_compressed(p, picked, sel, mat.aux);
    auto f = sign_full(kp.public_key, p, picked, sel, mat.aux, msg, rng);
    if (!verify_compressed(kp.public_key, p, session, c, msg)) ++failures;
    if (!verify_full(kp.public_key, p, session, f, msg)) ++failures;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
  return {failures == 0 && secs < kCorrectnessBudgetSeconds,
          str("%d pairs x 2 variants, %d failures, %.1f s", kCorrectnessPairs,
              failures, secs)};
}

// 2. Product of the picked subkeys against the retained-randomness oracle.
Outcome aggregation_identity() {
  SchemeParams p;
  p.radix = 2;
  p.symbols = 2;
  p.sessions = 2;
  SeededRandom rng(202);
  KeyPair kp = keygen_setup(p, rng);
  const PublicKey& pk = kp.public_key;
  int checked = 0, matched = 0;
  for (uint64_t session = 1; session <= 2; ++session) {
    SessionKeyMaterial mat = gen_session(pk, kp.secret, p, session, rng,
                                         KeyMode::kRetainTransients);
    const Scalar& r = mat.transients->randomizer;
    for (uint32_t b0 = 0; b0 < 2; ++b0) {
      for (uint32_t b1 = 0; b1 < 2; ++b1) {
        G2Point product = mat.subkey(0, b0) * mat.subkey(1, b1);
        Scalar k = Scalar::from_u64(session * 4 + b0 + 2 * b1);
        G2Point f = exp(pk.master_public.second, k) * pk.index_offset.second;
        G2Point oracle = exp(
            exp(pk.secret_base, kp.secret.exponent) * exp(f, r),
            Scalar::from_u64(p.symbols));
        ++checked;
        matched += product == oracle;
      }
    }
  }
  return {checked == 8 && matched == checked,
          str("%d/%d digit vectors match", matched, checked)};
}

// 3. Mutations of honest signatures are rejected.
Outcome rejection() {
  SchemeParams p;
  SeededRandom rng(303);
  KeyPair kp = keygen_setup(p, rng);
  const PublicKey& pk = kp.public_key;
  std::map<std::string, int> rejected;
  int baseline_failures = 0;
  for (int trial = 0; trial < kRejectionTrials; ++trial) {
    uint64_t session = 1 + random_below(rng, p.sessions);
    Bytes msg = random_bytes(rng, 16);
    SessionKeyMaterial mat = gen_session(pk, kp.secret, p, session, rng);
    IndexSelection sel = prp_select(p, random_bytes(rng, 32), msg);
    auto picked = subkeys_at(mat, sel);
    CompressedSignature c = sign_compressed(p, picked, sel, mat.aux);
    FullSignature f = sign_full(pk, p, picked, sel, mat.aux, msg, rng);
    if (!verify_compressed(pk, p, session, c, msg) ||
        !verify_full(pk, p, session, f, msg)) {
      ++baseline_failures;
      continue;
    }
    auto both_reject = [&](const CompressedSignature& cc,
                           const FullSignature& ff, uint64_t s,
                           const Bytes& m) {
      return !verify_compressed(pk, p, s, cc, m) && !verify_full(pk, p, s, ff, m);
    };

    Bytes flipped = msg;
    flipped[random_below(rng, msg.size())] ^= uint8_t(1u << random_below(rng, 8));
    rejected["message-bit-flip"] += both_reject(c, f, session, flipped);

    uint64_t shifted = session % p.sessions + 1;
    rejected["session-shift"] += both_reject(c, f, shifted, msg);

    Scalar delta = random_nonzero_scalar(rng);
    CompressedSignature cy = c;
    cy.y = cy.y * exp(G1Point::generator(), delta);
    FullSignature fy = f;
    fy.y = fy.y * DualPoint::generator_power(delta);
    rejected["y-tamper"] += both_reject(cy, fy, session, msg);

    CompressedSignature cz = c;
    cz.z = cz.z * exp(G2Point::generator(), delta);
    FullSignature fz = f;
    fz.z = fz.z * exp(G2Point::generator(), delta);
    rejected["z-tamper"] += both_reject(cz, fz, session, msg);

    FullSignature fx = f;
    fx.x = fx.x * exp(G2Point::generator(), delta);
    rejected["x-tamper"] += !verify_full(pk, p, session, fx, msg);

    bool cut_rejected = true;
    for (const Bytes& enc : {encode_signature(c), encode_signature(f)}) {
      size_t len = random_below(rng, enc.size());
      ByteView cut = ByteView(enc).first(len);
      cut_rejected &= !verify_encoded(pk, p, session, cut, msg);
    }
    rejected["truncated-encoding"] += cut_rejected;
  }
  int total = 0;
  std::string detail;
  for (const auto& [name, count] : rejected) {
    total += count;
    detail += name + " " + std::to_string(count) + "/" +
              std::to_string(kRejectionTrials) + ", ";
  }
  detail += str("baseline failures %d", baseline_failures);
  bool pass = baseline_failures == 0 &&
              static_cast<int>(rejected.size()) == kRejectionClasses &&
              total == kRejectionClasses * kRejectionTrials;
  return {pass, detail};
}

// 4. Zero pairings to sign, three to verify; signing is the cheaper side.
Outcome structural_cost() {
  struct Shape {
    uint32_t t, n;
  };
  bool counts_ok = true;
  int shapes = 0;
  for (Shape s : {Shape{2, 2}, Shape{4, 32}, Shape{16, 8}, Shape{3, 5},
                  Shape{2, 64}, Shape{256, 4}}) {
    SchemeParams p;
    p.radix = s.t;
    p.symbols = s.n;
    SeededRandom rng(404 + s.t * 1000 + s.n);
    KeyPair kp = keygen_setup(p, rng);
    SessionKeyMaterial mat = gen_session(kp.public_key, kp.secret, p, 1, rng);
    Bytes msg = random_bytes(rng, 16);
    IndexSelection sel = prp_select(p, random_bytes(rng, 32), msg);
    auto picked = subkeys_at(mat, sel);
    reset_pairing_count();
    auto c = sign_compressed(p, picked, sel, mat.aux);
    uint64_t sign_count = pairing_count();
    reset_pairing_count();
    bool ok = verify_compressed(kp.public_key, p, 1, c, msg).ok();
    uint64_t verify_count = pairing_count();
    counts_ok &= ok && sign_count == 0 && verify_count == 3;
    ++shapes;
  }
  bench::BenchConfig cfg;
  cfg.repetitions = kCostReps;
  cfg.warmup = kBenchWarmup;
  cfg.seed = 404;
  bench::BenchReport r = bench::bench_run(cfg);
  bool order_ok = r.sign.mean_ms < r.verify.mean_ms;
  return {counts_ok && order_ok && r.sign_pairings == 0 &&
              r.verify_pairings == 3,
          str("counts 0/3 at %d shapes: %s; sign %.3f ms < verify %.3f ms",
              shapes, counts_ok ? "yes" : "no", r.sign.mean_ms,
              r.verify.mean_ms)};
}

// 5. Forgery catalogue against the full log of N honest sessions.
Outcome forgery_game() {
  ra::GameConfig cfg;  // t=4, n=32, N=8
  cfg.seed = 505;
  cfg.targets_per_session = 4;
  ra::GameReport r = ra::run_game(cfg);
  bool pass = r.new_message_attempts >= kMinForgeryAttempts &&
              r.new_message_verified == 0 && r.same_message_attempts > 0 &&
              r.same_message_verified == r.same_message_attempts;
  return {pass,
          str("new-message %llu/%llu verified, same-message %llu/%llu verified",
              (unsigned long long)r.new_message_verified,
              (unsigned long long)r.new_message_attempts,
              (unsigned long long)r.same_message_verified,
              (unsigned long long)r.same_message_attempts)};
}

// 6. Read-once, erase-on-read, and the log never leaks an unserved subkey.
Outcome oblivious_memory() {
  int good = 0;
  std::string first_problem;
  for (int run = 0; run < kObliviousRuns; ++run) {
    SchemeParams p;
    p.sessions = 1;
    SeededRandom coproc_rng(600 + run, "coprocessor");
    SeededRandom user_rng(600 + run, "verifier");
    ra::AdversaryLog log;
    ra::CoProcessor cp(p, coproc_rng, &log);
    ra::RaEnclave enclave(p, cp, ra::demo_enclave_measurement(), &log);
    ra::RemoteVerifier verifier(cp.public_key(), p, user_rng);
    cp.generate_next();
    ra::AttestationRequest req = verifier.request(ra::demo_app_measurement());
    req.result = to_bytes("run " + std::to_string(run));
    ra::Quote q = enclave.handle(req);
    auto buf = enclave.last_buffer();

    std::string problem;
    if (!verifier.verify(q, req.nonce)) problem = "quote rejected";
    try {
      buf->read(Bytes(32, 0), ra::demo_enclave_measurement());
      problem = "second read succeeded";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kSessionConsumed) problem = "wrong error";
    }
    auto reads = log.reads();
    if (reads.size() != 1) problem = "expected one logged read";
    std::set<uint32_t> served(reads[0].indices.begin(), reads[0].indices.end());
    if (served.size() != p.symbols) problem = "served set has wrong size";
    for (size_t s = 0; s < buf->slot_count(); ++s) {
      bool live = buf->slot(s).has_value();
      if (live != (served.count(s) == 1)) problem = "slot state mismatch";
    }
    for (size_t k = 0; k < reads[0].subkeys.size(); ++k) {
      auto slot = buf->slot(reads[0].indices[k]);
      if (!slot || !(G2Point::deserialize(*slot) == reads[0].subkeys[k])) {
        problem = "logged subkey not from served slot";
      }
    }
    if (problem.empty()) {
      ++good;
    } else if (first_problem.empty()) {
      first_problem = "run " + std::to_string(run) + ": " + problem;
    }
  }
  return {good == kObliviousRuns,
          str("%d/%d runs clean", good, kObliviousRuns) +
              (first_problem.empty() ? "" : "; " + first_problem)};
}

// 7. Accepted quotes fail under any other nonce.
Outcome freshness() {
  SchemeParams p;
  p.sessions = kReplayQuotes;
  SeededRandom coproc_rng(707, "coprocessor");
  SeededRandom user_rng(707, "verifier");
  ra::CoProcessor cp(p, coproc_rng);
  ra::RaEnclave enclave(p, cp, ra::demo_enclave_measurement());
  ra::RemoteVerifier verifier(cp.public_key(), p, user_rng,
                              ra::demo_enclave_measurement());
  int accepted = 0, replays_rejected = 0;
  for (int i = 0; i < kReplayQuotes; ++i) {
    cp.generate_next();
    ra::AttestationRequest req = verifier.request(ra::demo_app_measurement());
    req.result = to_bytes("fresh " + std::to_string(i));
    ra::Quote q = enclave.handle(req);
    if (!verifier.verify(q, req.nonce)) continue;
    ++accepted;
    ra::AttestationRequest again = verifier.request(ra::demo_app_measurement());
    bool stateful_rejects = !verifier.verify(q, again.nonce);
    bool stateless_rejects =
        !ra::user_verify(cp.public_key(), p, q, again.nonce);
    replays_rejected += stateful_rejects && stateless_rejects;
  }
  return {accepted == kReplayQuotes && replays_rejected == kReplayQuotes,
          str("%d accepted, %d/%d replays rejected", accepted,
              replays_rejected, kReplayQuotes)};
}

// 8. Seeded demo transcripts are byte-identical and match the golden file.
Outcome determinism() {
  ra::DemoConfig cfg{SchemeParams{}, 7, 3, true};
  std::string a = ra::run_demo(cfg).transcript;
  std::string b = ra::run_demo(cfg).transcript;
  std::ifstream f(std::string(OTSSKE_TEST_DATA_DIR) +
                      "/demo_seed7_sessions3.txt",
                  std::ios::binary);
  std::stringstream golden;
  golden << f.rdbuf();
  bool same = a == b;
  bool golden_match = a == golden.str();
  return {same && golden_match && !a.empty(),
          str("two runs identical: %s, golden match: %s (%zu bytes)",
              same ? "yes" : "no", golden_match ? "yes" : "no", a.size())};
}

// 9. Report schema, keygen phase arithmetic and the ECDSA baseline.
Outcome benchmark_report() {
  bench::BenchConfig cfg;
  cfg.repetitions = kBenchReps;
  cfg.warmup = kBenchWarmup;
  cfg.seed = 909;
  bench::BenchReport r = bench::bench_run(cfg);

  std::map<std::string, std::string> kv;
  std::istringstream in(r.to_key_value());
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  int missing = 0;
  for (std::string_view key : bench::required_report_keys()) {
    missing += kv.count(std::string(key)) == 0;
  }
  const std::map<std::string, std::string> reference = {
      {"reference.otsske.keygen.v_ms", "131.4"},
      {"reference.otsske.keygen.aux_ms", "4.0"},
      {"reference.otsske.keygen.sk_ms", "253.2"},
      {"reference.otsske.keygen.total_ms", "388.6"},
      {"reference.otsske.sign_ms", "3.4"},
      {"reference.otsske.verify_ms", "127.3"},
      {"reference.ecdsa.keygen_ms", "21.2"},
      {"reference.ecdsa.sign_ms", "23.1"},
      {"reference.ecdsa.verify_ms", "74.2"},
  };
  bool reference_ok = true;
  for (const auto& [k, v] : reference) reference_ok &= kv[k] == v;

  double total = r.keygen_total.mean_ms;
  double rel = std::fabs(r.phase_sum_ms() - total) / total;

  // ECDSA: known answer plus random round trips.
  bool ecdsa_ok = true;
  auto rfc = ecdsa::keypair_from_private(from_hex(
      "c9afa9d845ba75166b5c215767b1d6934e50c3db36e89b127b8a622b120f6721"));
  auto rfc_sig = ecdsa::sign_deterministic(rfc.private_key, as_bytes("sample"));
  ecdsa_ok &= to_hex(rfc_sig) ==
              "efd48b2aacb6a8fd1140dd9cd45e81d69d2c877b56aaf991c34d0ea84eaf3716"
              "f7cb1c942d657c41d436c7a1b6e29f65f3e900dbb9aff4064dc4ab2f843acda8";
  SeededRandom rng(919);
  for (int i = 0; i < 20; ++i) {
    auto kp = ecdsa::keygen(rng);
    Bytes msg = random_bytes(rng, 32);
    auto sig = ecdsa::sign(kp.private_key, msg, rng);
    ecdsa_ok &= ecdsa::verify(kp.public_key, msg, sig);
    msg[i] ^= 1;
    ecdsa_ok &= !ecdsa::verify(kp.public_key, msg, sig);
  }
  ecdsa_ok &= r.ecdsa_verify_failures == 0;

  bool pass = missing == 0 && reference_ok && rel <= kPhaseSumTolerance &&
              ecdsa_ok && r.sign_pairings == 0 && r.verify_pairings == 3 &&
              r.otsske_verify_failures == 0;
  return {pass, str("missing keys %d, phase sum %.2f vs total %.2f ms "
                    "(%.1f%%), reference column %s, ECDSA %s",
                    missing, r.phase_sum_ms(), total, rel * 100,
                    reference_ok ? "present" : "wrong",
                    ecdsa_ok ? "ok" : "failed")};
}

}  // namespace
}  // namespace otsske

int main() {
  using otsske::Outcome;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "correctness, both variants", otsske::correctness},
      {2, "aggregation identity, exhaustive t=2 n=2",
       otsske::aggregation_identity},
      {3, "rejection of mutated signatures", otsske::rejection},
      {4, "structural pairing cost", otsske::structural_cost},
      {5, "forgery game", otsske::forgery_game},
      {6, "oblivious memory contract", otsske::oblivious_memory},
      {7, "quote freshness", otsske::freshness},
      {8, "deterministic demo transcript", otsske::determinism},
      {9, "benchmark report", otsske::benchmark_report},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", c.id,
                c.name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

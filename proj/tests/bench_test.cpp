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

#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "otsske/ecdsa.hpp"
#include "otsske/error.hpp"

namespace otsske {
namespace {

// RFC 6979, appendix A.2.5: P-256, SHA-256, message "sample".
const char kRfcPrivate[] =
    "c9afa9d845ba75166b5c215767b1d6934e50c3db36e89b127b8a622b120f6721";
const char kRfcPublicX[] =
    "60fed4ba255a9d31c961eb74c6356d68c049b8923b61fa6ce669622e60f29fb6";
const char kRfcPublicY[] =
    "7903fe1008b8bc99a41ae9e95628bc64f2f1b20c2d7e9f5177a3c294d4462299";
const char kRfcNonce[] =
    "a6e3c57dd01abe90086538398355dd4c3b17aa873382b0f24d6129493d8aad60";
const char kRfcR[] =
    "efd48b2aacb6a8fd1140dd9cd45e81d69d2c877b56aaf991c34d0ea84eaf3716";
const char kRfcS[] =
    "f7cb1c942d657c41d436c7a1b6e29f65f3e900dbb9aff4064dc4ab2f843acda8";

TEST(Ecdsa, Rfc6979KnownAnswer) {
  ecdsa::KeyPair kp = ecdsa::keypair_from_private(from_hex(kRfcPrivate));
  EXPECT_EQ(kp.public_key.point[0], 0x04);
  EXPECT_EQ(to_hex(ByteView(kp.public_key.point).subspan(1, 32)), kRfcPublicX);
  EXPECT_EQ(to_hex(ByteView(kp.public_key.point).subspan(33)), kRfcPublicY);
  EXPECT_EQ(to_hex(ecdsa::rfc6979_nonce(kp.private_key, as_bytes("sample"))),
            kRfcNonce);
  ecdsa::Signature sig =
      ecdsa::sign_deterministic(kp.private_key, as_bytes("sample"));
  EXPECT_EQ(to_hex(ByteView(sig).first(32)), kRfcR);
  EXPECT_EQ(to_hex(ByteView(sig).subspan(32)), kRfcS);
  EXPECT_TRUE(ecdsa::verify(kp.public_key, as_bytes("sample"), sig));
}

TEST(Ecdsa, RoundTripAndTamper) {
  SeededRandom rng(1);
  for (int i = 0; i < 10; ++i) {
    ecdsa::KeyPair kp = ecdsa::keygen(rng);
    Bytes msg(32);
    rng.fill(msg);
    ecdsa::Signature sig = ecdsa::sign(kp.private_key, msg, rng);
    EXPECT_TRUE(ecdsa::verify(kp.public_key, msg, sig));
    Bytes flipped = msg;
    flipped[i % 32] ^= 1 << (i % 8);
    EXPECT_FALSE(ecdsa::verify(kp.public_key, flipped, sig));
    ecdsa::Signature bad = sig;
    bad[40] ^= 1;
    EXPECT_FALSE(ecdsa::verify(kp.public_key, msg, bad));
  }
}

TEST(Ecdsa, DeterministicModeIsStable) {
  SeededRandom rng(2);
  ecdsa::KeyPair kp = ecdsa::keygen(rng);
  Bytes msg = to_bytes("stable");
  EXPECT_EQ(ecdsa::sign_deterministic(kp.private_key, msg),
            ecdsa::sign_deterministic(kp.private_key, msg));
  EXPECT_NE(ecdsa::sign(kp.private_key, msg, rng),
            ecdsa::sign(kp.private_key, msg, rng));
}

TEST(Ecdsa, InvalidEncodings) {
  SeededRandom rng(3);
  ecdsa::KeyPair kp = ecdsa::keygen(rng);
  Bytes msg = to_bytes("m");
  ecdsa::Signature sig = ecdsa::sign(kp.private_key, msg, rng);
  EXPECT_THROW(ecdsa::verify(kp.public_key, msg, ByteView(sig).first(63)),
               Error);
  ecdsa::PublicKey off_curve = kp.public_key;
  off_curve.point[64] ^= 1;
  EXPECT_THROW(ecdsa::verify(off_curve, msg, sig), Error);
  ecdsa::Signature zero{};
  EXPECT_FALSE(ecdsa::verify(kp.public_key, msg, zero));
  EXPECT_THROW(ecdsa::keypair_from_private(Bytes(32, 0)), Error);
  EXPECT_THROW(ecdsa::keypair_from_private(Bytes(32, 0xff)), Error);
}

TEST(Stats, Summaries) {
  bench::Stats s = bench::summarize({4, 1, 3, 2});
  EXPECT_DOUBLE_EQ(s.mean_ms, 2.5);
  EXPECT_DOUBLE_EQ(s.median_ms, 2.5);
  EXPECT_DOUBLE_EQ(s.stddev_ms, std::sqrt(5.0 / 3.0));
  bench::Stats one = bench::summarize({7});
  EXPECT_DOUBLE_EQ(one.mean_ms, 7);
  EXPECT_TRUE(std::isnan(one.stddev_ms));
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    EXPECT_NE(eq, std::string::npos) << line;
    out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

TEST(Bench, ReportHasSchemaAndCounts) {
  bench::BenchConfig cfg;
  cfg.repetitions = 3;
  cfg.warmup = 1;
  bench::BenchReport r = bench::bench_run(cfg);
  EXPECT_EQ(r.sign_pairings, 0u);
  EXPECT_EQ(r.verify_pairings, 3u);
  EXPECT_EQ(r.subkeys_per_keygen, 128u);
  EXPECT_EQ(r.otsske_verify_failures, 0u);
  EXPECT_EQ(r.ecdsa_verify_failures, 0u);
  EXPECT_EQ(r.sign.samples, 3u);

  auto kv = parse_kv(r.to_key_value());
  for (std::string_view key : bench::required_report_keys()) {
    EXPECT_TRUE(kv.count(std::string(key))) << key;
  }
  EXPECT_EQ(kv["counts.sign_pairings"], "0");
  EXPECT_EQ(kv["counts.verify_pairings"], "3");
  EXPECT_EQ(kv["reference.otsske.keygen.total_ms"], "388.6");
  EXPECT_EQ(kv["reference.otsske.sign_ms"], "3.4");
  EXPECT_EQ(kv["reference.otsske.verify_ms"], "127.3");
  EXPECT_EQ(kv["reference.ecdsa.keygen_ms"], "21.2");
  EXPECT_EQ(kv["reference.ecdsa.sign_ms"], "23.1");
  EXPECT_EQ(kv["reference.ecdsa.verify_ms"], "74.2");
  EXPECT_NE(r.to_table().find("reference ms"), std::string::npos);
}

TEST(Bench, CountsHoldAtOtherShapes) {
  bench::BenchConfig cfg;
  cfg.params.radix = 16;
  cfg.params.symbols = 4;
  cfg.repetitions = 2;
  cfg.warmup = 0;
  bench::BenchReport r = bench::bench_run(cfg);
  EXPECT_EQ(r.sign_pairings, 0u);
  EXPECT_EQ(r.verify_pairings, 3u);
  EXPECT_EQ(r.subkeys_per_keygen, 64u);
}

TEST(Bench, SingleRepetitionMarksStddev) {
  bench::BenchConfig cfg;
  cfg.params.symbols = 4;
  cfg.repetitions = 1;
  cfg.warmup = 0;
  auto kv = parse_kv(bench::bench_run(cfg).to_key_value());
  EXPECT_EQ(kv["otsske.sign.stddev_ms"], "n/a");
  EXPECT_EQ(kv["ecdsa.verify.stddev_ms"], "n/a");
  EXPECT_NE(kv["otsske.sign_ms"], "n/a");
}

TEST(Bench, ZeroRepetitionsRejected) {
  bench::BenchConfig cfg;
  cfg.repetitions = 0;
  EXPECT_THROW(bench::bench_run(cfg), Error);
}

}  // namespace
}  // namespace otsske

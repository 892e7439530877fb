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


#include "otsske/scheme.hpp"

#include <set>

#include <gtest/gtest.h>

#include "otsske/error.hpp"

namespace otsske {
namespace {

template <class F>
ErrorCode code_of(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kIo;
}

SchemeParams small_params() {
  SchemeParams p;
  p.radix = 2;
  p.symbols = 2;
  p.sessions = 3;
  return p;
}

// g2^a * (g1^m * h)^r * v_j, computed from the retained randoms.
G2Point subkey_oracle(const KeyPair& kp, const SessionTransients& tr,
                      const Scalar& m, uint32_t position) {
  const PublicKey& pk = kp.public_key;
  G2Point f = exp(pk.master_public.second, m) * pk.index_offset.second;
  return exp(pk.secret_base, kp.secret.exponent) * exp(f, tr.randomizer) *
         tr.share_points[position];
}

TEST(Params, Validation) {
  SchemeParams ok;
  EXPECT_NO_THROW(ok.validate());
  EXPECT_EQ(ok.subkeys_per_session(), 128u);

  auto bad = [](auto mutate) {
    SchemeParams p;
    mutate(p);
    return code_of([&] { p.validate(); });
  };
  EXPECT_EQ(bad([](SchemeParams& p) { p.radix = 1; }),
            ErrorCode::kInvalidParameters);
  EXPECT_EQ(bad([](SchemeParams& p) { p.symbols = 0; }),
            ErrorCode::kInvalidParameters);
  EXPECT_EQ(bad([](SchemeParams& p) { p.sessions = 0; }),
            ErrorCode::kInvalidParameters);
  EXPECT_EQ(bad([](SchemeParams& p) { p.security_level = 192; }),
            ErrorCode::kInvalidParameters);
  // (N + 1) * t^n must stay below the 255-bit group order.
  EXPECT_EQ(bad([](SchemeParams& p) {
              p.radix = 2;
              p.symbols = 254;
              p.sessions = 1;
            }),
            ErrorCode::kInvalidParameters);
  SchemeParams edge;
  edge.radix = 2;
  edge.symbols = 253;
  edge.sessions = 1;
  EXPECT_NO_THROW(edge.validate());
  EXPECT_EQ(bad([](SchemeParams& p) {
              p.radix = 16;
              p.symbols = 64;
            }),
            ErrorCode::kInvalidParameters);
}

TEST(Keygen, MasterPublicMatchesSecret) {
  SeededRandom rng(1);
  KeyPair kp = keygen_setup(SchemeParams{}, rng);
  const PublicKey& pk = kp.public_key;
  EXPECT_FALSE(kp.secret.exponent.is_zero());
  EXPECT_EQ(pk.generator, DualPoint::generator());
  EXPECT_EQ(pk.master_public, DualPoint::generator_power(kp.secret.exponent));
  EXPECT_TRUE(is_consistent(pk.index_offset));
  EXPECT_EQ(pk.secret_base, independent_g2());
  EXPECT_EQ(pk.group.curve, "BLS12-381");
}

TEST(Keygen, SubkeysMatchOracleAndSharesCancel) {
  SeededRandom rng(2);
  SchemeParams p;
  p.radix = 3;
  p.symbols = 4;
  KeyPair kp = keygen_setup(p, rng);
  for (uint64_t session : {0ull, 1ull, 8ull}) {
    SessionKeyMaterial mat = gen_session(kp.public_key, kp.secret, p, session,
                                         rng, KeyMode::kRetainTransients);
    ASSERT_TRUE(mat.transients);
    const SessionTransients& tr = *mat.transients;
    ASSERT_EQ(mat.subkeys.size(), 12u);
    EXPECT_EQ(mat.aux, DualPoint::generator_power(tr.randomizer));

    Scalar sum;
    G2Point product;
    for (uint32_t j = 0; j < p.symbols; ++j) {
      sum += tr.shares[j];
      product *= tr.share_points[j];
      EXPECT_EQ(tr.share_points[j], exp(G2Point::generator(), tr.shares[j]));
    }
    EXPECT_TRUE(sum.is_zero());
    EXPECT_TRUE(product.is_identity());

    // m = session * t^n + b * n * t^j, with t^n = 81.
    uint64_t weight = p.symbols;
    for (uint32_t j = 0; j < p.symbols; ++j, weight *= p.radix) {
      for (uint32_t b = 0; b < p.radix; ++b) {
        Scalar m = Scalar::from_u64(session * 81 + b * weight);
        EXPECT_EQ(mat.subkey(j, b), subkey_oracle(kp, tr, m, j))
            << "session " << session << " j=" << j << " b=" << b;
      }
    }
  }
}

TEST(Keygen, ProductionModeDropsTransients) {
  SeededRandom rng(3);
  SchemeParams p = small_params();
  KeyPair kp = keygen_setup(p, rng);
  SessionKeyMaterial mat = gen_session(kp.public_key, kp.secret, p, 1, rng);
  EXPECT_FALSE(mat.transients.has_value());
  EXPECT_EQ(code_of([&] {
              gen_session(kp.public_key, kp.secret, p, 4, rng);
            }),
            ErrorCode::kOutOfRange);
}

TEST(Keygen, PhaseTimesAreFilled) {
  SeededRandom rng(4);
  SchemeParams p;
  KeyPair kp = keygen_setup(p, rng);
  KeygenPhaseTimes times;
  gen_session(kp.public_key, kp.secret, p, 1, rng, KeyMode::kProduction,
              &times);
  EXPECT_GT(times.share_ms, 0);
  EXPECT_GT(times.aux_ms, 0);
  EXPECT_GT(times.subkey_ms, times.aux_ms);
}

TEST(Aggregation, ExhaustiveIdentityAtSmallParameters) {
  SeededRandom rng(5);
  SchemeParams p = small_params();
  KeyPair kp = keygen_setup(p, rng);
  const Scalar n = Scalar::from_u64(p.symbols);
  for (uint64_t session = 0; session <= p.sessions; ++session) {
    SessionKeyMaterial mat = gen_session(kp.public_key, kp.secret, p, session,
                                         rng, KeyMode::kRetainTransients);
    const Scalar& r = mat.transients->randomizer;
    for (uint32_t value = 0; value < 4; ++value) {
      // Digits of B in base 2, least significant first.
      std::vector<G2Point> picked = {mat.subkey(0, value & 1),
                                     mat.subkey(1, (value >> 1) & 1)};
      Scalar k = Scalar::from_u64(session * 4 + value);
      G2Point f = exp(kp.public_key.master_public.second, k) *
                  kp.public_key.index_offset.second;
      G2Point expected =
          exp(exp(kp.public_key.secret_base, kp.secret.exponent) * exp(f, r),
              n);
      EXPECT_EQ(aggregate(p, picked), expected)
          << "session " << session << " B=" << value;
    }
  }
}

TEST(Aggregation, WrongCountRejected) {
  SchemeParams p = small_params();
  std::vector<G2Point> three(3);
  EXPECT_EQ(code_of([&] { aggregate(p, three); }),
            ErrorCode::kInvalidParameters);
}

TEST(Index, DecomposeRecompose) {
  SchemeParams p;
  p.radix = 5;
  p.symbols = 6;
  SeededRandom rng(6);
  for (int i = 0; i < 50; ++i) {
    BigUint v = BigUint(static_cast<uint64_t>(i) * 104729u) % p.index_space();
    auto digits = decompose(p, v);
    ASSERT_EQ(digits.size(), 6u);
    BigUint manual = 0, w = 1;
    for (uint32_t d : digits) {
      EXPECT_LT(d, 5u);
      manual += w * d;
      w *= 5;
    }
    EXPECT_EQ(manual, v);
    EXPECT_EQ(recompose(p, digits), v);
  }
  EXPECT_EQ(code_of([&] { decompose(p, p.index_space()); }),
            ErrorCode::kOutOfRange);
}

TEST(Index, SelectionPicksOnePerBlock) {
  SchemeParams p;
  SeededRandom rng(7);
  for (int i = 0; i < 20; ++i) {
    Bytes key(32), msg(16);
    rng.fill(key);
    rng.fill(msg);
    IndexSelection sel = prp_select(p, key, msg);
    ASSERT_EQ(sel.indices.size(), p.symbols);
    for (uint32_t j = 0; j < p.symbols; ++j) {
      EXPECT_EQ(sel.indices[j], p.radix * j + sel.digits[j]);
      EXPECT_EQ(sel.indices[j] / p.radix, j);
    }
    EXPECT_EQ(recompose(p, sel.digits), sel.value);
    EXPECT_EQ(sel.prp_key, key);
  }
}

TEST(Index, HashSelectionTakesLowBits) {
  SchemeParams p;  // t = 4, n = 32: B is the low 64 bits
  SeededRandom rng(8);
  for (int i = 0; i < 20; ++i) {
    Scalar h = random_scalar(rng);
    auto bytes = h.to_bytes();
    BigUint low = 0;
    for (size_t k = 24; k < 32; ++k) low = (low << 8) | bytes[k];
    EXPECT_EQ(selection_from_hash(p, h, {}).value, low);
  }
}

TEST(Index, EncodingIsInjective) {
  SchemeParams p;
  p.radix = 2;
  p.symbols = 3;
  p.sessions = 3;
  std::set<std::string> seen;
  for (uint64_t s = 0; s <= p.sessions; ++s) {
    for (uint32_t b = 0; b < 8; ++b) {
      auto enc = encode_index(p, s, b).to_bytes();
      EXPECT_TRUE(seen.insert(to_hex(enc)).second);
      EXPECT_EQ(encode_index(p, s, b), Scalar::from_u64(s * 8 + b));
    }
  }
  EXPECT_EQ(code_of([&] { encode_index(p, 4, 0); }), ErrorCode::kOutOfRange);
  EXPECT_EQ(code_of([&] { encode_index(p, 0, 8); }), ErrorCode::kOutOfRange);
}

class SignVerify : public ::testing::Test {
 protected:
  void SetUp() override {
    kp_ = keygen_setup(params_, rng_);
    mat_ = gen_session(kp_.public_key, kp_.secret, params_, kSession, rng_);
    key_.assign(32, 0x42);
    message_ = to_bytes("attest this");
    sel_ = prp_select(params_, key_, message_);
    picked_ = subkeys_at(mat_, sel_);
  }

  static constexpr uint64_t kSession = 5;
  SchemeParams params_;
  SeededRandom rng_{9};
  KeyPair kp_;
  SessionKeyMaterial mat_;
  Bytes key_, message_;
  IndexSelection sel_;
  std::vector<G2Point> picked_;
};

TEST_F(SignVerify, CompressedRoundTripAndPairingCounts) {
  reset_pairing_count();
  CompressedSignature sig = sign_compressed(params_, picked_, sel_, mat_.aux);
  EXPECT_EQ(pairing_count(), 0u);
  EXPECT_EQ(sig.y, mat_.aux.first);
  reset_pairing_count();
  EXPECT_TRUE(verify_compressed(kp_.public_key, params_, kSession, sig,
                                message_));
  EXPECT_EQ(pairing_count(), 3u);
}

TEST_F(SignVerify, CompressedRejections) {
  CompressedSignature sig = sign_compressed(params_, picked_, sel_, mat_.aux);
  const PublicKey& pk = kp_.public_key;
  Bytes flipped = message_;
  flipped[0] ^= 1;
  EXPECT_EQ(verify_compressed(pk, params_, kSession, sig, flipped).status,
            VerifyStatus::kEquationFailed);
  EXPECT_FALSE(verify_compressed(pk, params_, kSession + 1, sig, message_));
  EXPECT_EQ(verify_compressed(pk, params_, params_.sessions + 1, sig, message_)
                .status,
            VerifyStatus::kSessionOutOfRange);
  CompressedSignature y_bad = sig;
  y_bad.y = y_bad.y * G1Point::generator();
  EXPECT_FALSE(verify_compressed(pk, params_, kSession, y_bad, message_));
  CompressedSignature z_bad = sig;
  z_bad.z = z_bad.z * G2Point::generator();
  EXPECT_FALSE(verify_compressed(pk, params_, kSession, z_bad, message_));
  CompressedSignature key_bad = sig;
  key_bad.prp_key[0] ^= 1;
  EXPECT_FALSE(verify_compressed(pk, params_, kSession, key_bad, message_));
  // One wrong subkey breaks the aggregate.
  std::vector<G2Point> swapped = picked_;
  uint32_t j = 3;
  swapped[j] = mat_.subkey(j, (sel_.digits[j] + 1) % params_.radix);
  CompressedSignature mixed = sign_compressed(params_, swapped, sel_, mat_.aux);
  EXPECT_FALSE(verify_compressed(pk, params_, kSession, mixed, message_));
}

TEST_F(SignVerify, FullRoundTripAndRejections) {
  const PublicKey& pk = kp_.public_key;
  FullSignature sig =
      sign_full(pk, params_, picked_, sel_, mat_.aux, message_, rng_);
  EXPECT_TRUE(is_consistent(sig.y));
  EXPECT_TRUE(verify_full(pk, params_, kSession, sig, message_));

  Bytes flipped = message_;
  flipped.back() ^= 0x80;
  EXPECT_FALSE(verify_full(pk, params_, kSession, sig, flipped));
  EXPECT_FALSE(verify_full(pk, params_, kSession - 1, sig, message_));
  FullSignature x_bad = sig;
  x_bad.x = x_bad.x * G2Point::generator();
  EXPECT_FALSE(verify_full(pk, params_, kSession, x_bad, message_));
  FullSignature z_bad = sig;
  z_bad.z = z_bad.z * G2Point::generator();
  EXPECT_FALSE(verify_full(pk, params_, kSession, z_bad, message_));
  FullSignature y_bad = sig;
  y_bad.y = y_bad.y * DualPoint::generator();
  EXPECT_FALSE(verify_full(pk, params_, kSession, y_bad, message_));
  FullSignature y_split = sig;
  y_split.y.first = y_split.y.first * G1Point::generator();
  EXPECT_EQ(verify_full(pk, params_, kSession, y_split, message_).status,
            VerifyStatus::kInconsistentDual);
}

TEST_F(SignVerify, FullSignaturesAreRandomized) {
  const PublicKey& pk = kp_.public_key;
  FullSignature a =
      sign_full(pk, params_, picked_, sel_, mat_.aux, message_, rng_);
  FullSignature b =
      sign_full(pk, params_, picked_, sel_, mat_.aux, message_, rng_);
  EXPECT_FALSE(a.x == b.x);
  EXPECT_TRUE(verify_full(pk, params_, kSession, a, message_));
  EXPECT_TRUE(verify_full(pk, params_, kSession, b, message_));
}

TEST_F(SignVerify, DegenerateChallengeIsResampledAndRejected) {
  const PublicKey& pk = kp_.public_key;
  const Scalar n = Scalar::from_u64(params_.symbols);
  // Replay the signer's first draw to learn s and make u = -s for it.
  SeededRandom probe(77);
  const Scalar first_s = random_scalar(probe);
  const G2Point first_x = exp(pk.secret_base, n * first_s);
  int calls = 0;
  detail::ChallengeHash challenge = [&](ByteView m, const G2Point& x) {
    ++calls;
    if (x == first_x) return -first_s;
    return detail::default_challenge(m, x);
  };
  SeededRandom signer(77);
  FullSignature sig = detail::sign_full_with(pk, params_, picked_, sel_,
                                             mat_.aux, message_, signer,
                                             challenge);
  EXPECT_GE(calls, 2);
  EXPECT_FALSE(sig.x == first_x);
  EXPECT_TRUE(
      detail::verify_full_with(pk, params_, kSession, sig, message_, challenge));

  FullSignature degenerate{first_x, DualPoint::identity(),
                           G2Point::identity(), key_};
  EXPECT_EQ(detail::verify_full_with(pk, params_, kSession, degenerate,
                                     message_, challenge)
                .status,
            VerifyStatus::kDegenerate);
}

TEST_F(SignVerify, GenericVerifyDispatches) {
  const PublicKey& pk = kp_.public_key;
  Signature c = sign_compressed(params_, picked_, sel_, mat_.aux);
  Signature f = sign_full(pk, params_, picked_, sel_, mat_.aux, message_, rng_);
  EXPECT_TRUE(verify(pk, params_, kSession, c, message_));
  EXPECT_TRUE(verify(pk, params_, kSession, f, message_));
  EXPECT_FALSE(verify(pk, params_, kSession, c, to_bytes("other")));
}

TEST(SignVerifyParams, WorksAcrossShapes) {
  struct Shape {
    uint32_t t, n;
  };
  for (Shape s : {Shape{2, 1}, Shape{2, 8}, Shape{3, 5}, Shape{16, 8},
                  Shape{7, 3}}) {
    SchemeParams p;
    p.radix = s.t;
    p.symbols = s.n;
    p.sessions = 4;
    SeededRandom rng(s.t * 100 + s.n);
    KeyPair kp = keygen_setup(p, rng);
    SessionKeyMaterial mat = gen_session(kp.public_key, kp.secret, p, 2, rng);
    Bytes key(16, 1);
    Bytes msg = to_bytes("shape");
    IndexSelection sel = prp_select(p, key, msg);
    auto picked = subkeys_at(mat, sel);
    reset_pairing_count();
    auto c = sign_compressed(p, picked, sel, mat.aux);
    EXPECT_EQ(pairing_count(), 0u);
    EXPECT_TRUE(verify_compressed(kp.public_key, p, 2, c, msg))
        << "t=" << s.t << " n=" << s.n;
    EXPECT_EQ(pairing_count(), 3u);
    auto f = sign_full(kp.public_key, p, picked, sel, mat.aux, msg, rng);
    EXPECT_TRUE(verify_full(kp.public_key, p, 2, f, msg))
        << "t=" << s.t << " n=" << s.n;
  }
}

}  // namespace
}  // namespace otsske

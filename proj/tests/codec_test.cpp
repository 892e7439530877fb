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


#include "otsske/codec.hpp"

#include <gtest/gtest.h>

#include "otsske/error.hpp"

namespace otsske {
namespace {

class Codec : public ::testing::Test {
 protected:
  void SetUp() override {
    params_.radix = 4;
    params_.symbols = 8;
    params_.sessions = 3;
    kp_ = keygen_setup(params_, rng_);
    for (uint64_t s = 0; s <= params_.sessions; ++s) {
      store_.push_back(gen_session(kp_.public_key, kp_.secret, params_, s, rng_));
    }
    msg_ = to_bytes("codec");
    Bytes key(32, 9);
    sel_ = prp_select(params_, key, msg_);
    auto picked = subkeys_at(store_[2], sel_);
    compressed_ = sign_compressed(params_, picked, sel_, store_[2].aux);
    full_ = sign_full(kp_.public_key, params_, picked, sel_, store_[2].aux,
                      msg_, rng_);
  }

  SchemeParams params_;
  SeededRandom rng_{31};
  KeyPair kp_;
  std::vector<SessionKeyMaterial> store_;
  Bytes msg_;
  IndexSelection sel_;
  CompressedSignature compressed_;
  FullSignature full_;
};

TEST_F(Codec, ParamsRoundTrip) {
  EXPECT_EQ(decode_params(encode_params(params_)), params_);
  SchemeParams bad = params_;
  bad.radix = 1;
  ByteWriter w;
  w.put_u64(bad.sessions).put_u64(bad.symbols).put_u64(bad.radix).put_u64(256);
  EXPECT_THROW(decode_params(w.bytes()), Error);
}

TEST_F(Codec, PublicKeyRoundTrip) {
  Bytes enc = encode_public_key(kp_.public_key);
  PublicKey pk = decode_public_key(enc);
  EXPECT_EQ(pk.generator, kp_.public_key.generator);
  EXPECT_EQ(pk.master_public, kp_.public_key.master_public);
  EXPECT_EQ(pk.secret_base, kp_.public_key.secret_base);
  EXPECT_EQ(pk.index_offset, kp_.public_key.index_offset);
  EXPECT_EQ(encode_public_key(pk), enc);
}

TEST_F(Codec, PublicKeyWithForeignGeneratorRejected) {
  PublicKey pk = kp_.public_key;
  pk.generator = DualPoint::generator_power(Scalar::from_u64(2));
  try {
    decode_public_key(encode_public_key(pk));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidEncoding);
  }
}

TEST_F(Codec, SignaturesRoundTrip) {
  Bytes c = encode_signature(compressed_);
  Bytes f = encode_signature(full_);
  EXPECT_EQ(c[0], kCompressedSignatureTag);
  EXPECT_EQ(f[0], kFullSignatureTag);
  EXPECT_EQ(std::get<CompressedSignature>(decode_signature(c)), compressed_);
  EXPECT_EQ(std::get<FullSignature>(decode_signature(f)), full_);
  EXPECT_TRUE(verify_encoded(kp_.public_key, params_, 2, c, msg_));
  EXPECT_TRUE(verify_encoded(kp_.public_key, params_, 2, f, msg_));
}

TEST_F(Codec, EveryTruncationIsRejected) {
  for (const Bytes& enc :
       {encode_signature(compressed_), encode_signature(full_)}) {
    for (size_t len = 0; len < enc.size(); ++len) {
      Bytes cut(enc.begin(), enc.begin() + len);
      EXPECT_THROW(decode_signature(cut), Error) << "len " << len;
      EXPECT_EQ(verify_encoded(kp_.public_key, params_, 2, cut, msg_).status,
                VerifyStatus::kMalformed);
    }
  }
}

TEST_F(Codec, TrailingBytesAndBadTagRejected) {
  Bytes enc = encode_signature(compressed_);
  enc.push_back(0);
  try {
    decode_signature(enc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidLength);
  }
  Bytes tagged = encode_signature(compressed_);
  tagged[0] = 0x7f;
  try {
    decode_signature(tagged);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidEncoding);
  }
}

TEST_F(Codec, RandomGarbageNeverVerifies) {
  SeededRandom junk(5);
  for (int i = 0; i < 50; ++i) {
    Bytes b(1 + i * 7);
    junk.fill(b);
    EXPECT_FALSE(verify_encoded(kp_.public_key, params_, 2, b, msg_));
  }
}

TEST_F(Codec, KeyStoreRoundTrip) {
  Bytes enc = encode_key_store(store_);
  auto back = decode_key_store(enc);
  ASSERT_EQ(back.size(), store_.size());
  for (size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].session, store_[i].session);
    EXPECT_EQ(back[i].symbols, params_.symbols);
    EXPECT_EQ(back[i].radix, params_.radix);
    EXPECT_EQ(back[i].aux, store_[i].aux);
    EXPECT_EQ(back[i].subkeys, store_[i].subkeys);
  }
  EXPECT_EQ(encode_key_store(back), enc);
  Bytes cut(enc.begin(), enc.end() - 1);
  EXPECT_THROW(decode_key_store(cut), Error);
}

TEST_F(Codec, SessionKeysRejectShapeMismatch) {
  Bytes enc = encode_session_keys(store_[1]);
  EXPECT_EQ(decode_session_keys(enc).subkeys, store_[1].subkeys);
  SessionKeyMaterial broken = store_[1];
  broken.subkeys.pop_back();
  EXPECT_THROW(decode_session_keys(encode_session_keys(broken)), Error);
}

}  // namespace
}  // namespace otsske

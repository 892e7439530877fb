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


#include "otsske/backend.hpp"

#include <algorithm>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>
#include <openssl/sha.h>

#include "otsske/bytes.hpp"
#include "otsske/error.hpp"
#include "otsske/random.hpp"

namespace otsske {
namespace {

using boost::multiprecision::cpp_int;

const char kOrderHex[] =
    "73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001";

cpp_int to_int(ByteView be) {
  cpp_int v;
  boost::multiprecision::import_bits(v, be.begin(), be.end(), 8);
  return v;
}

Bytes from_int(const cpp_int& v, size_t len) {
  Bytes out(len, 0);
  cpp_int x = v;
  for (size_t i = 0; i < len; ++i) {
    out[len - 1 - i] = static_cast<uint8_t>(x & 0xff);
    x >>= 8;
  }
  return out;
}

const cpp_int& order() {
  static const cpp_int r = to_int(from_hex(kOrderHex));
  return r;
}

template <class E>
ErrorCode code_of(E&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::kIo;
}

// RFC 9380 expand_message_xmd with SHA-256, written out step by step.
Bytes expand_xmd(ByteView msg, std::string_view dst, size_t len) {
  const size_t ell = (len + 31) / 32;
  Bytes dst_prime(dst.begin(), dst.end());
  dst_prime.push_back(static_cast<uint8_t>(dst.size()));

  Bytes msg_prime(64, 0);
  msg_prime.insert(msg_prime.end(), msg.begin(), msg.end());
  msg_prime.push_back(static_cast<uint8_t>(len >> 8));
  msg_prime.push_back(static_cast<uint8_t>(len));
  msg_prime.push_back(0);
  msg_prime.insert(msg_prime.end(), dst_prime.begin(), dst_prime.end());

  uint8_t b0[32];
  SHA256(msg_prime.data(), msg_prime.size(), b0);

  Bytes out;
  uint8_t prev[32] = {0};
  for (size_t i = 1; i <= ell; ++i) {
    Bytes in(32);
    for (size_t k = 0; k < 32; ++k) in[k] = (i == 1 ? 0 : prev[k]) ^ b0[k];
    if (i == 1) std::copy(b0, b0 + 32, in.begin());
    in.push_back(static_cast<uint8_t>(i));
    in.insert(in.end(), dst_prime.begin(), dst_prime.end());
    SHA256(in.data(), in.size(), prev);
    out.insert(out.end(), prev, prev + 32);
  }
  out.resize(len);
  return out;
}

TEST(ExpandOracle, MatchesPublishedVectors) {
  // Checks the test oracle itself before it is used below.
  const std::string dst = "QUUX-V01-CS02-with-expander-SHA256-128";
  EXPECT_EQ(to_hex(expand_xmd({}, dst, 32)),
            "68a985b87eb6b46952128911f2a4412bbc302a9d759667f87f7a21d803f07235");
  EXPECT_EQ(to_hex(expand_xmd(as_bytes("abc"), dst, 32)),
            "d8ccab23b5985ccea865c6c97b6e5b8350e794e603b4b97902f53a8a0d605615");
}

TEST(Scalar, CanonicalEncodingBounds) {
  Bytes p = from_hex(kOrderHex);
  EXPECT_EQ(code_of([&] { Scalar::from_canonical(p); }),
            ErrorCode::kInvalidEncoding);
  Bytes p_minus_1 = from_int(order() - 1, 32);
  Scalar s = Scalar::from_canonical(p_minus_1);
  EXPECT_EQ(to_hex(s.to_bytes()), to_hex(p_minus_1));
  EXPECT_TRUE((s + Scalar::from_u64(1)).is_zero());
  EXPECT_EQ(code_of([] { Scalar::from_canonical(Bytes(31)); }),
            ErrorCode::kInvalidLength);
  EXPECT_TRUE(Scalar::reduce(p).is_zero());
}

TEST(Scalar, ArithmeticMatchesBigIntegers) {
  SeededRandom rng(11);
  for (int i = 0; i < 50; ++i) {
    Bytes a_raw(40), b_raw(40);
    rng.fill(a_raw);
    rng.fill(b_raw);
    Scalar a = Scalar::reduce(a_raw);
    Scalar b = Scalar::reduce(b_raw);
    cpp_int ai = to_int(a_raw) % order();
    cpp_int bi = to_int(b_raw) % order();
    EXPECT_EQ(to_hex(a.to_bytes()), to_hex(from_int(ai, 32)));
    EXPECT_EQ(to_hex((a + b).to_bytes()),
              to_hex(from_int((ai + bi) % order(), 32)));
    EXPECT_EQ(to_hex((a * b).to_bytes()),
              to_hex(from_int((ai * bi) % order(), 32)));
    EXPECT_EQ(to_hex((a - b).to_bytes()),
              to_hex(from_int((ai + order() - bi) % order(), 32)));
    if (!a.is_zero()) EXPECT_EQ(a * a.inverse(), Scalar::from_u64(1));
  }
  EXPECT_EQ(code_of([] { Scalar().inverse(); }), ErrorCode::kOutOfRange);
}

TEST(Scalar, RandomScalarsAreInRangeAndVary) {
  SeededRandom rng(3);
  Scalar prev = random_nonzero_scalar(rng);
  for (int i = 0; i < 100; ++i) {
    Scalar s = random_nonzero_scalar(rng);
    EXPECT_FALSE(s.is_zero());
    EXPECT_LT(to_int(s.to_bytes()), order());
    EXPECT_FALSE(s == prev);
    prev = s;
  }
}

template <class P>
void check_identity_encoding() {
  auto enc = P::identity().serialize();
  EXPECT_EQ(enc[0], 0xC0);
  EXPECT_TRUE(std::all_of(enc.begin() + 1, enc.end(),
                          [](uint8_t b) { return b == 0; }));
  EXPECT_TRUE(P::deserialize(enc).is_identity());
}

TEST(Point, IdentityEncodesAsInfinityFlag) {
  check_identity_encoding<G1Point>();
  check_identity_encoding<G2Point>();
}

TEST(Point, RoundTripAndGroupLaw) {
  SeededRandom rng(5);
  for (int i = 0; i < 20; ++i) {
    Scalar a = random_scalar(rng), b = random_scalar(rng);
    G1Point p = exp(G1Point::generator(), a);
    G2Point q = exp(G2Point::generator(), b);
    EXPECT_EQ(G1Point::deserialize(p.serialize()), p);
    EXPECT_EQ(G2Point::deserialize(q.serialize()), q);
    EXPECT_EQ(exp(G1Point::generator(), a + b),
              p * exp(G1Point::generator(), b));
    EXPECT_TRUE((q * q.inverse()).is_identity());
  }
  EXPECT_TRUE(exp(G2Point::generator(), Scalar()).is_identity());
  EXPECT_TRUE(
      exp(G1Point::generator(), Scalar::from_canonical(from_int(order() - 1, 32)))
          == G1Point::generator().inverse());
}

TEST(Point, DecodeRejectsGarbage) {
  Bytes ff1(48, 0xFF), ff2(96, 0xFF);
  EXPECT_EQ(code_of([&] { G1Point::deserialize(ff1); }),
            ErrorCode::kInvalidEncoding);
  EXPECT_EQ(code_of([&] { G2Point::deserialize(ff2); }),
            ErrorCode::kInvalidEncoding);
  EXPECT_EQ(code_of([] { G1Point::deserialize(Bytes(47)); }),
            ErrorCode::kInvalidLength);
  EXPECT_EQ(code_of([] { G2Point::deserialize(Bytes(97)); }),
            ErrorCode::kInvalidLength);
}

TEST(Point, DecodeRejectsPointsOutsideSubgroup) {
  // Small x coordinates land on the curve but, with a cofactor this large,
  // essentially never in the prime-order subgroup.
  int on_curve = 0;
  for (uint8_t x = 1; x < 64 && on_curve < 3; ++x) {
    Bytes enc(48, 0);
    enc[0] = 0x80;  // compressed flag
    enc[47] = x;
    ErrorCode c = ErrorCode::kIo;
    try {
      G1Point::deserialize(enc);
      ADD_FAILURE() << "x=" << int(x) << " accepted";
    } catch (const Error& e) {
      c = e.code();
    }
    if (c == ErrorCode::kNotInSubgroup) ++on_curve;
    else EXPECT_EQ(c, ErrorCode::kInvalidEncoding);
  }
  EXPECT_EQ(on_curve, 3);
}

TEST(Pairing, Bilinear) {
  SeededRandom rng(17);
  const GtElement base = pair(G1Point::generator(), G2Point::generator());
  EXPECT_FALSE(base.is_one());
  for (int i = 0; i < 100; ++i) {
    Scalar a = random_scalar(rng), b = random_scalar(rng);
    GtElement lhs =
        pair(exp(G1Point::generator(), a), exp(G2Point::generator(), b));
    EXPECT_EQ(lhs, base.pow(a * b)) << "pair " << i;
  }
}

TEST(Pairing, ProductMatchesIndividualPairingsAndCounts) {
  SeededRandom rng(19);
  std::vector<PairingTerm> terms;
  GtElement expected;
  for (int i = 0; i < 4; ++i) {
    PairingTerm t{exp(G1Point::generator(), random_scalar(rng)),
                  exp(G2Point::generator(), random_scalar(rng))};
    expected = expected * pair(t.first, t.second);
    terms.push_back(t);
  }
  reset_pairing_count();
  EXPECT_EQ(pairing_product(terms), expected);
  EXPECT_EQ(pairing_count(), 4u);
  // Identity terms contribute 1 but are still counted.
  reset_pairing_count();
  EXPECT_TRUE(pairing_product({{G1Point::identity(), G2Point::generator()}})
                  .is_one());
  EXPECT_EQ(pairing_count(), 1u);
}

TEST(DualPoint, ConsistencyAndEncoding) {
  SeededRandom rng(23);
  Scalar a = random_scalar(rng);
  DualPoint d = DualPoint::generator_power(a);
  EXPECT_TRUE(is_consistent(d));
  EXPECT_EQ(DualPoint::deserialize(d.serialize()), d);
  EXPECT_EQ(d.serialize().size(), 144u);
  DualPoint bad{d.first, exp(G2Point::generator(), a + Scalar::from_u64(1))};
  EXPECT_FALSE(is_consistent(bad));
  EXPECT_EQ(exp(d, Scalar::from_u64(2)), d * d);
  EXPECT_EQ(code_of([] { DualPoint::deserialize(Bytes(143)); }),
            ErrorCode::kInvalidLength);
}

TEST(Setup, SupportedLevels) {
  for (unsigned level : {128u, 256u}) {
    GroupParams g = setup(level);
    EXPECT_EQ(g.security_level, level);
    EXPECT_EQ(g.curve, "BLS12-381");
    EXPECT_EQ(to_hex(g.order_be), kOrderHex);
    EXPECT_EQ(g.order_bits, 255u);
  }
  EXPECT_EQ(code_of([] { setup(192); }), ErrorCode::kUnsupportedSecurityLevel);
  EXPECT_EQ(code_of([] { setup(0); }), ErrorCode::kUnsupportedSecurityLevel);
}

TEST(Setup, IndependentGeneratorIsUsable) {
  const G2Point& g2 = independent_g2();
  EXPECT_FALSE(g2.is_identity());
  EXPECT_FALSE(g2 == G2Point::generator());
  EXPECT_EQ(G2Point::deserialize(g2.serialize()), g2);
  EXPECT_EQ(independent_g2(), g2);
}

TEST(Hash, MatchesExpandMessageOracle) {
  SeededRandom rng(29);
  for (int i = 0; i < 20; ++i) {
    Bytes a(i), b(3 * i + 1);
    rng.fill(a);
    rng.fill(b);
    Bytes framed;
    for (const Bytes* part : {&a, &b}) {
      for (int k = 7; k >= 0; --k) {
        framed.push_back(static_cast<uint8_t>(part->size() >> (8 * k)));
      }
      framed.insert(framed.end(), part->begin(), part->end());
    }
    cpp_int wide = to_int(expand_xmd(framed, kTagHash, 48));
    EXPECT_EQ(to_hex(hash_to_scalar(kTagHash, {a, b}).to_bytes()),
              to_hex(from_int(wide % order(), 32)));
  }
}

TEST(Hash, DomainSeparationAndFraming) {
  Bytes m = to_bytes("message");
  EXPECT_FALSE(hash_to_scalar(kTagHash, {m}) == hash_to_scalar(kTagPrp, {m}));
  // ("ab", "c") and ("a", "bc") must not collide.
  EXPECT_FALSE(hash_to_scalar(kTagHash, {as_bytes("ab"), as_bytes("c")}) ==
               hash_to_scalar(kTagHash, {as_bytes("a"), as_bytes("bc")}));
  EXPECT_EQ(hash_to_scalar(kTagHash, {m}), hash_to_scalar(kTagHash, {m}));
}

TEST(Hash, TopBitIsUnbiased) {
  const cpp_int half = order() / 2;
  int above = 0;
  const int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    std::string s = std::to_string(i);
    if (to_int(hash_to_scalar(kTagHash, {as_bytes(s)}).to_bytes()) > half) {
      ++above;
    }
  }
  double frac = static_cast<double>(above) / kDraws;
  EXPECT_NEAR(frac, 0.5, 0.02);
}

TEST(Hash, TaggedDigestIsFramedSha256) {
  Bytes expect_in;
  for (std::string_view part : {std::string_view("T"), std::string_view("xy")}) {
    for (int k = 7; k >= 0; --k) {
      expect_in.push_back(static_cast<uint8_t>(part.size() >> (8 * k)));
    }
    expect_in.insert(expect_in.end(), part.begin(), part.end());
  }
  Digest oracle;
  SHA256(expect_in.data(), expect_in.size(), oracle.data());
  EXPECT_EQ(tagged_digest("T", {as_bytes("xy")}), oracle);
}

TEST(Random, SeededStreamsAreReproducibleAndSeparated) {
  SeededRandom a(1, "x"), b(1, "x"), c(1, "y"), d(2, "x");
  Bytes ba(100), bb(100), bc(100), bd(100);
  a.fill(ba);
  b.fill(bb);
  c.fill(bc);
  d.fill(bd);
  EXPECT_EQ(ba, bb);
  EXPECT_NE(ba, bc);
  EXPECT_NE(ba, bd);
  // Chunking does not change the stream.
  SeededRandom e(1, "x");
  Bytes be(100);
  e.fill(std::span(be).first(7));
  e.fill(std::span(be).subspan(7));
  EXPECT_EQ(ba, be);
}

TEST(Bytes, HexAndReader) {
  EXPECT_EQ(to_hex(from_hex("00ff10")), "00ff10");
  EXPECT_EQ(code_of([] { from_hex("abc"); }), ErrorCode::kInvalidEncoding);
  EXPECT_EQ(code_of([] { from_hex("zz"); }), ErrorCode::kInvalidEncoding);

  ByteWriter w;
  w.put_u8(7).put_u64(0x0102030405060708ull).put_prefixed(as_bytes("hi"));
  Bytes buf = w.take();
  ByteReader r(buf);
  EXPECT_EQ(r.get_u8(), 7);
  EXPECT_EQ(r.get_u64(), 0x0102030405060708ull);
  ByteView hi = r.get_prefixed();
  EXPECT_EQ(std::string(hi.begin(), hi.end()), "hi");
  r.expect_end();

  ByteReader shorter(ByteView(buf).first(buf.size() - 1));
  shorter.get_u8();
  shorter.get_u64();
  EXPECT_EQ(code_of([&] { shorter.get_prefixed(); }), ErrorCode::kTruncated);
  ByteReader bounded(ByteView(buf).subspan(9));
  EXPECT_EQ(code_of([&] { bounded.get_prefixed(1); }),
            ErrorCode::kInvalidLength);
}

}  // namespace
}  // namespace otsske

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

#include <openssl/sha.h>

#include <atomic>
#include <cstring>
#include <string>
#include <vector>

#include "otsske/error.hpp"

namespace otsske {

namespace {

std::atomic<uint64_t> g_pairings{0};

// BLS12-381 subgroup order r, the scalar field modulus.
constexpr std::array<uint8_t, 32> kOrderBe = {
    0x73, 0xed, 0xa7, 0x53, 0x29, 0x9d, 0x7d, 0x48, 0x33, 0x39, 0xd8,
    0x08, 0x09, 0xa1, 0xd8, 0x05, 0x53, 0xbd, 0xa4, 0x02, 0xff, 0xfe,
    0x5b, 0xfe, 0xff, 0xff, 0xff, 0xff, 0x00, 0x00, 0x00, 0x01};

constexpr size_t kExpandedHashBytes = 48;

// Thin overload set so Point<> can stay generic over G1/G2.
void add(blst_p1* o, const blst_p1* a, const blst_p1* b) {
  blst_p1_add_or_double(o, a, b);
}
void add(blst_p2* o, const blst_p2* a, const blst_p2* b) {
  blst_p2_add_or_double(o, a, b);
}
void negate(blst_p1* p) { blst_p1_cneg(p, true); }
void negate(blst_p2* p) { blst_p2_cneg(p, true); }
bool is_inf(const blst_p1* p) { return blst_p1_is_inf(p); }
bool is_inf(const blst_p2* p) { return blst_p2_is_inf(p); }
bool equal(const blst_p1* a, const blst_p1* b) { return blst_p1_is_equal(a, b); }
bool equal(const blst_p2* a, const blst_p2* b) { return blst_p2_is_equal(a, b); }
void mult(blst_p1* o, const blst_p1* p, const blst_scalar& k) {
  blst_p1_mult(o, p, k.b, 255);
}
void mult(blst_p2* o, const blst_p2* p, const blst_scalar& k) {
  blst_p2_mult(o, p, k.b, 255);
}
void compress(uint8_t* out, const blst_p1* p) { blst_p1_compress(out, p); }
void compress(uint8_t* out, const blst_p2* p) { blst_p2_compress(out, p); }
void generator(blst_p1* p) { *p = *blst_p1_generator(); }
void generator(blst_p2* p) { *p = *blst_p2_generator(); }

template <class Traits>
typename Traits::Raw decode_point(ByteView in) {
  if (in.size() != Traits::kEncodedSize) {
    throw Error(ErrorCode::kInvalidLength,
                std::string(Traits::kName) + " encoding must be " +
                    std::to_string(Traits::kEncodedSize) + " bytes, got " +
                    std::to_string(in.size()));
  }
  typename Traits::Affine affine;
  typename Traits::Raw out;
  BLST_ERROR err;
  bool in_group;
  if constexpr (std::is_same_v<Traits, detail::G1Traits>) {
    err = blst_p1_uncompress(&affine, in.data());
    in_group = err == BLST_SUCCESS && blst_p1_affine_in_g1(&affine);
    blst_p1_from_affine(&out, &affine);
  } else {
    err = blst_p2_uncompress(&affine, in.data());
    in_group = err == BLST_SUCCESS && blst_p2_affine_in_g2(&affine);
    blst_p2_from_affine(&out, &affine);
  }
  if (err == BLST_BAD_ENCODING) {
    throw Error(ErrorCode::kInvalidEncoding,
                std::string(Traits::kName) + " point: bad encoding");
  }
  if (err == BLST_POINT_NOT_ON_CURVE) {
    throw Error(ErrorCode::kInvalidEncoding,
                std::string(Traits::kName) + " point: not on curve");
  }
  if (err != BLST_SUCCESS) {
    throw Error(ErrorCode::kInvalidEncoding,
                std::string(Traits::kName) + " point: decode failed");
  }
  if (!in_group) {
    throw Error(ErrorCode::kNotInSubgroup,
                std::string(Traits::kName) + " point: wrong subgroup");
  }
  return out;
}

}  // namespace

// --- Scalar ----------------------------------------------------------------

Scalar::Scalar() { std::memset(&v_, 0, sizeof(v_)); }

Scalar Scalar::from_u64(uint64_t v) {
  const uint64_t limbs[4] = {v, 0, 0, 0};
  Scalar out;
  blst_fr_from_uint64(&out.v_, limbs);
  return out;
}

Scalar Scalar::from_canonical(ByteView be) {
  if (be.size() != kEncodedSize) {
    throw Error(ErrorCode::kInvalidLength, "scalar encoding must be 32 bytes");
  }
  blst_scalar s;
  blst_scalar_from_bendian(&s, be.data());
  if (!blst_scalar_fr_check(&s)) {
    throw Error(ErrorCode::kInvalidEncoding, "scalar is not reduced mod p");
  }
  Scalar out;
  blst_fr_from_scalar(&out.v_, &s);
  return out;
}

Scalar Scalar::reduce(ByteView be) {
  blst_scalar s;
  blst_scalar_from_be_bytes(&s, be.data(), be.size());
  Scalar out;
  blst_fr_from_scalar(&out.v_, &s);
  return out;
}

std::array<uint8_t, Scalar::kEncodedSize> Scalar::to_bytes() const {
  blst_scalar s = to_blst();
  std::array<uint8_t, kEncodedSize> out;
  blst_bendian_from_scalar(out.data(), &s);
  return out;
}

blst_scalar Scalar::to_blst() const {
  blst_scalar s;
  blst_scalar_from_fr(&s, &v_);
  return s;
}

bool Scalar::is_zero() const {
  static const blst_fr kZero{};
  return std::memcmp(&v_, &kZero, sizeof(v_)) == 0;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw Error(ErrorCode::kOutOfRange, "inverse of zero");
  Scalar out;
  blst_fr_eucl_inverse(&out.v_, &v_);
  return out;
}

Scalar Scalar::operator-() const {
  Scalar out;
  blst_fr_cneg(&out.v_, &v_, true);
  return out;
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar out;
  blst_fr_add(&out.v_, &v_, &o.v_);
  return out;
}

Scalar Scalar::operator-(const Scalar& o) const {
  Scalar out;
  blst_fr_sub(&out.v_, &v_, &o.v_);
  return out;
}

Scalar Scalar::operator*(const Scalar& o) const {
  Scalar out;
  blst_fr_mul(&out.v_, &v_, &o.v_);
  return out;
}

bool operator==(const Scalar& a, const Scalar& b) {
  return std::memcmp(&a.v_, &b.v_, sizeof(a.v_)) == 0;
}

Scalar random_scalar(RandomSource& rng) {
  std::array<uint8_t, 32> buf;
  for (;;) {
    rng.fill(buf);
    buf[0] &= 0x7f;  // p < 2^255
    blst_scalar s;
    blst_scalar_from_bendian(&s, buf.data());
    if (blst_scalar_fr_check(&s)) return Scalar::from_canonical(buf);
  }
}

Scalar random_nonzero_scalar(RandomSource& rng) {
  for (;;) {
    Scalar s = random_scalar(rng);
    if (!s.is_zero()) return s;
  }
}

// --- Point -----------------------------------------------------------------

template <class Traits>
Point<Traits>::Point() {
  std::memset(&p_, 0, sizeof(p_));
}

template <class Traits>
Point<Traits> Point<Traits>::generator() {
  Point out;
  otsske::generator(&out.p_);
  return out;
}

template <class Traits>
bool Point<Traits>::is_identity() const {
  return is_inf(&p_);
}

template <class Traits>
Point<Traits> Point<Traits>::inverse() const {
  Point out = *this;
  negate(&out.p_);
  return out;
}

template <class Traits>
Point<Traits> Point<Traits>::operator*(const Point& o) const {
  Point out;
  add(&out.p_, &p_, &o.p_);
  return out;
}

template <class Traits>
auto Point<Traits>::serialize() const -> std::array<uint8_t, kEncodedSize> {
  std::array<uint8_t, kEncodedSize> out;
  compress(out.data(), &p_);
  return out;
}

template <class Traits>
Point<Traits> Point<Traits>::deserialize(ByteView in) {
  return from_raw(decode_point<Traits>(in));
}

template <class Traits>
bool Point<Traits>::operator==(const Point& o) const {
  return equal(&p_, &o.p_);
}

template <class T>
Point<T> exp(const Point<T>& base, const Scalar& k) {
  typename T::Raw out;
  mult(&out, &base.raw(), k.to_blst());
  return Point<T>::from_raw(out);
}

template class Point<detail::G1Traits>;
template class Point<detail::G2Traits>;
template G1Point exp(const G1Point&, const Scalar&);
template G2Point exp(const G2Point&, const Scalar&);

// --- DualPoint -------------------------------------------------------------

DualPoint DualPoint::generator() {
  return {G1Point::generator(), G2Point::generator()};
}

DualPoint DualPoint::generator_power(const Scalar& k) {
  return {exp(G1Point::generator(), k), exp(G2Point::generator(), k)};
}

std::array<uint8_t, DualPoint::kEncodedSize> DualPoint::serialize() const {
  std::array<uint8_t, kEncodedSize> out;
  auto a = first.serialize();
  auto b = second.serialize();
  std::copy(a.begin(), a.end(), out.begin());
  std::copy(b.begin(), b.end(), out.begin() + a.size());
  return out;
}

DualPoint DualPoint::deserialize(ByteView in) {
  if (in.size() != kEncodedSize) {
    throw Error(ErrorCode::kInvalidLength,
                "dual point encoding must be " + std::to_string(kEncodedSize) +
                    " bytes, got " + std::to_string(in.size()));
  }
  return {G1Point::deserialize(in.first(G1Point::kEncodedSize)),
          G2Point::deserialize(in.subspan(G1Point::kEncodedSize))};
}

DualPoint exp(const DualPoint& base, const Scalar& k) {
  return {exp(base.first, k), exp(base.second, k)};
}

// --- GT and pairing --------------------------------------------------------

GtElement::GtElement() : v_(*blst_fp12_one()) {}

bool GtElement::is_one() const { return blst_fp12_is_one(&v_); }

GtElement GtElement::operator*(const GtElement& o) const {
  GtElement out;
  blst_fp12_mul(&out.v_, &v_, &o.v_);
  return out;
}

GtElement GtElement::pow(const Scalar& k) const {
  auto bits = k.to_bytes();
  GtElement acc;
  for (uint8_t byte : bits) {
    for (int i = 7; i >= 0; --i) {
      blst_fp12_sqr(&acc.v_, &acc.v_);
      if ((byte >> i) & 1) blst_fp12_mul(&acc.v_, &acc.v_, &v_);
    }
  }
  return acc;
}

bool operator==(const GtElement& a, const GtElement& b) {
  return blst_fp12_is_equal(&a.v_, &b.v_);
}

GtElement pairing_product(std::span<const PairingTerm> terms) {
  g_pairings.fetch_add(terms.size(), std::memory_order_relaxed);
  blst_fp12 acc = *blst_fp12_one();
  bool any = false;
  for (const PairingTerm& t : terms) {
    // e(1, Q) = e(P, 1) = 1.
    if (t.first.is_identity() || t.second.is_identity()) continue;
    blst_p1_affine p;
    blst_p2_affine q;
    blst_p1_to_affine(&p, &t.first.raw());
    blst_p2_to_affine(&q, &t.second.raw());
    blst_fp12 ml;
    blst_miller_loop(&ml, &q, &p);
    blst_fp12_mul(&acc, &acc, &ml);
    any = true;
  }
  if (!any) return GtElement::one();
  blst_fp12 out;
  blst_final_exp(&out, &acc);
  return GtElement::from_raw(out);
}

GtElement pairing_product(std::initializer_list<PairingTerm> terms) {
  return pairing_product(std::span<const PairingTerm>(terms.begin(), terms.size()));
}

GtElement pair(const G1Point& a, const G2Point& b) {
  return pairing_product({PairingTerm{a, b}});
}

uint64_t pairing_count() { return g_pairings.load(std::memory_order_relaxed); }

void reset_pairing_count() { g_pairings.store(0, std::memory_order_relaxed); }

bool is_consistent(const DualPoint& x) {
  return pairing_product({{x.first, G2Point::generator().inverse()},
                          {G1Point::generator(), x.second}})
      .is_one();
}

// --- parameters and hashing ------------------------------------------------

GroupParams setup(unsigned security_level) {
  if (security_level != 128 && security_level != 256) {
    throw Error(ErrorCode::kUnsupportedSecurityLevel,
                "unsupported security level " + std::to_string(security_level));
  }
  GroupParams p;
  p.security_level = security_level;
  p.curve = "BLS12-381";
  p.pairing_type = "type-3 (optimal ate), dual-represented G";
  p.order_be = kOrderBe;
  p.order_bits = 255;
  return p;
}

const G2Point& independent_g2() {
  static const G2Point kG2 = [] {
    static constexpr std::string_view kDst =
        "OTSSKE-V01-CS01-with-BLS12381G2_XMD:SHA-256_SSWU_RO_";
    static constexpr std::string_view kMsg = "OTSSKE independent G2 generator";
    blst_p2 p;
    blst_hash_to_g2(&p, reinterpret_cast<const byte*>(kMsg.data()),
                    kMsg.size(), reinterpret_cast<const byte*>(kDst.data()),
                    kDst.size(), nullptr, 0);
    return G2Point::from_raw(p);
  }();
  return kG2;
}

Scalar hash_to_scalar(std::string_view tag, std::span<const ByteView> parts) {
  Bytes msg = encode_parts(parts);
  std::array<uint8_t, kExpandedHashBytes> wide;
  blst_expand_message_xmd(wide.data(), wide.size(), msg.data(), msg.size(),
                          reinterpret_cast<const byte*>(tag.data()),
                          tag.size());
  return Scalar::reduce(wide);
}

Scalar hash_to_scalar(std::string_view tag,
                      std::initializer_list<ByteView> parts) {
  return hash_to_scalar(tag, std::span<const ByteView>(parts.begin(), parts.size()));
}

Digest sha256(ByteView data) {
  Digest out;
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Digest tagged_digest(std::string_view tag, std::span<const ByteView> parts) {
  std::vector<ByteView> all;
  all.reserve(parts.size() + 1);
  all.push_back(as_bytes(tag));
  all.insert(all.end(), parts.begin(), parts.end());
  return sha256(encode_parts(all));
}

Digest tagged_digest(std::string_view tag,
                     std::initializer_list<ByteView> parts) {
  return tagged_digest(tag, std::span<const ByteView>(parts.begin(), parts.size()));
}

}  // namespace otsske

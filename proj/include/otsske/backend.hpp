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

// Pairing-group backend over BLS12-381 (blst).
//
// The scheme is written for a symmetric pairing e: G x G -> GT. This backend
// is asymmetric (e: G1 x G2 -> GT), so every element that the verification
// equations use on both sides of a pairing is carried as a DualPoint, i.e.
// the same exponent applied to the G1 and the G2 generator. Elements that
// only ever appear as a second pairing argument live in G2 alone.
//
// Group operations use multiplicative notation to match the equations:
// `a * b` is the group law and `exp(a, k)` is exponentiation.

#ifndef OTSSKE_BACKEND_HPP_
#define OTSSKE_BACKEND_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>

#include <blst.h>

#include "otsske/bytes.hpp"
#include "otsske/random.hpp"

namespace otsske {

// Domain-separation tags.
inline constexpr std::string_view kTagHash = "OTSSKE/H";
inline constexpr std::string_view kTagPrp = "OTSSKE/PRP";
inline constexpr std::string_view kTagMeasurement = "OTSSKE/MR";
inline constexpr std::string_view kTagEot = "OTSSKE/EOT";

// Element of Z_p, p the prime group order. Kept in Montgomery form; the
// canonical encoding is 32 bytes big-endian, fully reduced.
class Scalar {
 public:
  static constexpr size_t kEncodedSize = 32;

  Scalar();  // zero

  static Scalar from_u64(uint64_t v);
  // Rejects inputs that are not exactly 32 bytes or not below p.
  static Scalar from_canonical(ByteView be);
  // Any-length big-endian integer, reduced mod p.
  static Scalar reduce(ByteView be);

  std::array<uint8_t, kEncodedSize> to_bytes() const;
  blst_scalar to_blst() const;

  bool is_zero() const;
  Scalar inverse() const;  // throws kOutOfRange on zero

  Scalar operator-() const;
  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }

  friend bool operator==(const Scalar& a, const Scalar& b);

 private:
  blst_fr v_;
};

// Uniform in [0, p) by rejection sampling.
Scalar random_scalar(RandomSource& rng);
// Uniform in [1, p).
Scalar random_nonzero_scalar(RandomSource& rng);

namespace detail {

struct G1Traits {
  using Raw = blst_p1;
  using Affine = blst_p1_affine;
  static constexpr size_t kEncodedSize = 48;
  static constexpr std::string_view kName = "G1";
};

struct G2Traits {
  using Raw = blst_p2;
  using Affine = blst_p2_affine;
  static constexpr size_t kEncodedSize = 96;
  static constexpr std::string_view kName = "G2";
};

}  // namespace detail

// Element of a source group, stored in Jacobian coordinates.
template <class Traits>
class Point {
 public:
  using Raw = typename Traits::Raw;
  static constexpr size_t kEncodedSize = Traits::kEncodedSize;

  Point();  // identity

  static Point generator();
  static Point identity() { return Point(); }

  bool is_identity() const;
  Point inverse() const;
  Point operator*(const Point& o) const;
  Point& operator*=(const Point& o) { return *this = *this * o; }

  // Canonical compressed encoding (ZCash BLS12-381 format).
  std::array<uint8_t, kEncodedSize> serialize() const;
  // Validates length, curve equation and subgroup membership.
  static Point deserialize(ByteView in);

  const Raw& raw() const { return p_; }
  static Point from_raw(const Raw& r) {
    Point out;
    out.p_ = r;
    return out;
  }

  bool operator==(const Point& o) const;

 private:
  Raw p_;
};

using G1Point = Point<detail::G1Traits>;
using G2Point = Point<detail::G2Traits>;

extern template class Point<detail::G1Traits>;
extern template class Point<detail::G2Traits>;

template <class T>
Point<T> exp(const Point<T>& base, const Scalar& k);

extern template G1Point exp(const G1Point&, const Scalar&);
extern template G2Point exp(const G2Point&, const Scalar&);

// An element of the symmetric-notation group G, represented in both
// source groups with the same discrete logarithm.
struct DualPoint {
  static constexpr size_t kEncodedSize =
      G1Point::kEncodedSize + G2Point::kEncodedSize;

  G1Point first;   // usable as a first pairing argument
  G2Point second;  // usable as a second pairing argument

  static DualPoint generator();
  static DualPoint identity() { return {}; }
  // (g^k in G1, g^k in G2): the only way to create a dual element whose
  // halves are consistent without a pairing check.
  static DualPoint generator_power(const Scalar& k);

  bool is_identity() const { return first.is_identity() && second.is_identity(); }
  DualPoint operator*(const DualPoint& o) const {
    return {first * o.first, second * o.second};
  }

  std::array<uint8_t, kEncodedSize> serialize() const;
  static DualPoint deserialize(ByteView in);

  friend bool operator==(const DualPoint& a, const DualPoint& b) = default;
};

DualPoint exp(const DualPoint& base, const Scalar& k);

// Element of the pairing target group GT.
class GtElement {
 public:
  GtElement();  // one

  static GtElement one() { return GtElement(); }
  bool is_one() const;
  GtElement operator*(const GtElement& o) const;
  GtElement pow(const Scalar& k) const;

  const blst_fp12& raw() const { return v_; }
  static GtElement from_raw(const blst_fp12& v) {
    GtElement out;
    out.v_ = v;
    return out;
  }

  friend bool operator==(const GtElement& a, const GtElement& b);

 private:
  blst_fp12 v_;
};

// e(a, b). Increments the pairing counter by one.
GtElement pair(const G1Point& a, const G2Point& b);

struct PairingTerm {
  G1Point first;
  G2Point second;
};

// Product of e(first, second) over |terms| with a single final
// exponentiation. Counts one pairing per term.
GtElement pairing_product(std::span<const PairingTerm> terms);
GtElement pairing_product(std::initializer_list<PairingTerm> terms);

// Instrumentation: number of pairings evaluated since the last reset. The
// counter is process-wide and atomic.
uint64_t pairing_count();
void reset_pairing_count();

// True iff e(x.first, g_G2) == e(g_G1, x.second). Costs two pairings.
bool is_consistent(const DualPoint& x);

// Published group description returned by setup().
struct GroupParams {
  unsigned security_level = 0;  // the level that was requested
  std::string curve;
  std::string pairing_type;
  std::array<uint8_t, 32> order_be{};  // p, big-endian
  unsigned order_bits = 0;
  size_t g1_encoded_size = G1Point::kEncodedSize;
  size_t g2_encoded_size = G2Point::kEncodedSize;
};

// Fixed parameters for λ in {128, 256}; throws kUnsupportedSecurityLevel
// otherwise. Both levels resolve to BLS12-381, the strongest pairing curve
// the backend implements.
GroupParams setup(unsigned security_level);

// Second generator of G2 with unknown discrete log relative to the G2
// generator, derived by hashing to the curve with a fixed tag.
const G2Point& independent_g2();

// SHA-256 based expand-message (RFC 9380 expand_message_xmd) producing
// 48 bytes (p-bits + 128), reduced mod p. |parts| are length-prefixed.
Scalar hash_to_scalar(std::string_view tag, std::span<const ByteView> parts);
Scalar hash_to_scalar(std::string_view tag,
                      std::initializer_list<ByteView> parts);

using Digest = std::array<uint8_t, 32>;

Digest sha256(ByteView data);
// SHA-256 over the length-prefixed (tag, parts...) sequence.
Digest tagged_digest(std::string_view tag, std::span<const ByteView> parts);
Digest tagged_digest(std::string_view tag,
                     std::initializer_list<ByteView> parts);

}  // namespace otsske

#endif  // OTSSKE_BACKEND_HPP_

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

// One-time signatures with secret key exposure over a pairing group.
//
// Every session owns an n x t matrix of subkeys
//
//   sk[j][b] = g2^a * F(i*t^n + b*n*t^j)^r * v_j,   F(k) = g1^k * h,
//
// with prod_j v_j = 1, plus aux = g^r. A message picks one column b_j per
// row j through a hash-derived t-ary number B = sum_j b_j t^j, and the
// product of the picked subkeys collapses to (g2^a * F(i*t^n + B)^r)^n.
// Leaking the picked subset for one message does not yield the subset for
// any other message of the same session.

#ifndef OTSSKE_SCHEME_HPP_
#define OTSSKE_SCHEME_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "otsske/backend.hpp"
#include "otsske/bytes.hpp"
#include "otsske/random.hpp"

namespace otsske {

using BigUint = boost::multiprecision::cpp_int;

struct SchemeParams {
  uint64_t sessions = 8;  // N; valid session ids are 0..N
  uint32_t symbols = 32;  // n, digits per index
  uint32_t radix = 4;     // t
  unsigned security_level = 256;

  // q = t * n.
  uint64_t subkeys_per_session() const {
    return static_cast<uint64_t>(radix) * symbols;
  }
  // t^n, the size of the index space for one session.
  BigUint index_space() const;

  // Throws Error(kInvalidParameters) unless N >= 1, n >= 1, t >= 2, the
  // security level is supported and (N + 1) * t^n < p, which keeps
  // encode_index injective over every valid (session, B).
  void validate() const;

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

struct PublicKey {
  GroupParams group;
  DualPoint generator;      // g
  DualPoint master_public;  // g1 = g^a
  G2Point secret_base;      // g2, independent of g
  DualPoint index_offset;   // h
};

struct MasterSecret {
  Scalar exponent;  // a, nonzero
};

struct KeyPair {
  PublicKey public_key;
  MasterSecret secret;
};

// Per-session randoms, kept only when generating in test mode.
struct SessionTransients {
  Scalar randomizer;               // r
  std::vector<Scalar> shares;      // beta_j, summing to zero
  std::vector<G2Point> share_points;  // v_j = g^beta_j
};

struct SessionKeyMaterial {
  uint64_t session = 0;
  uint32_t symbols = 0;
  uint32_t radix = 0;
  // Row-major: entry t*j + b holds the subkey for digit position j, value b.
  std::vector<G2Point> subkeys;
  DualPoint aux;  // g^r
  std::optional<SessionTransients> transients;

  const G2Point& subkey(uint32_t position, uint32_t digit) const {
    return subkeys.at(static_cast<size_t>(position) * radix + digit);
  }
};

enum class KeyMode {
  kProduction,        // r, beta, v are wiped once the subkeys exist
  kRetainTransients,  // test mode: keep them for oracle checks
};

struct KeygenPhaseTimes {
  double share_ms = 0;   // beta_j and v_j
  double aux_ms = 0;     // r and aux
  double subkey_ms = 0;  // the n*t subkeys
};

// Fixed generators from the backend, fresh a and h.
KeyPair keygen_setup(const SchemeParams& params, RandomSource& rng);

// F(k) = g1^k * h, both representations.
DualPoint index_point(const PublicKey& pk, const Scalar& k);
// G2 half of F(k); all that verification needs.
G2Point index_point_g2(const PublicKey& pk, const Scalar& k);

SessionKeyMaterial gen_session(const PublicKey& pk, const MasterSecret& secret,
                               const SchemeParams& params, uint64_t session,
                               RandomSource& rng,
                               KeyMode mode = KeyMode::kProduction,
                               KeygenPhaseTimes* times = nullptr);

// k = session * t^n + B as a scalar. Throws kOutOfRange when session > N or
// B >= t^n.
Scalar encode_index(const SchemeParams& params, uint64_t session,
                    const BigUint& value);

// Little-endian base-t digits of B; throws kOutOfRange when B >= t^n.
std::vector<uint32_t> decompose(const SchemeParams& params,
                                const BigUint& value);
BigUint recompose(const SchemeParams& params, std::span<const uint32_t> digits);

struct IndexSelection {
  BigUint value;                  // B
  std::vector<uint32_t> digits;   // b_0 .. b_{n-1}
  std::vector<uint32_t> indices;  // t*j + b_j, ascending
  Bytes prp_key;
};

IndexSelection selection_from_value(const SchemeParams& params,
                                    const BigUint& value, Bytes prp_key);
// B is |hashed| reduced mod t^n; for power-of-two t that is the low
// n*log2(t) bits of its canonical encoding.
IndexSelection selection_from_hash(const SchemeParams& params,
                                   const Scalar& hashed, Bytes prp_key);
// Hash-instantiated keyed permutation of the message.
IndexSelection prp_select(const SchemeParams& params, ByteView prp_key,
                          ByteView message);

std::vector<G2Point> subkeys_at(const SessionKeyMaterial& keys,
                                const IndexSelection& selection);

// Product of exactly n subkeys. Throws kInvalidParameters on a wrong count.
G2Point aggregate(const SchemeParams& params, std::span<const G2Point> subkeys);

struct FullSignature {
  G2Point x;
  DualPoint y;
  G2Point z;
  Bytes prp_key;

  friend bool operator==(const FullSignature&, const FullSignature&) = default;
};

struct CompressedSignature {
  G1Point y;  // aux
  G2Point z;  // product of the selected subkeys
  Bytes prp_key;

  friend bool operator==(const CompressedSignature&,
                         const CompressedSignature&) = default;
};

using Signature = std::variant<FullSignature, CompressedSignature>;

FullSignature sign_full(const PublicKey& pk, const SchemeParams& params,
                        std::span<const G2Point> subkeys,
                        const IndexSelection& selection, const DualPoint& aux,
                        ByteView message, RandomSource& rng);

// No randomness and no pairings: the aggregate is the signature.
CompressedSignature sign_compressed(const SchemeParams& params,
                                    std::span<const G2Point> subkeys,
                                    const IndexSelection& selection,
                                    const DualPoint& aux);

enum class VerifyStatus {
  kValid,
  kEquationFailed,
  kDegenerate,         // g2^{n u} * x == 1, i.e. s + u == 0
  kInconsistentDual,   // the two halves of y disagree
  kMalformed,
  kSessionOutOfRange,
  kUnknownNonce,
  kReplayedNonce,
  kUntrustedMeasurement,
};

std::string_view verify_status_name(VerifyStatus status);

struct VerifyResult {
  VerifyStatus status = VerifyStatus::kEquationFailed;
  std::string detail;

  bool ok() const { return status == VerifyStatus::kValid; }
  explicit operator bool() const { return ok(); }
};

VerifyResult verify_full(const PublicKey& pk, const SchemeParams& params,
                         uint64_t session, const FullSignature& sig,
                         ByteView message);

// Derives the selection from the signature's key and the message, then
// checks e(g, z) == e(g1, g2^n) * e(y, F(k)^n). Exactly three pairings.
VerifyResult verify_compressed(const PublicKey& pk, const SchemeParams& params,
                               uint64_t session, const CompressedSignature& sig,
                               ByteView message);

// Same equation with a caller-derived selection, for protocols that bind
// the selection to more than (key, message).
VerifyResult verify_compressed_at(const PublicKey& pk,
                                  const SchemeParams& params, uint64_t session,
                                  const G1Point& y, const G2Point& z,
                                  const IndexSelection& selection);

VerifyResult verify(const PublicKey& pk, const SchemeParams& params,
                    uint64_t session, const Signature& sig, ByteView message);

namespace detail {

// u = H(M, x). Replaceable in tests to reach the s + u == 0 branch.
using ChallengeHash = std::function<Scalar(ByteView message, const G2Point& x)>;

Scalar default_challenge(ByteView message, const G2Point& x);

FullSignature sign_full_with(const PublicKey& pk, const SchemeParams& params,
                             std::span<const G2Point> subkeys,
                             const IndexSelection& selection,
                             const DualPoint& aux, ByteView message,
                             RandomSource& rng, const ChallengeHash& challenge);

VerifyResult verify_full_with(const PublicKey& pk, const SchemeParams& params,
                              uint64_t session, const FullSignature& sig,
                              ByteView message, const ChallengeHash& challenge);

}  // namespace detail

}  // namespace otsske

#endif  // OTSSKE_SCHEME_HPP_

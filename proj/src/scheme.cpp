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

#include <openssl/crypto.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iterator>
#include <string>

#include "otsske/error.hpp"

namespace otsske {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

BigUint big_from_bytes(ByteView be) {
  BigUint v;
  if (!be.empty()) import_bits(v, be.begin(), be.end(), 8, true);
  return v;
}

Bytes big_to_bytes(const BigUint& v) {
  Bytes out;
  if (v.is_zero()) return out;
  export_bits(v, std::back_inserter(out), 8, true);
  return out;
}

Scalar scalar_from_big(const BigUint& v) { return Scalar::reduce(big_to_bytes(v)); }

const BigUint& group_order() {
  static const BigUint kOrder = big_from_bytes(setup(256).order_be);
  return kOrder;
}

template <class T>
void wipe(T& v) {
  OPENSSL_cleanse(&v, sizeof(v));
}

}  // namespace

// --- parameters ------------------------------------------------------------

BigUint SchemeParams::index_space() const {
  return boost::multiprecision::pow(BigUint(radix), symbols);
}

void SchemeParams::validate() const {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidParameters, why);
  };
  if (sessions < 1) fail("session count N must be at least 1");
  if (symbols < 1) fail("symbol count n must be at least 1");
  if (radix < 2) fail("radix t must be at least 2");
  if (security_level != 128 && security_level != 256) {
    fail("unsupported security level " + std::to_string(security_level));
  }
  // Keeps the index space below p before the exponentiation below.
  if (static_cast<double>(symbols) * std::log2(static_cast<double>(radix)) >
      256.0) {
    fail("t^n exceeds the group order");
  }
  if ((BigUint(sessions) + 1) * index_space() >= group_order()) {
    fail("(N + 1) * t^n must be below the group order");
  }
}

// --- key generation --------------------------------------------------------

KeyPair keygen_setup(const SchemeParams& params, RandomSource& rng) {
  params.validate();
  Scalar alpha = random_nonzero_scalar(rng);
  Scalar rho = random_scalar(rng);
  KeyPair out{
      PublicKey{setup(params.security_level), DualPoint::generator(),
                DualPoint::generator_power(alpha), independent_g2(),
                DualPoint::generator_power(rho)},
      MasterSecret{alpha}};
  wipe(rho);
  return out;
}

DualPoint index_point(const PublicKey& pk, const Scalar& k) {
  return exp(pk.master_public, k) * pk.index_offset;
}

G2Point index_point_g2(const PublicKey& pk, const Scalar& k) {
  return exp(pk.master_public.second, k) * pk.index_offset.second;
}

SessionKeyMaterial gen_session(const PublicKey& pk, const MasterSecret& secret,
                               const SchemeParams& params, uint64_t session,
                               RandomSource& rng, KeyMode mode,
                               KeygenPhaseTimes* times) {
  params.validate();
  if (session > params.sessions) {
    throw Error(ErrorCode::kOutOfRange,
                "session " + std::to_string(session) + " outside 0.." +
                    std::to_string(params.sessions));
  }
  const uint32_t n = params.symbols;
  const uint32_t t = params.radix;

  // v_j = g^beta_j with sum_j beta_j = 0.
  auto start = Clock::now();
  std::vector<Scalar> shares(n);
  Scalar sum;
  for (uint32_t j = 0; j + 1 < n; ++j) {
    shares[j] = random_scalar(rng);
    sum += shares[j];
  }
  shares[n - 1] = -sum;
  std::vector<G2Point> share_points(n);
  for (uint32_t j = 0; j < n; ++j) {
    share_points[j] = exp(G2Point::generator(), shares[j]);
  }
  if (times) times->share_ms = elapsed_ms(start);

  start = Clock::now();
  Scalar r = random_scalar(rng);
  DualPoint aux = DualPoint::generator_power(r);
  if (times) times->aux_ms = elapsed_ms(start);

  // sk[j][b] = g2^a * F(m)^r * v_j with F(m)^r = g1^{m r} * h^r.
  start = Clock::now();
  const G2Point constant =
      exp(pk.secret_base, secret.exponent) * exp(pk.index_offset.second, r);
  const BigUint session_base = BigUint(session) * params.index_space();
  std::vector<G2Point> subkeys;
  subkeys.reserve(params.subkeys_per_session());
  BigUint position_weight = n;  // n * t^j
  for (uint32_t j = 0; j < n; ++j) {
    for (uint32_t b = 0; b < t; ++b) {
      Scalar m = scalar_from_big(session_base + position_weight * b);
      subkeys.push_back(constant * exp(pk.master_public.second, m * r) *
                        share_points[j]);
    }
    position_weight *= t;
  }
  if (times) times->subkey_ms = elapsed_ms(start);

  SessionKeyMaterial out;
  out.session = session;
  out.symbols = n;
  out.radix = t;
  out.subkeys = std::move(subkeys);
  out.aux = aux;
  if (mode == KeyMode::kRetainTransients) {
    out.transients = SessionTransients{r, shares, share_points};
  }
  wipe(r);
  for (Scalar& s : shares) wipe(s);
  for (G2Point& v : share_points) wipe(v);
  return out;
}

// --- index coding ----------------------------------------------------------

Scalar encode_index(const SchemeParams& params, uint64_t session,
                    const BigUint& value) {
  if (session > params.sessions) {
    throw Error(ErrorCode::kOutOfRange,
                "session " + std::to_string(session) + " outside 0.." +
                    std::to_string(params.sessions));
  }
  BigUint space = params.index_space();
  if (value < 0 || value >= space) {
    throw Error(ErrorCode::kOutOfRange, "index value outside [0, t^n)");
  }
  return scalar_from_big(BigUint(session) * space + value);
}

std::vector<uint32_t> decompose(const SchemeParams& params,
                                const BigUint& value) {
  if (value < 0 || value >= params.index_space()) {
    throw Error(ErrorCode::kOutOfRange, "index value outside [0, t^n)");
  }
  std::vector<uint32_t> digits(params.symbols);
  BigUint rest = value;
  for (uint32_t& d : digits) {
    d = static_cast<uint32_t>(rest % params.radix);
    rest /= params.radix;
  }
  return digits;
}

BigUint recompose(const SchemeParams& params, std::span<const uint32_t> digits) {
  BigUint value = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    value = value * params.radix + *it;
  }
  return value;
}

IndexSelection selection_from_value(const SchemeParams& params,
                                    const BigUint& value, Bytes prp_key) {
  IndexSelection sel;
  sel.value = value;
  sel.digits = decompose(params, value);
  sel.indices.reserve(params.symbols);
  for (uint32_t j = 0; j < params.symbols; ++j) {
    sel.indices.push_back(params.radix * j + sel.digits[j]);
  }
  sel.prp_key = std::move(prp_key);
  return sel;
}

IndexSelection selection_from_hash(const SchemeParams& params,
                                   const Scalar& hashed, Bytes prp_key) {
  BigUint value = big_from_bytes(hashed.to_bytes()) % params.index_space();
  return selection_from_value(params, value, std::move(prp_key));
}

IndexSelection prp_select(const SchemeParams& params, ByteView prp_key,
                          ByteView message) {
  Scalar hashed = hash_to_scalar(kTagPrp, {prp_key, message});
  return selection_from_hash(params, hashed, Bytes(prp_key.begin(), prp_key.end()));
}

std::vector<G2Point> subkeys_at(const SessionKeyMaterial& keys,
                                const IndexSelection& selection) {
  std::vector<G2Point> out;
  out.reserve(selection.indices.size());
  for (uint32_t idx : selection.indices) out.push_back(keys.subkeys.at(idx));
  return out;
}

G2Point aggregate(const SchemeParams& params, std::span<const G2Point> subkeys) {
  if (subkeys.size() != params.symbols) {
    throw Error(ErrorCode::kInvalidParameters,
                "aggregate needs exactly " + std::to_string(params.symbols) +
                    " subkeys, got " + std::to_string(subkeys.size()));
  }
  G2Point acc;
  for (const G2Point& sk : subkeys) acc *= sk;
  return acc;
}

// --- signing ---------------------------------------------------------------

namespace detail {

Scalar default_challenge(ByteView message, const G2Point& x) {
  auto encoded = x.serialize();
  return hash_to_scalar(kTagHash, {message, ByteView(encoded)});
}

FullSignature sign_full_with(const PublicKey& pk, const SchemeParams& params,
                             std::span<const G2Point> subkeys,
                             const IndexSelection& selection,
                             const DualPoint& aux, ByteView message,
                             RandomSource& rng, const ChallengeHash& challenge) {
  const G2Point combined = aggregate(params, subkeys);
  const Scalar n = Scalar::from_u64(params.symbols);
  for (;;) {
    Scalar s = random_scalar(rng);
    G2Point x = exp(pk.secret_base, n * s);
    Scalar u = challenge(message, x);
    Scalar s_plus_u = s + u;
    // s + u == 0 would give y = z = 1.
    if (s_plus_u.is_zero()) continue;
    FullSignature sig{x, exp(aux, n * s_plus_u), exp(combined, s_plus_u),
                      selection.prp_key};
    wipe(s);
    return sig;
  }
}

VerifyResult verify_full_with(const PublicKey& pk, const SchemeParams& params,
                              uint64_t session, const FullSignature& sig,
                              ByteView message, const ChallengeHash& challenge) {
  if (session > params.sessions) {
    return {VerifyStatus::kSessionOutOfRange, "session out of range"};
  }
  const Scalar n = Scalar::from_u64(params.symbols);
  Scalar u = challenge(message, sig.x);
  IndexSelection sel = prp_select(params, sig.prp_key, message);
  Scalar k = encode_index(params, session, sel.value);

  G2Point w = exp(pk.secret_base, n * u) * sig.x;
  if (w.is_identity()) return {VerifyStatus::kDegenerate, "g2^(n u) * x == 1"};
  if (!is_consistent(sig.y)) {
    return {VerifyStatus::kInconsistentDual, "y halves disagree"};
  }
  // e(g, z) == e(g1, g2^{n u} x y^k) * e(y, h)
  bool ok = pairing_product({{pk.generator.first.inverse(), sig.z},
                             {pk.master_public.first, w * exp(sig.y.second, k)},
                             {sig.y.first, pk.index_offset.second}})
                .is_one();
  if (!ok) return {VerifyStatus::kEquationFailed, "pairing equation failed"};
  return {VerifyStatus::kValid, {}};
}

}  // namespace detail

FullSignature sign_full(const PublicKey& pk, const SchemeParams& params,
                        std::span<const G2Point> subkeys,
                        const IndexSelection& selection, const DualPoint& aux,
                        ByteView message, RandomSource& rng) {
  return detail::sign_full_with(pk, params, subkeys, selection, aux, message,
                                rng, detail::default_challenge);
}

CompressedSignature sign_compressed(const SchemeParams& params,
                                    std::span<const G2Point> subkeys,
                                    const IndexSelection& selection,
                                    const DualPoint& aux) {
  return {aux.first, aggregate(params, subkeys), selection.prp_key};
}

// --- verification ----------------------------------------------------------

std::string_view verify_status_name(VerifyStatus status) {
  switch (status) {
    case VerifyStatus::kValid:
      return "valid";
    case VerifyStatus::kEquationFailed:
      return "equation failed";
    case VerifyStatus::kDegenerate:
      return "degenerate (s + u == 0)";
    case VerifyStatus::kInconsistentDual:
      return "inconsistent dual element";
    case VerifyStatus::kMalformed:
      return "malformed";
    case VerifyStatus::kSessionOutOfRange:
      return "session out of range";
    case VerifyStatus::kUnknownNonce:
      return "unknown nonce";
    case VerifyStatus::kReplayedNonce:
      return "nonce already used";
    case VerifyStatus::kUntrustedMeasurement:
      return "untrusted measurement";
  }
  return "unknown";
}

VerifyResult verify_full(const PublicKey& pk, const SchemeParams& params,
                         uint64_t session, const FullSignature& sig,
                         ByteView message) {
  return detail::verify_full_with(pk, params, session, sig, message,
                                  detail::default_challenge);
}

VerifyResult verify_compressed_at(const PublicKey& pk,
                                  const SchemeParams& params, uint64_t session,
                                  const G1Point& y, const G2Point& z,
                                  const IndexSelection& selection) {
  if (session > params.sessions) {
    return {VerifyStatus::kSessionOutOfRange, "session out of range"};
  }
  const Scalar n = Scalar::from_u64(params.symbols);
  Scalar k = encode_index(params, session, selection.value);
  G2Point index_n = exp(index_point_g2(pk, k), n);
  // e(g, z) == e(g1, g2^n) * e(y, (g1^k h)^n)
  bool ok = pairing_product({{pk.generator.first.inverse(), z},
                             {pk.master_public.first, exp(pk.secret_base, n)},
                             {y, index_n}})
                .is_one();
  if (!ok) return {VerifyStatus::kEquationFailed, "pairing equation failed"};
  return {VerifyStatus::kValid, {}};
}

VerifyResult verify_compressed(const PublicKey& pk, const SchemeParams& params,
                               uint64_t session, const CompressedSignature& sig,
                               ByteView message) {
  if (session > params.sessions) {
    return {VerifyStatus::kSessionOutOfRange, "session out of range"};
  }
  IndexSelection sel = prp_select(params, sig.prp_key, message);
  return verify_compressed_at(pk, params, session, sig.y, sig.z, sel);
}

VerifyResult verify(const PublicKey& pk, const SchemeParams& params,
                    uint64_t session, const Signature& sig, ByteView message) {
  return std::visit(
      [&](const auto& s) -> VerifyResult {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, FullSignature>) {
          return verify_full(pk, params, session, s, message);
        } else {
          return verify_compressed(pk, params, session, s, message);
        }
      },
      sig);
}

}  // namespace otsske

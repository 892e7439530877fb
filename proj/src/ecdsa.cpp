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


// The low-level EC_KEY interface is deprecated in OpenSSL 3 but is the only
// one that takes a caller-chosen nonce (ECDSA_do_sign_ex).
#define OPENSSL_SUPPRESS_DEPRECATED

#include "otsske/ecdsa.hpp"

#include <memory>
#include <optional>

#include <openssl/bn.h>
#include <openssl/crypto.h>
#include <openssl/ec.h>
#include <openssl/ecdsa.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/obj_mac.h>
#include <openssl/sha.h>

#include "otsske/error.hpp"

namespace otsske::ecdsa {

namespace {

struct BnFree {
  void operator()(BIGNUM* p) const { BN_clear_free(p); }
};
struct BnCtxFree {
  void operator()(BN_CTX* p) const { BN_CTX_free(p); }
};
struct PointFree {
  void operator()(EC_POINT* p) const { EC_POINT_clear_free(p); }
};
struct KeyFree {
  void operator()(EC_KEY* p) const { EC_KEY_free(p); }
};
struct SigFree {
  void operator()(ECDSA_SIG* p) const { ECDSA_SIG_free(p); }
};

using Bn = std::unique_ptr<BIGNUM, BnFree>;
using BnCtx = std::unique_ptr<BN_CTX, BnCtxFree>;
using EcPoint = std::unique_ptr<EC_POINT, PointFree>;
using EcKey = std::unique_ptr<EC_KEY, KeyFree>;
using EcdsaSig = std::unique_ptr<ECDSA_SIG, SigFree>;

[[noreturn]] void openssl_failure(const char* what) {
  throw Error(ErrorCode::kCryptoFailure,
              std::string("OpenSSL failure in ") + what);
}

template <class T>
T check(T p, const char* what) {
  if (!p) openssl_failure(what);
  return p;
}

void check_ok(int rc, const char* what) {
  if (rc != 1) openssl_failure(what);
}

const EC_GROUP* group() {
  static const EC_GROUP* g =
      check(EC_GROUP_new_by_curve_name(NID_X9_62_prime256v1), "group");
  return g;
}

const BIGNUM* order() { return EC_GROUP_get0_order(group()); }

Bn bn_from(ByteView be) {
  return Bn(check(BN_bin2bn(be.data(), static_cast<int>(be.size()), nullptr),
                  "BN_bin2bn"));
}

template <size_t N>
std::array<uint8_t, N> bn_to(const BIGNUM* v) {
  std::array<uint8_t, N> out{};
  check_ok(BN_bn2binpad(v, out.data(), N) == static_cast<int>(N) ? 1 : 0,
           "BN_bn2binpad");
  return out;
}

bool in_scalar_range(const BIGNUM* v) {
  return !BN_is_zero(v) && !BN_is_negative(v) && BN_cmp(v, order()) < 0;
}

std::array<uint8_t, 32> digest(ByteView message) {
  std::array<uint8_t, 32> h;
  SHA256(message.data(), message.size(), h.data());
  return h;
}

EcPoint public_point(const BIGNUM* d, BN_CTX* ctx) {
  EcPoint p(check(EC_POINT_new(group()), "EC_POINT_new"));
  check_ok(EC_POINT_mul(group(), p.get(), d, nullptr, nullptr, ctx),
           "EC_POINT_mul");
  return p;
}

EcKey private_key(const PrivateKey& key, BN_CTX* ctx) {
  EcKey k(check(EC_KEY_new(), "EC_KEY_new"));
  check_ok(EC_KEY_set_group(k.get(), group()), "EC_KEY_set_group");
  Bn d = bn_from(key.scalar);
  check_ok(EC_KEY_set_private_key(k.get(), d.get()), "set_private_key");
  EcPoint pub = public_point(d.get(), ctx);
  check_ok(EC_KEY_set_public_key(k.get(), pub.get()), "set_public_key");
  return k;
}

// Signs with the given nonce k. Returns nullopt if k leads to r == 0 or
// s == 0, in which case the caller picks another nonce.
std::optional<Signature> sign_with_nonce(const PrivateKey& key,
                                         const std::array<uint8_t, 32>& h,
                                         const BIGNUM* k) {
  BnCtx ctx(check(BN_CTX_new(), "BN_CTX_new"));
  EcKey eckey = private_key(key, ctx.get());

  EcPoint kg = public_point(k, ctx.get());
  Bn x(check(BN_new(), "BN_new"));
  check_ok(EC_POINT_get_affine_coordinates(group(), kg.get(), x.get(), nullptr,
                                           ctx.get()),
           "get_affine_coordinates");
  Bn r(check(BN_new(), "BN_new"));
  check_ok(BN_nnmod(r.get(), x.get(), order(), ctx.get()), "BN_nnmod");
  if (BN_is_zero(r.get())) return std::nullopt;
  Bn kinv(check(BN_mod_inverse(nullptr, k, order(), ctx.get()),
                "BN_mod_inverse"));

  EcdsaSig sig(ECDSA_do_sign_ex(h.data(), static_cast<int>(h.size()),
                                kinv.get(), r.get(), eckey.get()));
  if (!sig) return std::nullopt;
  const BIGNUM* sr = nullptr;
  const BIGNUM* ss = nullptr;
  ECDSA_SIG_get0(sig.get(), &sr, &ss);
  Signature out;
  auto rb = bn_to<32>(sr);
  auto sb = bn_to<32>(ss);
  std::copy(rb.begin(), rb.end(), out.begin());
  std::copy(sb.begin(), sb.end(), out.begin() + 32);
  return out;
}

std::array<uint8_t, 32> hmac(ByteView key, std::initializer_list<ByteView> parts) {
  Bytes data;
  for (ByteView p : parts) data.insert(data.end(), p.begin(), p.end());
  std::array<uint8_t, 32> out;
  unsigned int len = 0;
  check(HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
             data.data(), data.size(), out.data(), &len),
        "HMAC");
  return out;
}

}  // namespace

KeyPair keygen(RandomSource& rng) {
  std::array<uint8_t, kPrivateKeySize> buf;
  for (;;) {
    rng.fill(buf);
    Bn d = bn_from(buf);
    if (in_scalar_range(d.get())) break;
  }
  KeyPair kp = keypair_from_private(buf);
  OPENSSL_cleanse(buf.data(), buf.size());
  return kp;
}

KeyPair keypair_from_private(ByteView scalar) {
  if (scalar.size() != kPrivateKeySize) {
    throw Error(ErrorCode::kInvalidEncoding, "private key must be 32 bytes");
  }
  Bn d = bn_from(scalar);
  if (!in_scalar_range(d.get())) {
    throw Error(ErrorCode::kInvalidEncoding, "private key out of range");
  }
  BnCtx ctx(check(BN_CTX_new(), "BN_CTX_new"));
  EcPoint pub = public_point(d.get(), ctx.get());
  KeyPair kp;
  std::copy(scalar.begin(), scalar.end(), kp.private_key.scalar.begin());
  size_t len = EC_POINT_point2oct(group(), pub.get(),
                                  POINT_CONVERSION_UNCOMPRESSED,
                                  kp.public_key.point.data(), kPublicKeySize,
                                  ctx.get());
  check_ok(len == kPublicKeySize ? 1 : 0, "EC_POINT_point2oct");
  return kp;
}

Signature sign(const PrivateKey& key, ByteView message, RandomSource& rng) {
  const auto h = digest(message);
  std::array<uint8_t, 32> buf;
  for (;;) {
    rng.fill(buf);
    Bn k = bn_from(buf);
    if (!in_scalar_range(k.get())) continue;
    auto sig = sign_with_nonce(key, h, k.get());
    OPENSSL_cleanse(buf.data(), buf.size());
    if (sig) return *sig;
  }
}

std::array<uint8_t, 32> rfc6979_nonce(const PrivateKey& key,
                                      ByteView message) {
  // qlen == hlen == 256, so bits2int is the identity on 32-byte strings and
  // bits2octets is a single conditional subtraction of q.
  BnCtx ctx(check(BN_CTX_new(), "BN_CTX_new"));
  const auto h = digest(message);
  Bn h_int = bn_from(h);
  Bn h_red(check(BN_new(), "BN_new"));
  check_ok(BN_nnmod(h_red.get(), h_int.get(), order(), ctx.get()), "BN_nnmod");
  const auto h_oct = bn_to<32>(h_red.get());

  const uint8_t zero = 0x00;
  const uint8_t one = 0x01;
  std::array<uint8_t, 32> v;
  std::array<uint8_t, 32> k;
  v.fill(0x01);
  k.fill(0x00);
  k = hmac(k, {v, ByteView(&zero, 1), key.scalar, h_oct});
  v = hmac(k, {v});
  k = hmac(k, {v, ByteView(&one, 1), key.scalar, h_oct});
  v = hmac(k, {v});
  for (;;) {
    v = hmac(k, {v});
    Bn cand = bn_from(v);
    if (in_scalar_range(cand.get())) {
      OPENSSL_cleanse(k.data(), k.size());
      return v;
    }
    k = hmac(k, {v, ByteView(&zero, 1)});
    v = hmac(k, {v});
  }
}

Signature sign_deterministic(const PrivateKey& key, ByteView message) {
  const auto h = digest(message);
  auto nonce = rfc6979_nonce(key, message);
  Bn k = bn_from(nonce);
  OPENSSL_cleanse(nonce.data(), nonce.size());
  auto sig = sign_with_nonce(key, h, k.get());
  // r == 0 or s == 0 for the RFC 6979 nonce has negligible probability.
  if (!sig) openssl_failure("deterministic signing");
  return *sig;
}

bool verify(const PublicKey& key, ByteView message, ByteView signature) {
  if (signature.size() != kSignatureSize) {
    throw Error(ErrorCode::kInvalidEncoding,
                "ECDSA signature must be 64 bytes, got " +
                    std::to_string(signature.size()));
  }
  BnCtx ctx(check(BN_CTX_new(), "BN_CTX_new"));
  EcPoint pub(check(EC_POINT_new(group()), "EC_POINT_new"));
  if (EC_POINT_oct2point(group(), pub.get(), key.point.data(), kPublicKeySize,
                         ctx.get()) != 1 ||
      EC_POINT_is_at_infinity(group(), pub.get())) {
    throw Error(ErrorCode::kInvalidEncoding, "invalid ECDSA public key");
  }
  EcKey eckey(check(EC_KEY_new(), "EC_KEY_new"));
  check_ok(EC_KEY_set_group(eckey.get(), group()), "EC_KEY_set_group");
  check_ok(EC_KEY_set_public_key(eckey.get(), pub.get()), "set_public_key");

  Bn r = bn_from(signature.first(32));
  Bn s = bn_from(signature.subspan(32));
  if (!in_scalar_range(r.get()) || !in_scalar_range(s.get())) return false;
  EcdsaSig sig(check(ECDSA_SIG_new(), "ECDSA_SIG_new"));
  check_ok(ECDSA_SIG_set0(sig.get(), r.release(), s.release()),
           "ECDSA_SIG_set0");
  const auto h = digest(message);
  return ECDSA_do_verify(h.data(), static_cast<int>(h.size()), sig.get(),
                         eckey.get()) == 1;
}

}  // namespace otsske::ecdsa

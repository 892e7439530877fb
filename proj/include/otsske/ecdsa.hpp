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


// ECDSA over NIST P-256 with SHA-256, the comparison baseline. Curve
// arithmetic is OpenSSL's; nonces are chosen here so that seeded runs are
// reproducible.

#ifndef OTSSKE_ECDSA_HPP_
#define OTSSKE_ECDSA_HPP_

#include <array>
#include <cstdint>

#include "otsske/bytes.hpp"
#include "otsske/random.hpp"

namespace otsske::ecdsa {

inline constexpr size_t kPrivateKeySize = 32;
inline constexpr size_t kPublicKeySize = 65;  // SEC1 uncompressed
inline constexpr size_t kSignatureSize = 64;  // r || s, big-endian

struct PrivateKey {
  std::array<uint8_t, kPrivateKeySize> scalar{};
};

struct PublicKey {
  std::array<uint8_t, kPublicKeySize> point{};

  friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

struct KeyPair {
  PrivateKey private_key;
  PublicKey public_key;
};

using Signature = std::array<uint8_t, kSignatureSize>;

// Private scalar uniform in [1, order).
KeyPair keygen(RandomSource& rng);
// Throws kInvalidEncoding unless |scalar| is 32 bytes in [1, order).
KeyPair keypair_from_private(ByteView scalar);

// Nonce drawn from |rng|.
Signature sign(const PrivateKey& key, ByteView message, RandomSource& rng);
// RFC 6979 nonce: same (key, message) always gives the same signature.
Signature sign_deterministic(const PrivateKey& key, ByteView message);

// False for a well-formed signature that does not verify. Throws
// kInvalidEncoding for a public key that is not a valid curve point or a
// signature that is not 64 bytes.
bool verify(const PublicKey& key, ByteView message, ByteView signature);

// The RFC 6979 nonce for SHA-256, exposed for known-answer tests.
std::array<uint8_t, 32> rfc6979_nonce(const PrivateKey& key, ByteView message);

}  // namespace otsske::ecdsa

#endif  // OTSSKE_ECDSA_HPP_

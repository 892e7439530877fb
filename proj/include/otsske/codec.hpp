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

// Byte formats for keys and signatures: a sequence of fields in declaration
// order, integers as 8-byte big-endian, group elements in canonical
// compressed form behind an 8-byte length prefix. Signatures start with a
// one-byte variant tag.

#ifndef OTSSKE_CODEC_HPP_
#define OTSSKE_CODEC_HPP_

#include <cstdint>
#include <vector>

#include "otsske/bytes.hpp"
#include "otsske/scheme.hpp"

namespace otsske {

inline constexpr uint8_t kFullSignatureTag = 0x01;
inline constexpr uint8_t kCompressedSignatureTag = 0x02;

// Decoders throw otsske::Error (kTruncated, kInvalidLength,
// kInvalidEncoding, kNotInSubgroup, kInvalidParameters) and reject
// trailing bytes.

Bytes encode_params(const SchemeParams& params);
SchemeParams decode_params(ByteView in);

Bytes encode_public_key(const PublicKey& pk);
PublicKey decode_public_key(ByteView in);

Bytes encode_signature(const Signature& sig);
Signature decode_signature(ByteView in);

// Transients are never serialized.
Bytes encode_session_keys(const SessionKeyMaterial& keys);
SessionKeyMaterial decode_session_keys(ByteView in);

Bytes encode_key_store(const std::vector<SessionKeyMaterial>& sessions);
std::vector<SessionKeyMaterial> decode_key_store(ByteView in);

// Decodes |encoded| and verifies it; decoding failures come back as
// VerifyStatus::kMalformed with the decoder's message.
VerifyResult verify_encoded(const PublicKey& pk, const SchemeParams& params,
                            uint64_t session, ByteView encoded,
                            ByteView message);

}  // namespace otsske

#endif  // OTSSKE_CODEC_HPP_

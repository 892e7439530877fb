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

#include <string>

#include "otsske/error.hpp"

namespace otsske {

namespace {

// Upper bound on a prp key; real keys are 16 or 32 bytes.
constexpr size_t kMaxPrpKey = 1024;
constexpr uint64_t kMaxSubkeys = 1u << 20;

template <class P>
void put_point(ByteWriter& w, const P& p) {
  auto enc = p.serialize();
  w.put_prefixed(enc);
}

template <class P>
P get_point(ByteReader& r) {
  return P::deserialize(r.get_prefixed(P::kEncodedSize));
}

uint32_t get_u32_field(ByteReader& r, const char* what) {
  uint64_t v = r.get_u64();
  if (v > UINT32_MAX) {
    throw Error(ErrorCode::kInvalidParameters, std::string(what) + " too large");
  }
  return static_cast<uint32_t>(v);
}

SchemeParams read_params(ByteReader& r) {
  SchemeParams p;
  p.sessions = r.get_u64();
  p.symbols = get_u32_field(r, "symbol count");
  p.radix = get_u32_field(r, "radix");
  p.security_level = get_u32_field(r, "security level");
  p.validate();
  return p;
}

SessionKeyMaterial read_session(ByteReader& r) {
  SessionKeyMaterial keys;
  keys.session = r.get_u64();
  keys.symbols = get_u32_field(r, "symbol count");
  keys.radix = get_u32_field(r, "radix");
  uint64_t count = static_cast<uint64_t>(keys.symbols) * keys.radix;
  if (count == 0 || count > kMaxSubkeys) {
    throw Error(ErrorCode::kInvalidParameters, "bad subkey matrix shape");
  }
  keys.subkeys.reserve(count);
  for (uint64_t i = 0; i < count; ++i) {
    keys.subkeys.push_back(get_point<G2Point>(r));
  }
  keys.aux = get_point<DualPoint>(r);
  return keys;
}

void write_session(ByteWriter& w, const SessionKeyMaterial& keys) {
  w.put_u64(keys.session).put_u64(keys.symbols).put_u64(keys.radix);
  for (const G2Point& sk : keys.subkeys) put_point(w, sk);
  put_point(w, keys.aux);
}

}  // namespace

Bytes encode_params(const SchemeParams& params) {
  ByteWriter w;
  w.put_u64(params.sessions)
      .put_u64(params.symbols)
      .put_u64(params.radix)
      .put_u64(params.security_level);
  return w.take();
}

SchemeParams decode_params(ByteView in) {
  ByteReader r(in);
  SchemeParams p = read_params(r);
  r.expect_end();
  return p;
}

Bytes encode_public_key(const PublicKey& pk) {
  ByteWriter w;
  w.put_u64(pk.group.security_level);
  put_point(w, pk.generator);
  put_point(w, pk.master_public);
  put_point(w, pk.secret_base);
  put_point(w, pk.index_offset);
  return w.take();
}

PublicKey decode_public_key(ByteView in) {
  ByteReader r(in);
  PublicKey pk;
  uint64_t level = r.get_u64();
  if (level > UINT32_MAX) {
    throw Error(ErrorCode::kUnsupportedSecurityLevel, "bad security level");
  }
  pk.group = setup(static_cast<unsigned>(level));
  pk.generator = get_point<DualPoint>(r);
  pk.master_public = get_point<DualPoint>(r);
  pk.secret_base = get_point<G2Point>(r);
  pk.index_offset = get_point<DualPoint>(r);
  r.expect_end();
  if (!(pk.generator == DualPoint::generator())) {
    throw Error(ErrorCode::kInvalidEncoding, "public key generator mismatch");
  }
  return pk;
}

Bytes encode_signature(const Signature& sig) {
  ByteWriter w;
  if (const auto* full = std::get_if<FullSignature>(&sig)) {
    w.put_u8(kFullSignatureTag);
    put_point(w, full->x);
    put_point(w, full->y);
    put_point(w, full->z);
    w.put_prefixed(full->prp_key);
  } else {
    const auto& c = std::get<CompressedSignature>(sig);
    w.put_u8(kCompressedSignatureTag);
    put_point(w, c.y);
    put_point(w, c.z);
    w.put_prefixed(c.prp_key);
  }
  return w.take();
}

Signature decode_signature(ByteView in) {
  ByteReader r(in);
  uint8_t tag = r.get_u8();
  Signature out;
  if (tag == kFullSignatureTag) {
    FullSignature s;
    s.x = get_point<G2Point>(r);
    s.y = get_point<DualPoint>(r);
    s.z = get_point<G2Point>(r);
    ByteView key = r.get_prefixed(kMaxPrpKey);
    s.prp_key.assign(key.begin(), key.end());
    out = std::move(s);
  } else if (tag == kCompressedSignatureTag) {
    CompressedSignature s;
    s.y = get_point<G1Point>(r);
    s.z = get_point<G2Point>(r);
    ByteView key = r.get_prefixed(kMaxPrpKey);
    s.prp_key.assign(key.begin(), key.end());
    out = std::move(s);
  } else {
    throw Error(ErrorCode::kInvalidEncoding,
                "unknown signature tag " + std::to_string(tag));
  }
  r.expect_end();
  return out;
}

Bytes encode_session_keys(const SessionKeyMaterial& keys) {
  ByteWriter w;
  write_session(w, keys);
  return w.take();
}

SessionKeyMaterial decode_session_keys(ByteView in) {
  ByteReader r(in);
  SessionKeyMaterial keys = read_session(r);
  r.expect_end();
  return keys;
}

Bytes encode_key_store(const std::vector<SessionKeyMaterial>& sessions) {
  ByteWriter w;
  w.put_u64(sessions.size());
  for (const auto& s : sessions) write_session(w, s);
  return w.take();
}

std::vector<SessionKeyMaterial> decode_key_store(ByteView in) {
  ByteReader r(in);
  uint64_t count = r.get_u64();
  // Each session needs far more than one byte; cheap guard before reserving.
  if (count > r.remaining()) {
    throw Error(ErrorCode::kInvalidLength, "session count exceeds input size");
  }
  std::vector<SessionKeyMaterial> out;
  out.reserve(count);
  for (uint64_t i = 0; i < count; ++i) out.push_back(read_session(r));
  r.expect_end();
  return out;
}

VerifyResult verify_encoded(const PublicKey& pk, const SchemeParams& params,
                            uint64_t session, ByteView encoded,
                            ByteView message) {
  Signature sig;
  try {
    sig = decode_signature(encoded);
  } catch (const Error& e) {
    return {VerifyStatus::kMalformed, e.what()};
  }
  return verify(pk, params, session, sig, message);
}

}  // namespace otsske

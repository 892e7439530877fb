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


#include "otsske/ra.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <sstream>
#include <thread>

#include <openssl/crypto.h>

#include "otsske/error.hpp"

namespace otsske::ra {

namespace {

constexpr std::string_view kTagMessage = "OTSSKE/MSG";
constexpr std::string_view kTagNonce = "OTSSKE/NONCE";
// Bound on R inside a quote or request.
constexpr size_t kMaxResultSize = size_t{1} << 20;

template <size_t N>
std::array<uint8_t, N> read_array(ByteReader& r) {
  ByteView v = r.get_raw(N);
  std::array<uint8_t, N> out;
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

}  // namespace

Measurement measure(ByteView descriptor) {
  return {tagged_digest(kTagMeasurement, {descriptor})};
}

Digest attestation_message(const Measurement& raenc, const Measurement& app,
                           ByteView result) {
  return tagged_digest(kTagMessage, {raenc.digest, app.digest, result});
}

Digest bind_nonce(const Nonce& nonce, const Digest& message) {
  return tagged_digest(kTagNonce, {nonce, message});
}

IndexSelection eot_select(const SchemeParams& params, ByteView x,
                          const Measurement& caller) {
  Scalar hashed = hash_to_scalar(kTagEot, {x, caller.digest});
  return selection_from_hash(params, hashed, Bytes(x.begin(), x.end()));
}

Bytes encode_quote(const Quote& quote) {
  ByteWriter w;
  w.put_u8(kQuoteVersion)
      .put_u64(quote.ctr)
      .put_raw(quote.raenc.digest)
      .put_raw(quote.app.digest)
      .put_prefixed(quote.result)
      .put_raw(quote.y.serialize())
      .put_raw(quote.z.serialize());
  return w.take();
}

Quote decode_quote(ByteView in) {
  ByteReader r(in);
  if (r.get_u8() != kQuoteVersion) {
    throw Error(ErrorCode::kInvalidEncoding, "unknown quote version");
  }
  Quote q;
  q.ctr = r.get_u64();
  q.raenc.digest = read_array<32>(r);
  q.app.digest = read_array<32>(r);
  ByteView result = r.get_prefixed(kMaxResultSize);
  q.result.assign(result.begin(), result.end());
  q.y = G1Point::deserialize(r.get_raw(G1Point::kEncodedSize));
  q.z = G2Point::deserialize(r.get_raw(G2Point::kEncodedSize));
  r.expect_end();
  return q;
}

Bytes encode_request(const AttestationRequest& request) {
  ByteWriter w;
  w.put_u8(kRequestVersion)
      .put_raw(request.nonce)
      .put_raw(request.app.digest)
      .put_prefixed(request.result);
  return w.take();
}

AttestationRequest decode_request(ByteView in) {
  ByteReader r(in);
  if (r.get_u8() != kRequestVersion) {
    throw Error(ErrorCode::kInvalidEncoding, "unknown request version");
  }
  AttestationRequest req;
  req.nonce = read_array<kNonceSize>(r);
  req.app.digest = read_array<32>(r);
  ByteView result = r.get_prefixed(kMaxResultSize);
  req.result.assign(result.begin(), result.end());
  r.expect_end();
  return req;
}

// --- AdversaryLog ----------------------------------------------------------

void AdversaryLog::record(LoggedAnnouncement a) {
  std::lock_guard lock(mu_);
  announcements_.push_back(std::move(a));
}

void AdversaryLog::record(LoggedRead r) {
  std::lock_guard lock(mu_);
  reads_.push_back(std::move(r));
}

void AdversaryLog::record(LoggedExchange e) {
  std::lock_guard lock(mu_);
  exchanges_.push_back(std::move(e));
}

std::vector<LoggedAnnouncement> AdversaryLog::announcements() const {
  std::lock_guard lock(mu_);
  return announcements_;
}

std::vector<LoggedRead> AdversaryLog::reads() const {
  std::lock_guard lock(mu_);
  return reads_;
}

std::vector<LoggedExchange> AdversaryLog::exchanges() const {
  std::lock_guard lock(mu_);
  return exchanges_;
}

bool AdversaryLog::empty() const {
  std::lock_guard lock(mu_);
  return announcements_.empty() && reads_.empty() && exchanges_.empty();
}

// --- ObliviousBuffer -------------------------------------------------------

ObliviousBuffer::ObliviousBuffer(const SchemeParams& params, uint64_t session,
                                 std::span<const G2Point> subkeys)
    : params_(params), session_(session) {
  if (subkeys.size() != params.subkeys_per_session()) {
    throw Error(ErrorCode::kInvalidParameters,
                "buffer expects " +
                    std::to_string(params.subkeys_per_session()) +
                    " subkeys, got " + std::to_string(subkeys.size()));
  }
  slots_.reserve(subkeys.size());
  for (const G2Point& sk : subkeys) slots_.emplace_back(sk.serialize());
}

ObliviousBuffer::ReadResult ObliviousBuffer::read(ByteView x,
                                                  const Measurement& caller) {
  std::lock_guard lock(mu_);
  if (consumed_) {
    throw Error(ErrorCode::kSessionConsumed,
                "session " + std::to_string(session_) + " already read");
  }
  consumed_ = true;

  auto wipe = [](Slot& slot) {
    if (slot) OPENSSL_cleanse(slot->data(), slot->size());
    slot.reset();
  };

  ReadResult out;
  out.selection = eot_select(params_, x, caller);
  std::vector<bool> keep(slots_.size(), false);
  for (uint32_t idx : out.selection.indices) keep[idx] = true;

  try {
    out.subkeys.reserve(out.selection.indices.size());
    for (uint32_t idx : out.selection.indices) {
      const Slot& slot = slots_[idx];
      if (!slot) {
        throw Error(ErrorCode::kBufferCorrupted,
                    "slot " + std::to_string(idx) + " was already erased");
      }
      out.subkeys.push_back(G2Point::deserialize(*slot));
    }
  } catch (const Error& e) {
    // Fail closed: nothing of this session survives a corrupted read.
    for (Slot& slot : slots_) wipe(slot);
    if (e.code() == ErrorCode::kBufferCorrupted) throw;
    throw Error(ErrorCode::kBufferCorrupted, e.what());
  }

  for (size_t i = 0; i < slots_.size(); ++i) {
    if (!keep[i]) wipe(slots_[i]);
  }
  return out;
}

bool ObliviousBuffer::consumed() const {
  std::lock_guard lock(mu_);
  return consumed_;
}

ObliviousBuffer::Slot ObliviousBuffer::slot(size_t index) const {
  std::lock_guard lock(mu_);
  return slots_.at(index);
}

void ObliviousBuffer::inject_fault_erase(size_t index) {
  std::lock_guard lock(mu_);
  Slot& slot = slots_.at(index);
  if (slot) OPENSSL_cleanse(slot->data(), slot->size());
  slot.reset();
}

ObliviousBuffer::ReadResult eotmem_read(ObliviousBuffer& buffer, ByteView x,
                                        const Measurement& caller,
                                        AdversaryLog* log) {
  ObliviousBuffer::ReadResult r = buffer.read(x, caller);
  if (log != nullptr) {
    log->record(LoggedRead{buffer.session(), Bytes(x.begin(), x.end()), caller,
                           r.selection.indices, r.subkeys});
  }
  return r;
}

// --- CoProcessor -----------------------------------------------------------

CoProcessor::CoProcessor(const SchemeParams& params, RandomSource& rng,
                         AdversaryLog* log)
    : CoProcessor(params, rng, log, Options{}) {}

CoProcessor::CoProcessor(const SchemeParams& params, RandomSource& rng,
                         AdversaryLog* log, Options options)
    : params_(params), rng_(rng), log_(log), options_(options) {
  params_.validate();
  if (options_.queue_depth == 0) {
    throw Error(ErrorCode::kInvalidParameters, "queue depth must be >= 1");
  }
  keys_ = keygen_setup(params_, rng_);
}

uint64_t CoProcessor::counter() const {
  std::lock_guard lock(mu_);
  return ctr_;
}

size_t CoProcessor::pending() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

uint64_t CoProcessor::produce(uint64_t session) {
  SessionHandoff handoff;
  try {
    SessionKeyMaterial mat = gen_session(keys_.public_key, keys_.secret,
                                         params_, session, rng_,
                                         options_.key_mode);
    handoff.session = session;
    handoff.aux = mat.aux;
    handoff.buffer =
        std::make_shared<ObliviousBuffer>(params_, session, mat.subkeys);
    OPENSSL_cleanse(mat.subkeys.data(), mat.subkeys.size() * sizeof(G2Point));
  } catch (...) {
    std::lock_guard lock(mu_);
    --in_flight_;
    cv_.notify_all();
    throw;
  }
  if (log_ != nullptr) log_->record(LoggedAnnouncement{session, handoff.aux});
  {
    std::lock_guard lock(mu_);
    queue_.push_back(std::move(handoff));
    --in_flight_;
  }
  cv_.notify_all();
  return session;
}

uint64_t CoProcessor::generate_next() {
  std::lock_guard gen(gen_mu_);
  uint64_t session;
  {
    std::unique_lock lock(mu_);
    if (ctr_ >= params_.sessions) {
      throw Error(ErrorCode::kBudgetExhausted,
                  "all " + std::to_string(params_.sessions) +
                      " sessions have been generated");
    }
    cv_.wait(lock, [&] { return queue_.size() < options_.queue_depth; });
    session = ++ctr_;
    ++in_flight_;
  }
  return produce(session);
}

std::optional<uint64_t> CoProcessor::try_generate_next() {
  std::lock_guard gen(gen_mu_);
  uint64_t session;
  {
    std::lock_guard lock(mu_);
    if (ctr_ >= params_.sessions) {
      throw Error(ErrorCode::kBudgetExhausted,
                  "all " + std::to_string(params_.sessions) +
                      " sessions have been generated");
    }
    if (queue_.size() >= options_.queue_depth) return std::nullopt;
    session = ++ctr_;
    ++in_flight_;
  }
  return produce(session);
}

std::optional<SessionHandoff> CoProcessor::try_fetch() {
  std::optional<SessionHandoff> out;
  {
    std::lock_guard lock(mu_);
    if (queue_.empty()) return std::nullopt;
    out = std::move(queue_.front());
    queue_.pop_front();
  }
  cv_.notify_all();
  return out;
}

SessionHandoff CoProcessor::fetch() {
  SessionHandoff out;
  {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] {
      return !queue_.empty() || (ctr_ >= params_.sessions && in_flight_ == 0);
    });
    if (queue_.empty()) {
      throw Error(ErrorCode::kNoSessionAvailable,
                  "session budget exhausted and queue empty");
    }
    out = std::move(queue_.front());
    queue_.pop_front();
  }
  cv_.notify_all();
  return out;
}

// --- RaEnclave -------------------------------------------------------------

RaEnclave::RaEnclave(const SchemeParams& params, CoProcessor& coprocessor,
                     Measurement self, AdversaryLog* log)
    : params_(params), coprocessor_(coprocessor), self_(self), log_(log) {}

Quote RaEnclave::handle(const AttestationRequest& request,
                        bool wait_for_session) {
  SessionHandoff handoff;
  if (wait_for_session) {
    handoff = coprocessor_.fetch();
  } else {
    auto next = coprocessor_.try_fetch();
    if (!next) {
      throw Error(ErrorCode::kNoSessionAvailable, "no session key queued");
    }
    handoff = std::move(*next);
  }

  last_buffer_ = handoff.buffer;
  Digest message = attestation_message(self_, request.app, request.result);
  Digest x = bind_nonce(request.nonce, message);
  auto read = eotmem_read(*handoff.buffer, x, self_, log_);
  CompressedSignature sig =
      sign_compressed(params_, read.subkeys, read.selection, handoff.aux);

  Quote quote{handoff.session, sig.y, sig.z, self_, request.app,
              request.result};
  if (log_ != nullptr) log_->record(LoggedExchange{request, quote});
  return quote;
}

// --- user side -------------------------------------------------------------

AttestationRequest user_request(RandomSource& rng, const Measurement& app) {
  AttestationRequest req;
  rng.fill(req.nonce);
  req.app = app;
  return req;
}

VerifyResult user_verify(const PublicKey& pk, const SchemeParams& params,
                         const Quote& quote, const Nonce& nonce) {
  Digest message = attestation_message(quote.raenc, quote.app, quote.result);
  Digest x = bind_nonce(nonce, message);
  IndexSelection sel = eot_select(params, x, quote.raenc);
  return verify_compressed_at(pk, params, quote.ctr, quote.y, quote.z, sel);
}

RemoteVerifier::RemoteVerifier(PublicKey pk, SchemeParams params,
                               RandomSource& rng,
                               std::optional<Measurement> trusted_raenc)
    : pk_(std::move(pk)),
      params_(params),
      rng_(rng),
      trusted_raenc_(trusted_raenc) {}

AttestationRequest RemoteVerifier::request(const Measurement& app) {
  AttestationRequest req = user_request(rng_, app);
  outstanding_.insert(req.nonce);
  return req;
}

VerifyResult RemoteVerifier::verify(const Quote& quote, const Nonce& nonce) {
  if (used_.count(nonce) != 0) {
    return {VerifyStatus::kReplayedNonce, "nonce already accepted"};
  }
  if (outstanding_.count(nonce) == 0) {
    return {VerifyStatus::kUnknownNonce, "nonce was not issued here"};
  }
  if (trusted_raenc_ && quote.raenc != *trusted_raenc_) {
    return {VerifyStatus::kUntrustedMeasurement,
            "attestation enclave measurement not trusted"};
  }
  VerifyResult r = user_verify(pk_, params_, quote, nonce);
  if (r.ok()) {
    outstanding_.erase(nonce);
    used_.insert(nonce);
  }
  return r;
}

// --- demo ------------------------------------------------------------------

Measurement demo_enclave_measurement() {
  return measure(as_bytes("otsske ra-enclave v1"));
}

Measurement demo_app_measurement() {
  return measure(as_bytes("otsske demo-app v1"));
}

DemoResult run_demo(const DemoConfig& config) {
  const SchemeParams& params = config.params;
  params.validate();
  if (config.sessions == 0 || config.sessions > params.sessions) {
    throw Error(ErrorCode::kInvalidParameters,
                "demo sessions must be in [1, " +
                    std::to_string(params.sessions) + "]");
  }

  SeededRandom coproc_rng(config.seed, "coprocessor");
  SeededRandom user_rng(config.seed, "verifier");
  CoProcessor coproc(params, coproc_rng);
  RaEnclave enclave(params, coproc, demo_enclave_measurement());
  RemoteVerifier verifier(coproc.public_key(), params, user_rng,
                          enclave.measurement());

  std::exception_ptr producer_error;
  std::atomic<bool> producer_done{false};
  std::thread producer;
  if (config.threaded) {
    producer = std::thread([&] {
      try {
        for (uint64_t i = 0; i < config.sessions; ++i) coproc.generate_next();
      } catch (...) {
        producer_error = std::current_exception();
      }
      producer_done = true;
    });
  }

  DemoResult out;
  std::ostringstream transcript;
  try {
    for (uint64_t i = 1; i <= config.sessions; ++i) {
      if (!config.threaded) coproc.generate_next();
      AttestationRequest req = verifier.request(demo_app_measurement());
      req.result = to_bytes("demo result " + std::to_string(i));
      Quote quote = enclave.handle(req, config.threaded);
      bool verdict = verifier.verify(quote, req.nonce).ok();
      transcript << "REQ=" << to_hex(encode_request(req)) << "\n";
      transcript << "QUOTE=" << to_hex(encode_quote(quote)) << "\n";
      transcript << "VERDICT=" << (verdict ? "true" : "false") << "\n";
      out.verdicts.push_back(verdict);
    }
  } catch (...) {
    // Keep the queue moving so a producer blocked on a full queue can finish.
    while (producer.joinable() && !producer_done) {
      if (!coproc.try_fetch()) std::this_thread::yield();
    }
    if (producer.joinable()) producer.join();
    throw;
  }
  if (producer.joinable()) producer.join();
  if (producer_error) std::rethrow_exception(producer_error);
  out.transcript = transcript.str();
  return out;
}

}  // namespace otsske::ra

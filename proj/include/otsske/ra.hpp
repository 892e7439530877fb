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

// In-process simulation of the remote attestation flow:
//
//   CoProcessor     generates one session key at a time, publishes aux and
//                   loads the subkeys into an ObliviousBuffer.
//   ObliviousBuffer serves exactly one subset of subkeys, chosen by hashing
//                   the reader's input with the caller's measurement, and
//                   erases everything else.
//   RaEnclave       the combined application + attestation enclave; turns a
//                   request into a Quote carrying a compressed signature.
//   RemoteVerifier  issues nonces and checks quotes.
//
// Every value that crosses the processor boundary is appended to an
// AdversaryLog, which is what an observer of all digital state would see.

#ifndef OTSSKE_RA_HPP_
#define OTSSKE_RA_HPP_

#include <array>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "otsske/backend.hpp"
#include "otsske/bytes.hpp"
#include "otsske/random.hpp"
#include "otsske/scheme.hpp"

namespace otsske::ra {

inline constexpr uint8_t kQuoteVersion = 1;
inline constexpr uint8_t kRequestVersion = 1;
inline constexpr size_t kNonceSize = 16;

using Nonce = std::array<uint8_t, kNonceSize>;

struct Measurement {
  Digest digest{};

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

// SHA-256 of the enclave descriptor under the measurement tag.
Measurement measure(ByteView descriptor);

// M = Hash(MR_RAEnc, MR_app, R).
Digest attestation_message(const Measurement& raenc, const Measurement& app,
                           ByteView result);
// x = Hash(nonce, M).
Digest bind_nonce(const Nonce& nonce, const Digest& message);
// The subset the oblivious memory serves for input |x| and |caller|. The
// selection's prp_key is |x|.
IndexSelection eot_select(const SchemeParams& params, ByteView x,
                          const Measurement& caller);

struct AttestationRequest {
  Nonce nonce{};
  Bytes result;  // R, filled in by the application
  Measurement app;

  friend bool operator==(const AttestationRequest&,
                         const AttestationRequest&) = default;
};

struct Quote {
  uint64_t ctr = 0;
  G1Point y;  // aux of session ctr
  G2Point z;  // aggregated subkeys
  Measurement raenc;
  Measurement app;
  Bytes result;

  friend bool operator==(const Quote&, const Quote&) = default;
};

// [u8 version=1][u64 ctr][32B MR_RAEnc][32B MR_app][u64 len(R)][R]
// [48B y][96B z], big-endian.
Bytes encode_quote(const Quote& quote);
Quote decode_quote(ByteView in);

// [u8 version=1][16B nonce][32B MR_app][u64 len(R)][R]
Bytes encode_request(const AttestationRequest& request);
AttestationRequest decode_request(ByteView in);

// --- adversary view --------------------------------------------------------

struct LoggedAnnouncement {
  uint64_t session = 0;
  DualPoint aux;
};

struct LoggedRead {
  uint64_t session = 0;
  Bytes x;
  Measurement caller;
  std::vector<uint32_t> indices;
  std::vector<G2Point> subkeys;  // subkeys[k] sits at indices[k]
};

struct LoggedExchange {
  AttestationRequest request;
  Quote quote;
};

// Append-only, safe for concurrent appends. Accessors return copies.
class AdversaryLog {
 public:
  void record(LoggedAnnouncement a);
  void record(LoggedRead r);
  void record(LoggedExchange e);

  std::vector<LoggedAnnouncement> announcements() const;
  std::vector<LoggedRead> reads() const;
  std::vector<LoggedExchange> exchanges() const;
  bool empty() const;

 private:
  mutable std::mutex mu_;
  std::vector<LoggedAnnouncement> announcements_;
  std::vector<LoggedRead> reads_;
  std::vector<LoggedExchange> exchanges_;
};

// --- oblivious memory ------------------------------------------------------

class ObliviousBuffer {
 public:
  using Slot = std::optional<std::array<uint8_t, G2Point::kEncodedSize>>;

  struct ReadResult {
    IndexSelection selection;
    std::vector<G2Point> subkeys;
  };

  ObliviousBuffer(const SchemeParams& params, uint64_t session,
                  std::span<const G2Point> subkeys);

  // Serves the subset for (x, caller), erases every slot outside it and
  // marks the buffer consumed. Throws kSessionConsumed on a second read and
  // kBufferCorrupted if a selected slot is missing or undecodable.
  ReadResult read(ByteView x, const Measurement& caller);

  uint64_t session() const { return session_; }
  bool consumed() const;
  size_t slot_count() const { return slots_.size(); }
  // Raw memory inspection, for tests acting as an omniscient observer.
  Slot slot(size_t index) const;

  // Fault injection: erase one slot without consuming the buffer.
  void inject_fault_erase(size_t index);

 private:
  SchemeParams params_;
  uint64_t session_;
  mutable std::mutex mu_;
  std::vector<Slot> slots_;
  bool consumed_ = false;
};

// EOTMem: buffer read plus the adversary-visible record of what came out.
ObliviousBuffer::ReadResult eotmem_read(ObliviousBuffer& buffer, ByteView x,
                                        const Measurement& caller,
                                        AdversaryLog* log);

// --- key generation co-processor -------------------------------------------

struct SessionHandoff {
  uint64_t session = 0;
  DualPoint aux;
  std::shared_ptr<ObliviousBuffer> buffer;
};

class CoProcessor {
 public:
  struct Options {
    size_t queue_depth = 2;
    KeyMode key_mode = KeyMode::kProduction;
  };

  // Initialization mode: generates pk, sets ctr = 0.
  CoProcessor(const SchemeParams& params, RandomSource& rng,
              AdversaryLog* log = nullptr);
  CoProcessor(const SchemeParams& params, RandomSource& rng, AdversaryLog* log,
              Options options);

  const PublicKey& public_key() const { return keys_.public_key; }
  const SchemeParams& params() const { return params_; }
  uint64_t counter() const;
  size_t pending() const;

  // Runtime mode: ctr += 1, generate session ctr, queue it for the enclave.
  // Blocks while the queue is full. Throws kBudgetExhausted (state
  // unchanged) once ctr == N.
  uint64_t generate_next();
  // Non-blocking variant; nullopt when the queue is full.
  std::optional<uint64_t> try_generate_next();

  // Oldest queued session, or nullopt.
  std::optional<SessionHandoff> try_fetch();
  // Waits for a session; throws kNoSessionAvailable when none can arrive.
  SessionHandoff fetch();

 private:
  uint64_t produce(uint64_t session);

  SchemeParams params_;
  RandomSource& rng_;
  AdversaryLog* log_;
  Options options_;
  KeyPair keys_;

  std::mutex gen_mu_;  // serialises generators; rng_ is not thread-safe
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<SessionHandoff> queue_;
  uint64_t ctr_ = 0;
  size_t in_flight_ = 0;
};

// --- attestation enclave ---------------------------------------------------

class RaEnclave {
 public:
  RaEnclave(const SchemeParams& params, CoProcessor& coprocessor,
            Measurement self, AdversaryLog* log = nullptr);

  const Measurement& measurement() const { return self_; }

  // Consumes one session whether or not the quote is ever delivered.
  // Throws kNoSessionAvailable when no session is queued (or, with
  // |wait_for_session|, when none can arrive any more).
  Quote handle(const AttestationRequest& request, bool wait_for_session = false);

  // The buffer consumed by the last handle() call, for inspection in tests.
  std::shared_ptr<ObliviousBuffer> last_buffer() const { return last_buffer_; }

 private:
  SchemeParams params_;
  CoProcessor& coprocessor_;
  Measurement self_;
  AdversaryLog* log_;
  std::shared_ptr<ObliviousBuffer> last_buffer_;
};

// --- remote user -----------------------------------------------------------

AttestationRequest user_request(RandomSource& rng, const Measurement& app);

// Stateless check: rebuilds M and the selection from the quote and |nonce|
// and verifies the compressed signature for session quote.ctr.
VerifyResult user_verify(const PublicKey& pk, const SchemeParams& params,
                         const Quote& quote, const Nonce& nonce);

// Stateful verifier: accepts at most one quote per nonce it issued.
class RemoteVerifier {
 public:
  RemoteVerifier(PublicKey pk, SchemeParams params, RandomSource& rng,
                 std::optional<Measurement> trusted_raenc = std::nullopt);

  AttestationRequest request(const Measurement& app);
  VerifyResult verify(const Quote& quote, const Nonce& nonce);

 private:
  PublicKey pk_;
  SchemeParams params_;
  RandomSource& rng_;
  std::optional<Measurement> trusted_raenc_;
  std::set<Nonce> outstanding_;
  std::set<Nonce> used_;
};

// --- demo transcript -------------------------------------------------------

struct DemoConfig {
  SchemeParams params;
  uint64_t seed = 0;
  uint64_t sessions = 1;
  bool threaded = true;  // run the co-processor on its own thread
};

struct DemoResult {
  std::string transcript;  // REQ=/QUOTE=/VERDICT= lines
  std::vector<bool> verdicts;
};

// Throws kInvalidParameters when sessions is 0 or exceeds N.
DemoResult run_demo(const DemoConfig& config);

// Descriptors used by the demo and the game harness.
Measurement demo_enclave_measurement();
Measurement demo_app_measurement();

}  // namespace otsske::ra

#endif  // OTSSKE_RA_HPP_

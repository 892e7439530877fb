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


#include "otsske/adversary.hpp"

#include <algorithm>
#include <optional>
#include <type_traits>

#include "otsske/error.hpp"

namespace otsske::ra {

namespace {

template <class T>
std::optional<T> find_session(const std::vector<T>& items, uint64_t session) {
  for (const T& item : items) {
    if constexpr (std::is_same_v<T, LoggedExchange>) {
      if (item.quote.ctr == session) return item;
    } else {
      if (item.session == session) return item;
    }
  }
  return std::nullopt;
}

std::optional<LoggedExchange> other_exchange(
    const std::vector<LoggedExchange>& items, uint64_t session) {
  for (const LoggedExchange& e : items) {
    if (e.quote.ctr != session) return e;
  }
  return std::nullopt;
}

ForgeryOutcome judge(const PublicKey& pk, const SchemeParams& params,
                     const Quote& quote, const Nonce& nonce,
                     std::string* detail) {
  VerifyResult r = user_verify(pk, params, quote, nonce);
  *detail = std::string(verify_status_name(r.status));
  return r.ok() ? ForgeryOutcome::kVerified : ForgeryOutcome::kRejected;
}

}  // namespace

std::string_view strategy_name(ForgeryStrategy s) {
  switch (s) {
    case ForgeryStrategy::kReplay:
      return "replay";
    case ForgeryStrategy::kReaggregate:
      return "reaggregate";
    case ForgeryStrategy::kCrossSession:
      return "cross-session";
    case ForgeryStrategy::kMixAndMatch:
      return "mix-and-match";
    case ForgeryStrategy::kSameMessage:
      return "same-message";
  }
  return "unknown";
}

std::string_view outcome_name(ForgeryOutcome o) {
  switch (o) {
    case ForgeryOutcome::kVerified:
      return "verified";
    case ForgeryOutcome::kRejected:
      return "rejected";
    case ForgeryOutcome::kInsufficientMaterial:
      return "insufficient-material";
  }
  return "unknown";
}

std::vector<ForgeryAttempt> adversary_forge_attempts(
    const AdversaryLog& log, const PublicKey& pk, const SchemeParams& params,
    const ForgeryTarget& target) {
  const auto announcements = log.announcements();
  const auto reads = log.reads();
  const auto exchanges = log.exchanges();

  const auto ann = find_session(announcements, target.session);
  const auto read = find_session(reads, target.session);
  const auto ex = find_session(exchanges, target.session);
  const auto other = other_exchange(exchanges, target.session);

  // Measurements are public; take them from any logged quote.
  std::optional<Measurement> raenc, app;
  if (!exchanges.empty()) {
    raenc = exchanges.front().quote.raenc;
    app = exchanges.front().quote.app;
  }

  std::vector<ForgeryAttempt> out;
  auto insufficient = [&](ForgeryStrategy s, std::string why) {
    out.push_back({s, ForgeryOutcome::kInsufficientMaterial, std::move(why)});
  };
  auto attempt = [&](ForgeryStrategy s, const Quote& q, const Nonce& nonce) {
    std::string detail;
    ForgeryOutcome o = judge(pk, params, q, nonce, &detail);
    out.push_back({s, o, std::move(detail)});
  };

  // (a) Replay the logged quote with the new result.
  if (ex) {
    Quote q = ex->quote;
    q.result = target.result;
    attempt(ForgeryStrategy::kReplay, q, target.nonce);
  } else {
    insufficient(ForgeryStrategy::kReplay, "no quote for target session");
  }

  // (b) Rebuild the aggregate for the new selection out of the one subset
  // the oblivious memory served. Rows whose digit differs have no matching
  // subkey, so the logged one for that row stands in.
  if (read && ann && raenc) {
    Digest m = attestation_message(*raenc, *app, target.result);
    Digest x = bind_nonce(target.nonce, m);
    IndexSelection wanted = eot_select(params, x, *raenc);
    std::vector<G2Point> picked;
    size_t missing = 0;
    for (uint32_t j = 0; j < params.symbols; ++j) {
      uint32_t want = wanted.indices[j];
      auto it = std::find(read->indices.begin(), read->indices.end(), want);
      if (it != read->indices.end()) {
        picked.push_back(read->subkeys[it - read->indices.begin()]);
      } else {
        picked.push_back(read->subkeys[j]);
        ++missing;
      }
    }
    Quote q{target.session, ann->aux.first, aggregate(params, picked), *raenc,
            *app, target.result};
    std::string detail;
    ForgeryOutcome o = judge(pk, params, q, target.nonce, &detail);
    out.push_back({ForgeryStrategy::kReaggregate, o,
                   detail + " (" + std::to_string(missing) + " of " +
                       std::to_string(params.symbols) + " rows missing)"});
  } else {
    insufficient(ForgeryStrategy::kReaggregate,
                 "no served subset or aux for target session");
  }

  // (c) Another session's signature presented under the target counter.
  if (other) {
    Quote q = other->quote;
    q.ctr = target.session;
    q.result = target.result;
    attempt(ForgeryStrategy::kCrossSession, q, target.nonce);
  } else {
    insufficient(ForgeryStrategy::kCrossSession, "no other session logged");
  }

  // (d) Target aux paired with another session's aggregate.
  if (ann && other) {
    Quote q = other->quote;
    q.ctr = target.session;
    q.y = ann->aux.first;
    q.result = target.result;
    attempt(ForgeryStrategy::kMixAndMatch, q, target.nonce);
  } else {
    insufficient(ForgeryStrategy::kMixAndMatch,
                 "need target aux and another session's quote");
  }

  // (e) Re-aggregate the served subset for the message it was served for.
  if (read && ann && ex) {
    Quote q{target.session, ann->aux.first, aggregate(params, read->subkeys),
            ex->quote.raenc, ex->quote.app, ex->request.result};
    attempt(ForgeryStrategy::kSameMessage, q, ex->request.nonce);
  } else {
    insufficient(ForgeryStrategy::kSameMessage,
                 "no logged exchange for target session");
  }
  return out;
}

GameReport run_game(const GameConfig& config) {
  const SchemeParams& params = config.params;
  params.validate();

  SeededRandom coproc_rng(config.seed, "coprocessor");
  SeededRandom user_rng(config.seed, "verifier");
  SeededRandom adv_rng(config.seed, "adversary");
  AdversaryLog log;
  CoProcessor coproc(params, coproc_rng, &log);
  RaEnclave enclave(params, coproc, demo_enclave_measurement(), &log);
  RemoteVerifier verifier(coproc.public_key(), params, user_rng,
                          enclave.measurement());

  GameReport report;
  for (uint64_t i = 1; i <= params.sessions; ++i) {
    coproc.generate_next();
    AttestationRequest req = verifier.request(demo_app_measurement());
    req.result = to_bytes("honest result " + std::to_string(i));
    Quote quote = enclave.handle(req);
    VerifyResult v = verifier.verify(quote, req.nonce);
    report.lines.push_back("session=" + std::to_string(i) +
                           " honest=" + std::string(verify_status_name(v.status)));
  }

  for (uint64_t s = 1; s <= params.sessions; ++s) {
    for (uint32_t k = 0; k < config.targets_per_session; ++k) {
      ForgeryTarget target;
      target.session = s;
      Bytes tail(16);
      adv_rng.fill(tail);
      target.result = to_bytes("forged result ");
      target.result.insert(target.result.end(), tail.begin(), tail.end());
      adv_rng.fill(target.nonce);

      for (const ForgeryAttempt& a :
           adversary_forge_attempts(log, coproc.public_key(), params, target)) {
        if (a.outcome != ForgeryOutcome::kInsufficientMaterial) {
          bool verified = a.outcome == ForgeryOutcome::kVerified;
          if (a.strategy == ForgeryStrategy::kSameMessage) {
            ++report.same_message_attempts;
            report.same_message_verified += verified;
          } else {
            ++report.new_message_attempts;
            report.new_message_verified += verified;
          }
        }
        std::string outcome(outcome_name(a.outcome));
        if (a.strategy == ForgeryStrategy::kSameMessage &&
            a.outcome == ForgeryOutcome::kVerified) {
          outcome += " (allowed)";
        }
        report.lines.push_back("session=" + std::to_string(s) +
                               " target=" + std::to_string(k) + " " +
                               std::string(strategy_name(a.strategy)) + ": " +
                               outcome + " [" + a.detail + "]");
      }
    }
  }
  return report;
}

}  // namespace otsske::ra

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


#include "otsske/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "otsske/adversary.hpp"
#include "otsske/bench.hpp"
#include "otsske/codec.hpp"
#include "otsske/error.hpp"
#include "otsske/ra.hpp"
#include "otsske/scheme.hpp"

namespace otsske::cli {

namespace {

struct Options {
  uint32_t t = 4;
  uint32_t n = 32;
  uint64_t sessions = 8;
  unsigned lambda = 256;
  std::optional<uint64_t> seed;

  std::string in, out, pk, keys, sig;
  uint64_t session = 0;
  bool full = false;
  uint64_t demo_sessions = 3;
  bool single_thread = false;
  uint32_t targets = 4;
  uint32_t reps = 100;
  uint32_t warmup = 3;

  SchemeParams params() const {
    SchemeParams p;
    p.radix = t;
    p.symbols = n;
    p.sessions = sessions;
    p.security_level = lambda;
    return p;
  }
};

// Seeded when --seed is given or OTSSKE_DETERMINISTIC=1 (seed 0).
std::optional<uint64_t> effective_seed(const Options& o) {
  if (o.seed) return o.seed;
  const char* env = std::getenv("OTSSKE_DETERMINISTIC");
  if (env != nullptr && std::string_view(env) == "1") return uint64_t{0};
  return std::nullopt;
}

uint64_t seed_or_fresh(const Options& o) {
  if (auto s = effective_seed(o)) return *s;
  SystemRandom sys;
  uint64_t v = 0;
  std::array<uint8_t, 8> buf;
  sys.fill(buf);
  for (uint8_t b : buf) v = (v << 8) | b;
  return v;
}

Bytes read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::kIo, "cannot open " + path);
  return Bytes(std::istreambuf_iterator<char>(f), {});
}

void write_file(const std::string& path, ByteView data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::kIo, "cannot write " + path);
  f.write(reinterpret_cast<const char*>(data.data()),
          static_cast<std::streamsize>(data.size()));
  if (!f) throw Error(ErrorCode::kIo, "write failed for " + path);
}

void write_text(const std::string& path, std::string_view text) {
  write_file(path, as_bytes(text));
}

int cmd_setup(const Options& o, std::ostream& out) {
  SchemeParams p = o.params();
  p.validate();
  GroupParams g = setup(p.security_level);
  out << "curve=" << g.curve << "\n";
  out << "pairing=" << g.pairing_type << "\n";
  out << "order=" << to_hex(g.order_be) << "\n";
  out << "order_bits=" << g.order_bits << "\n";
  out << "g1_bytes=" << g.g1_encoded_size << "\n";
  out << "g2_bytes=" << g.g2_encoded_size << "\n";
  out << "t=" << p.radix << "\nn=" << p.symbols << "\nN=" << p.sessions
      << "\nsubkeys_per_session=" << p.subkeys_per_session() << "\n";
  if (!o.out.empty()) write_file(o.out, encode_params(p));
  return kExitOk;
}

int cmd_keygen(const Options& o, std::ostream& out) {
  SchemeParams p = o.params();
  p.validate();
  auto rng = make_random(effective_seed(o), "keygen");
  KeyPair kp = keygen_setup(p, *rng);
  std::vector<SessionKeyMaterial> store;
  for (uint64_t i = 0; i <= p.sessions; ++i) {
    store.push_back(gen_session(kp.public_key, kp.secret, p, i, *rng));
  }
  write_file(o.pk, encode_public_key(kp.public_key));
  write_file(o.keys, encode_key_store(store));
  out << "wrote public key to " << o.pk << " and " << store.size()
      << " session keys to " << o.keys << "\n";
  return kExitOk;
}

int cmd_sign(const Options& o, std::ostream& out) {
  SchemeParams p = o.params();
  p.validate();
  auto store = decode_key_store(read_file(o.keys));
  Bytes message = read_file(o.in);
  auto it = std::find_if(store.begin(), store.end(), [&](const auto& s) {
    return s.session == o.session;
  });
  if (it == store.end()) {
    throw Error(ErrorCode::kSessionConsumed,
                "no unused key for session " + std::to_string(o.session));
  }
  if (it->symbols != p.symbols || it->radix != p.radix) {
    throw Error(ErrorCode::kInvalidParameters,
                "key store was generated for different t/n");
  }
  auto rng = make_random(effective_seed(o), "sign");
  Bytes prp_key(32);
  rng->fill(prp_key);
  IndexSelection sel = prp_select(p, prp_key, message);
  std::vector<G2Point> picked = subkeys_at(*it, sel);
  Signature sig;
  if (o.full) {
    PublicKey pk = decode_public_key(read_file(o.pk));
    sig = sign_full(pk, p, picked, sel, it->aux, message, *rng);
  } else {
    sig = sign_compressed(p, picked, sel, it->aux);
  }
  write_file(o.out, encode_signature(sig));
  // One signature per session: drop the used key from the store.
  store.erase(it);
  write_file(o.keys, encode_key_store(store));
  out << "signed with session " << o.session << "\n";
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  SchemeParams p = o.params();
  p.validate();
  PublicKey pk = decode_public_key(read_file(o.pk));
  Signature sig = decode_signature(read_file(o.sig));
  Bytes message = read_file(o.in);
  VerifyResult r = verify(pk, p, o.session, sig, message);
  out << (r.ok() ? "valid" : "invalid: " + std::string(verify_status_name(
                                               r.status)))
      << "\n";
  return r.ok() ? kExitOk : kExitVerifyFailed;
}

int cmd_demo(const Options& o, std::ostream& out, std::ostream& err) {
  ra::DemoConfig cfg;
  cfg.params = o.params();
  cfg.seed = seed_or_fresh(o);
  cfg.sessions = o.demo_sessions;
  cfg.threaded = !o.single_thread;
  if (!effective_seed(o)) err << "seed=" << cfg.seed << "\n";
  ra::DemoResult r = ra::run_demo(cfg);
  if (o.out.empty()) {
    out << r.transcript;
  } else {
    write_text(o.out, r.transcript);
  }
  bool all = std::all_of(r.verdicts.begin(), r.verdicts.end(),
                         [](bool v) { return v; });
  return all ? kExitOk : kExitVerifyFailed;
}

int cmd_game(const Options& o, std::ostream& out, std::ostream& err) {
  ra::GameConfig cfg;
  cfg.params = o.params();
  cfg.seed = seed_or_fresh(o);
  cfg.targets_per_session = o.targets;
  if (!effective_seed(o)) err << "seed=" << cfg.seed << "\n";
  ra::GameReport r = ra::run_game(cfg);
  for (const std::string& line : r.lines) out << line << "\n";
  out << "new-message forgeries verified: " << r.new_message_verified << "/"
      << r.new_message_attempts << "\n";
  out << "same-message re-signs verified: " << r.same_message_verified << "/"
      << r.same_message_attempts << "\n";
  out << "result: " << (r.expected_pattern() ? "pass" : "fail") << "\n";
  return r.expected_pattern() ? kExitOk : kExitVerifyFailed;
}

int cmd_bench(const Options& o, std::ostream& out) {
  bench::BenchConfig cfg;
  cfg.params = o.params();
  cfg.repetitions = o.reps;
  cfg.warmup = o.warmup;
  cfg.seed = effective_seed(o).value_or(0);
  bench::BenchReport r = bench::bench_run(cfg);
  out << r.to_table();
  if (!o.out.empty()) write_text(o.out, r.to_key_value());
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  Options o;
  CLI::App app{"One-time signatures with key exposure, and a remote "
               "attestation simulator built on them",
               "otsske"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--t", o.t, "Radix of the index digits")
      ->capture_default_str();
  app.add_option("--n", o.n, "Digits per index")->capture_default_str();
  app.add_option("--N", o.sessions, "Number of sessions")
      ->capture_default_str();
  app.add_option("--lambda", o.lambda, "Security level (128 or 256)")
      ->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for deterministic mode");

  auto* setup_cmd = app.add_subcommand("setup", "Print group parameters");
  setup_cmd->add_option("--out", o.out, "Write encoded parameters here");

  auto* keygen_cmd =
      app.add_subcommand("keygen", "Generate a public key and session keys");
  keygen_cmd->add_option("--pk", o.pk, "Public key output")->required();
  keygen_cmd->add_option("--keys", o.keys, "Session key store output")
      ->required();

  auto* sign_cmd = app.add_subcommand("sign", "Sign a file with one session");
  sign_cmd->add_option("--keys", o.keys, "Session key store")->required();
  sign_cmd->add_option("--session", o.session, "Session id")->required();
  sign_cmd->add_option("--in", o.in, "Message file")->required();
  sign_cmd->add_option("--out", o.out, "Signature output")->required();
  sign_cmd->add_flag("--full", o.full, "Full variant (needs --pk)");
  sign_cmd->add_option("--pk", o.pk, "Public key (full variant only)");

  auto* verify_cmd = app.add_subcommand("verify", "Verify a signature file");
  verify_cmd->add_option("--pk", o.pk, "Public key")->required();
  verify_cmd->add_option("--session", o.session, "Session id")->required();
  verify_cmd->add_option("--in", o.in, "Message file")->required();
  verify_cmd->add_option("--sig", o.sig, "Signature file")->required();

  auto* demo_cmd =
      app.add_subcommand("demo", "Run the attestation protocol in-process");
  demo_cmd->add_option("--sessions", o.demo_sessions, "Attestations to run")
      ->capture_default_str();
  demo_cmd->add_option("--out", o.out, "Transcript output (default stdout)");
  demo_cmd->add_flag("--single-thread", o.single_thread,
                     "Generate keys on the calling thread");

  auto* game_cmd =
      app.add_subcommand("game", "Run the forgery harness against a full log");
  game_cmd->add_option("--targets", o.targets, "Fresh messages per session")
      ->capture_default_str();

  auto* bench_cmd = app.add_subcommand("bench", "Benchmark against ECDSA");
  bench_cmd->add_option("--reps", o.reps, "Measured repetitions")
      ->capture_default_str();
  bench_cmd->add_option("--warmup", o.warmup, "Unmeasured repetitions")
      ->capture_default_str();
  bench_cmd->add_option("--out", o.out, "Key=value report output");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (sign_cmd->parsed() && o.full && o.pk.empty()) {
    err << "sign --full needs --pk\n";
    return kExitUsage;
  }

  try {
    if (setup_cmd->parsed()) return cmd_setup(o, out);
    if (keygen_cmd->parsed()) return cmd_keygen(o, out);
    if (sign_cmd->parsed()) return cmd_sign(o, out);
    if (verify_cmd->parsed()) return cmd_verify(o, out);
    if (demo_cmd->parsed()) return cmd_demo(o, out, err);
    if (game_cmd->parsed()) return cmd_game(o, out, err);
    if (bench_cmd->parsed()) return cmd_bench(o, out);
  } catch (const Error& e) {
    err << "error (" << error_code_name(e.code()) << "): " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace otsske::cli

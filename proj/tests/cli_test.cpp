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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "otsske/bytes.hpp"
#include "otsske/random.hpp"

namespace otsske::cli {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() /
           (std::string("otsske_cli_") + info->name() + "_" +
            std::to_string(::getpid()));
    fs::create_directories(dir_);
    unsetenv("OTSSKE_DETERMINISTIC");
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  void write(const std::string& name, ByteView data) {
    std::ofstream f(path(name), std::ios::binary);
    f.write(reinterpret_cast<const char*>(data.data()), data.size());
  }

  Bytes read(const std::string& name) {
    std::ifstream f(path(name), std::ios::binary);
    return Bytes(std::istreambuf_iterator<char>(f), {});
  }

  void keygen() {
    ASSERT_EQ(run({"--N", "3", "--seed", "1", "keygen", "--pk", path("pk"),
                   "--keys", path("keys")}),
              kExitOk)
        << err_.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, KeygenSignVerifyPipeline) {
  SeededRandom rng(1);
  Bytes msg(1024);
  rng.fill(msg);
  write("msg", msg);
  keygen();
  ASSERT_EQ(run({"--N", "3", "sign", "--keys", path("keys"), "--session", "2",
                 "--in", path("msg"), "--out", path("sig")}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(run({"--N", "3", "verify", "--pk", path("pk"), "--session", "2",
                 "--in", path("msg"), "--sig", path("sig")}),
            kExitOk)
      << err_.str();
  // Bound to the session it was made with.
  EXPECT_EQ(run({"--N", "3", "verify", "--pk", path("pk"), "--session", "1",
                 "--in", path("msg"), "--sig", path("sig")}),
            kExitVerifyFailed);
  msg[100] ^= 4;
  write("msg2", msg);
  EXPECT_EQ(run({"--N", "3", "verify", "--pk", path("pk"), "--session", "2",
                 "--in", path("msg2"), "--sig", path("sig")}),
            kExitVerifyFailed);
}

TEST_F(Cli, FullVariantAndOneTimeUse) {
  write("msg", as_bytes("hello"));
  keygen();
  ASSERT_EQ(run({"--N", "3", "sign", "--full", "--pk", path("pk"), "--keys",
                 path("keys"), "--session", "3", "--in", path("msg"), "--out",
                 path("sig")}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(read("sig")[0], 0x01);
  EXPECT_EQ(run({"--N", "3", "verify", "--pk", path("pk"), "--session", "3",
                 "--in", path("msg"), "--sig", path("sig")}),
            kExitOk);
  EXPECT_EQ(run({"--N", "3", "sign", "--keys", path("keys"), "--session", "3",
                 "--in", path("msg"), "--out", path("sig2")}),
            kExitUsage);
  EXPECT_NE(err_.str().find("session consumed"), std::string::npos);
  EXPECT_EQ(run({"--N", "3", "sign", "--full", "--keys", path("keys"),
                 "--session", "1", "--in", path("msg"), "--out", path("s3")}),
            kExitUsage);
}

TEST_F(Cli, MalformedInputsExitTwo) {
  write("msg", as_bytes("hello"));
  keygen();
  ASSERT_EQ(run({"--N", "3", "sign", "--keys", path("keys"), "--session", "1",
                 "--in", path("msg"), "--out", path("sig")}),
            kExitOk);
  Bytes pk = read("pk");
  Bytes sig = read("sig");

  SeededRandom rng(9);
  for (int i = 0; i < 20; ++i) {
    Bytes junk(1 + i * 17);
    rng.fill(junk);
    write("junk", junk);
    EXPECT_EQ(run({"--N", "3", "verify", "--pk", path("junk"), "--session",
                   "1", "--in", path("msg"), "--sig", path("sig")}),
              kExitUsage)
        << "pk corpus " << i;
    EXPECT_FALSE(err_.str().empty());
    EXPECT_EQ(run({"--N", "3", "verify", "--pk", path("pk"), "--session", "1",
                   "--in", path("msg"), "--sig", path("junk")}),
              kExitUsage)
        << "sig corpus " << i;
  }
  for (size_t len = 0; len < sig.size(); len += 11) {
    write("cut", ByteView(sig).first(len));
    EXPECT_EQ(run({"--N", "3", "verify", "--pk", path("pk"), "--session", "1",
                   "--in", path("msg"), "--sig", path("cut")}),
              kExitUsage)
        << "truncated at " << len;
  }
  write("cutpk", ByteView(pk).first(pk.size() - 1));
  EXPECT_EQ(run({"--N", "3", "verify", "--pk", path("cutpk"), "--session", "1",
                 "--in", path("msg"), "--sig", path("sig")}),
            kExitUsage);
  EXPECT_EQ(run({"--N", "3", "verify", "--pk", path("missing"), "--session",
                 "1", "--in", path("msg"), "--sig", path("sig")}),
            kExitUsage);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}), kExitUsage);
  EXPECT_EQ(run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(run({"verify", "--pk", "x"}), kExitUsage);
  EXPECT_EQ(run({"--t", "1", "setup"}), kExitUsage);
  EXPECT_EQ(run({"--lambda", "192", "setup"}), kExitUsage);
  EXPECT_EQ(run({"--N", "2", "demo", "--sessions", "3", "--seed", "1"}),
            kExitUsage);
  EXPECT_EQ(run({"--help"}), kExitOk);
}

TEST_F(Cli, SetupPrintsGroup) {
  EXPECT_EQ(run({"setup", "--out", path("params")}), kExitOk);
  EXPECT_NE(out_.str().find("curve=BLS12-381"), std::string::npos);
  EXPECT_NE(out_.str().find("subkeys_per_session=128"), std::string::npos);
  EXPECT_EQ(read("params").size(), 32u);
}

TEST_F(Cli, DemoIsDeterministic) {
  ASSERT_EQ(run({"--seed", "7", "demo", "--sessions", "3", "--out",
                 path("a.txt")}),
            kExitOk);
  ASSERT_EQ(run({"--seed", "7", "demo", "--sessions", "3", "--out",
                 path("b.txt"), "--single-thread"}),
            kExitOk);
  EXPECT_EQ(read("a.txt"), read("b.txt"));
  Bytes raw = read("a.txt");
  std::string text(raw.begin(), raw.end());
  size_t verdicts = 0;
  for (size_t p = text.find("VERDICT=true"); p != std::string::npos;
       p = text.find("VERDICT=true", p + 1)) {
    ++verdicts;
  }
  EXPECT_EQ(verdicts, 3u);
}

TEST_F(Cli, DeterministicEnvironmentFixesKeys) {
  setenv("OTSSKE_DETERMINISTIC", "1", 1);
  ASSERT_EQ(run({"--N", "1", "keygen", "--pk", path("pk1"), "--keys",
                 path("k1")}),
            kExitOk);
  ASSERT_EQ(run({"--N", "1", "keygen", "--pk", path("pk2"), "--keys",
                 path("k2")}),
            kExitOk);
  EXPECT_EQ(read("pk1"), read("pk2"));
  EXPECT_EQ(read("k1"), read("k2"));
  unsetenv("OTSSKE_DETERMINISTIC");
  ASSERT_EQ(run({"--N", "1", "keygen", "--pk", path("pk3"), "--keys",
                 path("k3")}),
            kExitOk);
  EXPECT_NE(read("pk1"), read("pk3"));
}

TEST_F(Cli, GameReportsPattern) {
  ASSERT_EQ(run({"--N", "2", "--seed", "4", "game", "--targets", "1"}),
            kExitOk)
      << out_.str();
  std::string text = out_.str();
  EXPECT_NE(text.find("same-message: verified (allowed)"), std::string::npos);
  for (const char* s : {"replay: rejected", "reaggregate: rejected",
                        "cross-session: rejected", "mix-and-match: rejected"}) {
    EXPECT_NE(text.find(s), std::string::npos) << s;
  }
  EXPECT_NE(text.find("result: pass"), std::string::npos);
}

TEST_F(Cli, BenchWritesReport) {
  ASSERT_EQ(run({"--n", "4", "bench", "--reps", "1", "--warmup", "0", "--out",
                 path("report.txt")}),
            kExitOk);
  Bytes raw = read("report.txt");
  std::string text(raw.begin(), raw.end());
  for (const char* key :
       {"otsske.keygen.v_ms=", "otsske.keygen.aux_ms=", "otsske.keygen.sk_ms=",
        "otsske.sign_ms=", "otsske.verify_ms=", "ecdsa.keygen_ms=",
        "ecdsa.sign_ms=", "ecdsa.verify_ms=", "counts.sign_pairings=0",
        "counts.verify_pairings=3", "otsske.sign.stddev_ms=n/a",
        "reference.otsske.keygen.total_ms=388.6"}) {
    EXPECT_NE(text.find(key), std::string::npos) << key;
  }
  EXPECT_NE(out_.str().find("reference ms"), std::string::npos);
}

}  // namespace
}  // namespace otsske::cli

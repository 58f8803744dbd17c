// Copyright 2026 The Hector Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "hector/cli.hpp"
#include "test_support.hpp"

using testing_support::TempDir;
using Json = nlohmann::json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args, const std::string& input = "",
                  const std::map<std::string, std::string>& env = {}) {
  std::istringstream in(input);
  std::ostringstream out, err;
  hector::cli::Io io{in, out, err, false, [&env](const char* name) -> std::optional<std::string> {
                       auto it = env.find(name);
                       return it == env.end() ? std::nullopt : std::optional<std::string>(it->second);
                     }};
  const int code = hector::cli::run(args, io);
  return {code, out.str(), err.str()};
}

const std::vector<std::string> kWorkedExampleFlags = {"--hotel", "549", "--floor",   "128", "--room",     "449",
                                                      "--meal",  "1",   "--topping", "3",   "--beverage", "4"};

std::vector<std::string> derive_args(std::vector<std::string> extra = {}) {
  std::vector<std::string> args{"derive"};
  args.insert(args.end(), kWorkedExampleFlags.begin(), kWorkedExampleFlags.end());
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

}  // namespace

TEST(CliDerive, WorkedExampleWithPinFlag) {
  const auto r = run_cli(derive_args({"--pin", "45%D"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "passkey: 0426wwwBwv~@@>@<?\ndigits: 05490128449010304\nentropy: 111.165 bits\n");
  EXPECT_NE(r.err.find("warning: --pin"), std::string::npos);
}

TEST(CliDerive, PinFromStdin) {
  const auto r = run_cli(derive_args({"--stdin"}), "45%D\n");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("passkey: 0426wwwBwv~@@>@<?\n"), std::string::npos);
  EXPECT_EQ(r.err.find("warning"), std::string::npos);
}

TEST(CliDerive, EmptyPinUsesDefaultSalt) {
  const auto r = run_cli(derive_args(), "\n");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("passkey: wAyC]]]|]\\!00Y0WZ\n"), std::string::npos);
  EXPECT_EQ(run_cli(derive_args(), "").out, r.out);
}

TEST(CliDerive, IsBitIdenticalAcrossRuns) {
  EXPECT_EQ(run_cli(derive_args({"--pin", "45%D"})).out, run_cli(derive_args({"--pin", "45%D"})).out);
}

TEST(CliDerive, JsonOutput) {
  const auto r = run_cli(derive_args({"--json", "--pin", "45%D"}));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = Json::parse(r.out);
  EXPECT_EQ(j["digit_sequence"], "05490128449010304");
  EXPECT_EQ(j["passkey"], "0426wwwBwv~@@>@<?");
  EXPECT_NEAR(j["entropy_bits"].get<double>(), 111.165, 0.01);
  EXPECT_EQ(j["length"], 17);
}

TEST(CliDerive, SixMembers) {
  std::vector<std::string> args = derive_args({"--pin", "45%D"});
  for (const char* role : {"spouse", "dad", "mom", "daughter", "son"}) {
    args.push_back("--member");
    args.push_back(std::string(role) + "=1,1,1,1,1,1");
  }
  const auto r = run_cli(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("entropy: 666.994 bits"), std::string::npos);
  EXPECT_NE(r.out.find("digits: 05490128449010304" "00010001001010101"), std::string::npos);
}

TEST(CliDerive, UsageErrors) {
  EXPECT_EQ(run_cli({"derive", "--hotel", "1215", "--floor", "1", "--room", "1", "--meal", "1", "--topping", "1",
                     "--beverage", "1", "--pin", "1234"})
                .code,
            1);
  EXPECT_EQ(run_cli({"derive", "--hotel", "1", "--pin", "1234"}).code, 1);
  EXPECT_EQ(run_cli({"derive", "--pin", "1234"}).code, 1);
  EXPECT_EQ(run_cli(derive_args({"--pin", "123"})).code, 1);
  EXPECT_EQ(run_cli(derive_args({"--member", "self=1,1,1,1,1,1", "--pin", "1234"})).code, 1);
  EXPECT_EQ(run_cli(derive_args({"--member", "cousin=1,1,1,1,1,1", "--pin", "1234"})).code, 1);
  EXPECT_EQ(run_cli(derive_args({"--member", "son=1,1,1", "--pin", "1234"})).code, 1);
}

TEST(CliDerive, ConfigFileAndOverrides) {
  TempDir dir;
  const auto conf = dir.path() / "hector.conf";
  std::ofstream(conf) << "m = 1\nk = 0\ndefault_salt = 0000\n";
  const auto via_env = run_cli(derive_args(), "\n", {{"HECTOR_CONFIG", conf.string()}});
  const auto via_flag = run_cli(derive_args({"--config", conf.string()}), "\n");
  ASSERT_EQ(via_env.code, 0) << via_env.err;
  EXPECT_EQ(via_env.out, via_flag.out);

  hector::DerivationParams params;
  params.multiplier = 1;
  params.increment = 0;
  const auto expected = hector::derive_passkey(hector::DigitSequence::parse("05490128449010304"),
                                               hector::SaltPin::parse("0000"), params);
  EXPECT_NE(via_env.out.find("passkey: " + expected.str() + "\n"), std::string::npos);

  const auto overridden = run_cli(derive_args({"--config", conf.string(), "--m", "45", "--k", "241"}), "\n");
  params.multiplier = 45;
  params.increment = 241;
  const auto expected2 = hector::derive_passkey(hector::DigitSequence::parse("05490128449010304"),
                                                hector::SaltPin::parse("0000"), params);
  EXPECT_NE(overridden.out.find("passkey: " + expected2.str() + "\n"), std::string::npos);

  EXPECT_EQ(run_cli(derive_args({"--config", (dir.path() / "missing.conf").string()}), "\n").code, 2);
}

TEST(CliGenerate, FullLengthOutputOnly) {
  const auto r = run_cli({"generate", "--length", "64", "--classes", "a,A,0,@"});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(r.out.size(), 65u);
  EXPECT_EQ(r.out.back(), '\n');
  for (char c : r.out.substr(0, 64)) EXPECT_NE(hector::kSymbolList.find(c), std::string_view::npos);
  EXPECT_TRUE(r.err.empty());
}

TEST(CliGenerate, SeededMatchesLibrary) {
  const auto r = run_cli({"generate", "--length", "20", "--seed", "1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, hector::generate(20, hector::CharClasses::all(), hector::GeneratorMode::seeded(1)) + "\n");
}

TEST(CliGenerate, Errors) {
  EXPECT_EQ(run_cli({"generate", "--length", "65"}).code, 1);
  EXPECT_EQ(run_cli({"generate", "--length", "0"}).code, 1);
  EXPECT_EQ(run_cli({"generate", "--classes", "x"}).code, 1);
  EXPECT_EQ(run_cli({"generate", "--length", "abc"}).code, 1);
}

TEST(CliCrypto, EncryptThenDecryptViaStdin) {
  const auto enc = run_cli({"encrypt", "--stdin"}, "hunter2-long-random\nmy phrase\n");
  ASSERT_EQ(enc.code, 0) << enc.err;
  const auto record_line = enc.out.substr(0, enc.out.size() - 1);
  EXPECT_NO_THROW(hector::record_from_string(record_line));

  const auto dec = run_cli({"decrypt", "--stdin"}, record_line + "\nmy phrase\n");
  ASSERT_EQ(dec.code, 0) << dec.err;
  EXPECT_EQ(dec.out, "hunter2-long-random\n");

  const auto wrong = run_cli({"decrypt", "--stdin"}, record_line + "\nnot my phrase\n");
  EXPECT_EQ(wrong.code, 3);
  EXPECT_TRUE(wrong.out.empty());
}

TEST(CliCrypto, RecordFileAndUnauthenticatedMode) {
  TempDir dir;
  const auto enc = run_cli({"encrypt", "--paper-compatible"}, "pw\nphrase\n");
  ASSERT_EQ(enc.code, 0);
  EXPECT_NE(enc.out.find(R"("mac":"none")"), std::string::npos);
  const auto file = dir.path() / "record.json";
  std::ofstream(file) << enc.out;
  const auto dec = run_cli({"decrypt", "--record-file", file.string()}, "phrase\n");
  ASSERT_EQ(dec.code, 0) << dec.err;
  EXPECT_EQ(dec.out, "pw\n");
}

TEST(CliCrypto, MalformedRecordIsDataError) {
  EXPECT_EQ(run_cli({"decrypt", "--stdin"}, "{\"v\":1}\nphrase\n").code, 2);
  EXPECT_EQ(run_cli({"decrypt", "--stdin"}, "").code, 1);
}

TEST(CliCrypto, JsonOutputs) {
  const auto enc = run_cli({"encrypt", "--json"}, "pw\nphrase\n");
  const auto j = Json::parse(enc.out);
  ASSERT_TRUE(j.contains("record"));
  const auto dec = run_cli({"decrypt", "--json", "--record", j["record"].dump()}, "phrase\n");
  EXPECT_EQ(Json::parse(dec.out)["plaintext"], "pw");
  const auto bad = run_cli({"decrypt", "--json", "--record", j["record"].dump()}, "nope\n");
  EXPECT_EQ(bad.code, 3);
  EXPECT_EQ(Json::parse(bad.out)["error"]["code"], "authentication");
}

TEST(CliVault, Workflow) {
  TempDir dir;
  const std::map<std::string, std::string> env{{"HECTOR_VAULT", (dir.path() / "v.json").string()}};

  auto add = run_cli({"vault", "add", "bank"}, "s3cret!\nphrase\n", env);
  ASSERT_EQ(add.code, 0) << add.err;
  EXPECT_EQ(add.out, "stored 'bank'\n");
  EXPECT_EQ(run_cli({"vault", "add", "bank"}, "other\nphrase\n", env).code, 2);
  EXPECT_EQ(run_cli({"vault", "add", "bank", "--force"}, "s3cret!\nphrase\n", env).code, 0);

  const auto list = run_cli({"vault", "list", "--json"}, "", env);
  ASSERT_EQ(list.code, 0);
  const auto entries = Json::parse(list.out)["entries"];
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0]["label"], "bank");
  EXPECT_FALSE(entries[0].contains("record"));

  const auto get = run_cli({"vault", "get", "bank"}, "", env);
  ASSERT_EQ(get.code, 0);
  EXPECT_NO_THROW(hector::record_from_string(get.out.substr(0, get.out.size() - 1)));

  const auto reveal = run_cli({"vault", "get", "bank", "--decrypt"}, "phrase\n", env);
  EXPECT_EQ(reveal.out, "s3cret!\n");
  EXPECT_EQ(run_cli({"vault", "get", "bank", "--decrypt"}, "wrong\n", env).code, 3);

  // Storing a record produced by a separate encrypt call.
  const auto enc = run_cli({"encrypt"}, "mailpw\nphrase\n");
  EXPECT_EQ(run_cli({"vault", "add", "mail", "--record-file", "-"}, enc.out, env).code, 0);
  EXPECT_EQ(run_cli({"vault", "get", "mail", "--decrypt", "--stdin"}, "phrase\n", env).out, "mailpw\n");

  EXPECT_EQ(run_cli({"vault", "rm", "bank"}, "", env).out, "removed 'bank'\n");
  EXPECT_EQ(run_cli({"vault", "get", "bank"}, "", env).code, 2);
  EXPECT_EQ(run_cli({"vault", "rm", "bank"}, "", env).code, 2);
}

TEST(CliVault, VaultFlagOverridesEnvironment) {
  TempDir dir;
  const auto flag_path = dir.path() / "flag.json";
  const std::map<std::string, std::string> env{{"HECTOR_VAULT", (dir.path() / "env.json").string()}};
  ASSERT_EQ(run_cli({"vault", "add", "x", "--vault", flag_path.string()}, "pw\nphrase\n", env).code, 0);
  EXPECT_TRUE(std::filesystem::exists(flag_path));
  EXPECT_FALSE(std::filesystem::exists(dir.path() / "env.json"));
}

TEST(Cli, UsageAndHelp) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 1);
  const auto help = run_cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("derive"), std::string::npos);
}

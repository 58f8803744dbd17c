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

#include <memory>
#include <mutex>
#include <thread>

#include "hector/service.hpp"
#include "test_support.hpp"

using Json = nlohmann::json;
using testing_support::TempDir;

namespace {

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    hector::ServiceOptions options;
    options.data_dir = HECTOR_DATA_DIR;
    options.vault_path = dir_.path() / "vault.json";
    options.access_log = [this](const std::string& line) {
      std::lock_guard<std::mutex> g(log_mutex_);
      log_ += line + "\n";
    };
    service_ = std::make_unique<hector::Service>(std::move(options));
    port_ = service_->bind_ephemeral();
    thread_ = std::thread([this] { service_->listen_after_bind(); });
    while (!service_->server().is_running()) std::this_thread::yield();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
  }

  void TearDown() override {
    service_->stop();
    thread_.join();
  }

  httplib::Result post(const std::string& path, const Json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }

  static Json worked_example_body() {
    return Json{{"members", Json::array({Json{{"role", "self"},
                                              {"hotel", 549},
                                              {"floor", 128},
                                              {"room", 449},
                                              {"meal", 1},
                                              {"topping", 3},
                                              {"beverage", 4}}})},
                {"pin", "45%D"}};
  }

  std::string log() {
    std::lock_guard<std::mutex> g(log_mutex_);
    return log_;
  }

  TempDir dir_;
  std::unique_ptr<hector::Service> service_;
  std::unique_ptr<httplib::Client> client_;
  std::thread thread_;
  int port_ = 0;
  std::mutex log_mutex_;
  std::string log_;
};

}  // namespace

TEST_F(ServiceTest, CatalogSearch) {
  auto res = client_->Get("/api/catalog/hotels?q=1717&limit=10");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/json");
  const auto j = Json::parse(res->body);
  ASSERT_EQ(j["entries"].size(), 1u);
  EXPECT_EQ(j["entries"][0]["index"], 1);
  EXPECT_EQ(j["entries"][0]["name"], "1717 Broadway");
  EXPECT_EQ(j["cardinality"], 1214);
}

TEST_F(ServiceTest, CatalogKindsAndLimits) {
  auto res = client_->Get("/api/catalog/meals?limit=5");
  ASSERT_TRUE(res);
  EXPECT_EQ(Json::parse(res->body)["entries"].size(), 5u);
  res = client_->Get("/api/catalog/rooms?q=449");
  EXPECT_EQ(Json::parse(res->body)["entries"][0]["name"], "449");
  res = client_->Get("/api/catalog/planets");
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(Json::parse(res->body)["error"]["code"], "not_found");
  res = client_->Get("/api/catalog/hotels?limit=0");
  EXPECT_EQ(res->status, 400);
  EXPECT_EQ(Json::parse(res->body)["error"]["code"], "bad_request");
}

TEST_F(ServiceTest, PasskeyWorkedExample) {
  auto res = post("/api/passkey", worked_example_body());
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  const auto j = Json::parse(res->body);
  EXPECT_EQ(j["digit_sequence"], "05490128449010304");
  EXPECT_NEAR(j["entropy_bits"].get<double>(), 111.165, 0.01);

  const auto lib = hector::derive_for_party(hector::Party({549, 128, 449, 1, 3, 4}), hector::SaltPin::parse("45%D"), {});
  EXPECT_EQ(j["passkey"], lib.passkey.str());
  EXPECT_EQ(j["entropy_bits"].get<double>(), lib.entropy.bits);
}

TEST_F(ServiceTest, PasskeySixMembersAndDefaultPin) {
  Json body = worked_example_body();
  body.erase("pin");
  for (const char* role : {"son", "spouse", "mom", "dad", "daughter"}) {
    body["members"].push_back(
        Json{{"role", role}, {"hotel", 1}, {"floor", 1}, {"room", 1}, {"meal", 1}, {"topping", 1}, {"beverage", 1}});
  }
  auto res = post("/api/passkey", body);
  ASSERT_EQ(res->status, 200) << res->body;
  const auto j = Json::parse(res->body);
  EXPECT_NEAR(j["entropy_bits"].get<double>(), 666.994, 0.01);
  EXPECT_EQ(j["digit_sequence"].get<std::string>().substr(0, 17), "05490128449010304");

  hector::Party party({549, 128, 449, 1, 3, 4});
  for (auto role : {hector::Role::spouse, hector::Role::dad, hector::Role::mom, hector::Role::daughter, hector::Role::son}) {
    party.add(role, {1, 1, 1, 1, 1, 1});
  }
  EXPECT_EQ(j["passkey"], hector::derive_for_party(party, hector::SaltPin::default_pin(), {}).passkey.str());
}

TEST_F(ServiceTest, PasskeyBadRequests) {
  auto body = worked_example_body();
  body["members"][0]["hotel"] = 0;
  EXPECT_EQ(post("/api/passkey", body)->status, 400);
  body = worked_example_body();
  body["pin"] = "12";
  EXPECT_EQ(post("/api/passkey", body)->status, 400);
  body = worked_example_body();
  body["members"][0]["room"] = "449";
  EXPECT_EQ(post("/api/passkey", body)->status, 400);
  EXPECT_EQ(client_->Post("/api/passkey", "not json", "application/json")->status, 400);
}

TEST_F(ServiceTest, Password) {
  auto res = post("/api/password", Json{{"length", 20}, {"classes", "a,A,0,@"}, {"seed", 1}});
  ASSERT_EQ(res->status, 200) << res->body;
  EXPECT_EQ(Json::parse(res->body)["password"],
            hector::generate(20, hector::CharClasses::all(), hector::GeneratorMode::seeded(1)));
  res = post("/api/password", Json{{"length", 64}});
  EXPECT_EQ(Json::parse(res->body)["password"].get<std::string>().size(), 64u);
  EXPECT_EQ(post("/api/password", Json{{"length", 65}})->status, 400);
  EXPECT_EQ(post("/api/password", Json{{"length", 8}, {"classes", ""}})->status, 400);
}

TEST_F(ServiceTest, EncryptDecryptAndTamper) {
  auto res = post("/api/encrypt", Json{{"plaintext", "p@ss w0rd"}, {"phrase", "0426wwwBwv~@@>@<?"}});
  ASSERT_EQ(res->status, 200) << res->body;
  auto record = Json::parse(res->body)["record"];
  EXPECT_EQ(record["mac"], "hmac-sha-256");

  res = post("/api/decrypt", Json{{"record", record}, {"phrase", "0426wwwBwv~@@>@<?"}});
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(Json::parse(res->body)["plaintext"], "p@ss w0rd");

  auto tampered = record;
  auto ct = tampered["ct"].get<std::string>();
  ct[0] = ct[0] == 'A' ? 'B' : 'A';
  tampered["ct"] = ct;
  res = post("/api/decrypt", Json{{"record", tampered}, {"phrase", "0426wwwBwv~@@>@<?"}});
  EXPECT_EQ(res->status, 403);
  EXPECT_EQ(Json::parse(res->body)["error"]["code"], "auth_failed");

  res = post("/api/decrypt", Json{{"record", record}, {"phrase", "wrong"}});
  EXPECT_EQ(res->status, 403);

  res = post("/api/encrypt", Json{{"plaintext", "x"}, {"phrase", "y"}, {"mode", "paper-compatible"}});
  EXPECT_EQ(Json::parse(res->body)["record"]["mac"], "none");
  EXPECT_EQ(post("/api/encrypt", Json{{"plaintext", ""}, {"phrase", "y"}})->status, 400);
  EXPECT_EQ(post("/api/decrypt", Json{{"record", Json{{"v", 1}}}, {"phrase", "y"}})->status, 400);
}

TEST_F(ServiceTest, VaultEndpoints) {
  const auto record = hector::record_to_json(hector::encrypt_password("pw", "phrase"));
  auto res = post("/api/vault/entries", Json{{"label", "bank account"}, {"record", record}});
  ASSERT_EQ(res->status, 201) << res->body;
  EXPECT_EQ(Json::parse(res->body)["label"], "bank account");
  EXPECT_EQ(post("/api/vault/entries", Json{{"label", "bank account"}, {"record", record}})->status, 409);
  EXPECT_EQ(post("/api/vault/entries", Json{{"label", "bank account"}, {"record", record}, {"force", true}})->status, 201);

  res = client_->Get("/api/vault/entries");
  const auto listing = Json::parse(res->body)["entries"];
  ASSERT_EQ(listing.size(), 1u);
  EXPECT_FALSE(listing[0].contains("record"));

  res = client_->Get("/api/vault/entries/bank%20account");
  ASSERT_EQ(res->status, 200);
  EXPECT_EQ(Json::parse(res->body)["record"], Json::parse(record.dump()));
  EXPECT_NE(res->body.find(record.dump()), std::string::npos);

  EXPECT_EQ(client_->Delete("/api/vault/entries/bank%20account")->status, 200);
  EXPECT_EQ(client_->Delete("/api/vault/entries/bank%20account")->status, 404);
  EXPECT_EQ(client_->Get("/api/vault/entries/bank%20account")->status, 404);
  EXPECT_EQ(hector::vault_load(dir_.path() / "vault.json").entries().size(), 0u);
}

TEST_F(ServiceTest, ConcurrentVaultWritesAreSerialized) {
  const auto record = hector::record_to_json(hector::encrypt_password("pw", "phrase"));
  std::vector<std::thread> threads;
  for (int t = 0; t < 6; ++t) {
    threads.emplace_back([&, t] {
      httplib::Client c("127.0.0.1", port_);
      for (int i = 0; i < 5; ++i) {
        const Json body{{"label", "l" + std::to_string(t) + "_" + std::to_string(i)}, {"record", record}};
        auto r = c.Post("/api/vault/entries", body.dump(), "application/json");
        ASSERT_TRUE(r);
        ASSERT_EQ(r->status, 201);
      }
    });
  }
  for (auto& th : threads) th.join();
  EXPECT_EQ(hector::vault_load(dir_.path() / "vault.json").entries().size(), 30u);
}

TEST_F(ServiceTest, SecretsNeverLogged) {
  post("/api/passkey", worked_example_body());
  post("/api/encrypt", Json{{"plaintext", "SuperSecretPlain"}, {"phrase", "SuperSecretPhrase"}});
  const auto text = log();
  EXPECT_NE(text.find("POST /api/passkey 200"), std::string::npos);
  EXPECT_EQ(text.find("45%D"), std::string::npos);
  EXPECT_EQ(text.find("SuperSecret"), std::string::npos);
}

TEST_F(ServiceTest, CorsOnlyForLoopbackOrigins) {
  auto res = client_->Get("/api/catalog/toppings", {{"Origin", "http://localhost:5173"}});
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");
  res = client_->Get("/api/catalog/toppings", {{"Origin", "https://evil.example"}});
  EXPECT_FALSE(res->has_header("Access-Control-Allow-Origin"));
  res = client_->Options("/api/passkey", {{"Origin", "http://127.0.0.1:8080"}});
  EXPECT_EQ(res->status, 204);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "http://127.0.0.1:8080");
}

TEST_F(ServiceTest, UnknownRouteIsJsonNotFound) {
  auto res = client_->Get("/api/nope");
  EXPECT_EQ(res->status, 404);
  EXPECT_EQ(Json::parse(res->body)["error"]["code"], "not_found");
}

TEST(ServiceStartup, MissingCatalogsFail) {
  hector::ServiceOptions options;
  options.data_dir = "/nonexistent/data";
  EXPECT_THROW(hector::Service{std::move(options)}, hector::Error);
}

TEST(ApiErrorMapping, StatusCodes) {
  EXPECT_EQ(hector::api_error_for(hector::Errc::format).status, 400);
  EXPECT_EQ(hector::api_error_for(hector::Errc::not_found).status, 404);
  EXPECT_EQ(hector::api_error_for(hector::Errc::authentication).status, 403);
  EXPECT_EQ(hector::api_error_for(hector::Errc::conflict).status, 409);
  EXPECT_EQ(hector::api_error_for(hector::Errc::io).status, 500);
}

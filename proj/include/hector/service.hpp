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

#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <regex>
#include <string>

#include "httplib.h"
#include "json.hpp"

#include "hector/catalog.hpp"
#include "hector/config.hpp"
#include "hector/error.hpp"
#include "hector/mnemonic.hpp"
#include "hector/random_password.hpp"
#include "hector/record.hpp"
#include "hector/vault.hpp"

// Loopback HTTP/JSON facade. Every handler is a thin adapter over one library
// call; errors come back as {"error":{"code":...,"message":...}}.

namespace hector {

inline constexpr int kDefaultPort = 8787;
inline constexpr std::size_t kDefaultSearchLimit = 50;

struct ServiceOptions {
  std::string bind_address = "127.0.0.1";
  int port = kDefaultPort;
  std::filesystem::path data_dir = "data";
  std::filesystem::path vault_path = "hector-vault.json";
  MnemonicConfig config;
  /// Static files served at "/" when set.
  std::optional<std::filesystem::path> ui_dir;
  /// Receives one line per request: method, path, status. Never bodies.
  std::function<void(const std::string&)> access_log;
};

struct ApiError {
  std::string code;
  int status = 500;
};

inline ApiError api_error_for(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::out_of_range:
    case Errc::format:
    case Errc::overflow: return {"bad_request", 400};
    case Errc::not_found: return {"not_found", 404};
    case Errc::authentication:
    case Errc::integrity: return {"auth_failed", 403};
    case Errc::conflict: return {"conflict", 409};
    case Errc::io:
    case Errc::randomness: return {"internal", 500};
  }
  return {"internal", 500};
}

inline bool is_loopback_origin(const std::string& origin) {
  static const std::regex pattern(R"(^https?://(127\.0\.0\.1|localhost|\[::1\])(:\d+)?$)");
  return std::regex_match(origin, pattern);
}

namespace service_detail {

using Json = nlohmann::ordered_json;

inline void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

inline void send_error(httplib::Response& res, const ApiError& err, const std::string& message) {
  send_json(res, err.status, Json{{"error", Json{{"code", err.code}, {"message", message}}}});
}

inline Json parse_body(const httplib::Request& req) {
  auto body = Json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) throw Error(Errc::format, "request body must be a JSON object");
  return body;
}

inline std::string require_string(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw Error(Errc::invalid_argument, std::string("field '") + key + "' must be a string");
  }
  return j.at(key).get<std::string>();
}

inline std::uint64_t require_uint(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_unsigned()) {
    throw Error(Errc::invalid_argument, std::string("field '") + key + "' must be a non-negative integer");
  }
  return j.at(key).get<std::uint64_t>();
}

inline std::uint32_t require_index(const Json& j, const char* key) {
  const auto value = require_uint(j, key);
  if (value > 0xffffffffu) throw Error(Errc::out_of_range, std::string("field '") + key + "' too large");
  return static_cast<std::uint32_t>(value);
}

inline Party parse_party(const Json& body) {
  if (!body.contains("members") || !body.at("members").is_array()) {
    throw Error(Errc::invalid_argument, "field 'members' must be an array");
  }
  const auto& members = body.at("members");
  if (members.empty() || members.size() > kMaxPartySize) {
    throw Error(Errc::invalid_argument, "party must have 1..6 members");
  }
  Party party;
  for (const auto& m : members) {
    if (!m.is_object()) throw Error(Errc::invalid_argument, "each member must be an object");
    const auto role_text = m.contains("role") ? require_string(m, "role") : std::string("self");
    const auto role = parse_role(role_text);
    if (!role) throw Error(Errc::invalid_argument, "unknown role '" + role_text + "'");
    Selection sel{require_index(m, "hotel"), require_index(m, "floor"),   require_index(m, "room"),
                  require_index(m, "meal"),  require_index(m, "topping"), require_index(m, "beverage")};
    party.add(*role, sel);
  }
  return party;
}

inline Json listing_json(const VaultListing& l) { return Json{{"label", l.label}, {"created_at", l.created_at}}; }

}  // namespace service_detail

class Service {
 public:
  /// Loads every catalog up front; a bad data directory fails here, not on
  /// the first request.
  explicit Service(ServiceOptions options) : options_(std::move(options)), catalogs_(options_.data_dir) {
    validate(options_.config.params);
    server_.set_payload_max_length(1 << 20);
    install_routes();
  }

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  httplib::Server& server() noexcept { return server_; }
  const ServiceOptions& options() const noexcept { return options_; }

  /// Blocks until stop().
  void listen() {
    if (!server_.bind_to_port(options_.bind_address, options_.port)) {
      throw Error(Errc::io, "cannot bind " + options_.bind_address + ":" + std::to_string(options_.port));
    }
    server_.listen_after_bind();
  }

  /// Binds an ephemeral port and returns it; follow with listen_after_bind().
  int bind_ephemeral() {
    const int port = server_.bind_to_any_port(options_.bind_address);
    if (port < 0) throw Error(Errc::io, "cannot bind " + options_.bind_address);
    return port;
  }

  void listen_after_bind() { server_.listen_after_bind(); }
  void stop() { server_.stop(); }

 private:
  using Json = service_detail::Json;
  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static Handler guarded(Handler inner) {
    return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
      try {
        inner(req, res);
      } catch (const Error& e) {
        service_detail::send_error(res, api_error_for(e.code()), e.what());
      } catch (const nlohmann::json::exception& e) {
        service_detail::send_error(res, {"bad_request", 400}, e.what());
      } catch (const std::exception& e) {
        service_detail::send_error(res, {"internal", 500}, e.what());
      }
    };
  }

  void install_routes() {
    using namespace service_detail;

    server_.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server_.set_post_routing_handler([](const httplib::Request& req, httplib::Response& res) {
      const auto origin = req.get_header_value("Origin");
      if (!origin.empty() && is_loopback_origin(origin)) {
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
        res.set_header("Vary", "Origin");
      }
    });

    server_.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
      if (options_.access_log) options_.access_log(req.method + " " + req.path + " " + std::to_string(res.status));
    });

    server_.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        const ApiError err = res.status == 404 ? ApiError{"not_found", 404} : ApiError{"bad_request", res.status};
        send_error(res, err, res.status == 404 ? "no such endpoint" : "request rejected");
      }
    });

    server_.Get(R"(/api/catalog/([a-z]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto kind = parse_catalog_kind(req.matches[1].str());
      if (!kind) throw Error(Errc::not_found, "unknown catalog '" + req.matches[1].str() + "'");
      std::size_t limit = kDefaultSearchLimit;
      if (req.has_param("limit")) {
        const auto text = req.get_param_value("limit");
        if (text.empty() || text.size() > 9 || text.find_first_not_of("0123456789") != std::string::npos) {
          throw Error(Errc::invalid_argument, "limit must be a positive integer");
        }
        limit = std::stoul(text);
        if (limit == 0) throw Error(Errc::invalid_argument, "limit must be a positive integer");
      }
      const auto& catalog = catalogs_.get(*kind);
      Json entries = Json::array();
      for (const auto& e : catalog.search_prefix(req.get_param_value("q"), limit)) {
        entries.push_back(Json{{"index", e.index}, {"name", e.name}});
      }
      send_json(res, 200,
                Json{{"kind", catalog_name(*kind)}, {"cardinality", catalog.size()}, {"entries", std::move(entries)}});
    }));

    server_.Post("/api/passkey", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      const auto party = parse_party(body);
      const auto salt = body.contains("pin") ? SaltPin::parse(require_string(body, "pin")) : options_.config.default_salt;
      const auto result = derive_for_party(party, salt, options_.config.params);
      send_json(res, 200,
                Json{{"digit_sequence", result.digits.str()},
                     {"passkey", result.passkey.str()},
                     {"entropy_bits", result.entropy.bits},
                     {"alphabet_size", result.entropy.alphabet_size},
                     {"length", result.entropy.length}});
    }));

    server_.Post("/api/password", guarded([](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      const auto length = require_uint(body, "length");
      const auto classes = body.contains("classes") ? parse_classes(require_string(body, "classes")) : CharClasses::all();
      const auto mode = body.contains("seed") ? GeneratorMode::seeded(require_uint(body, "seed")) : GeneratorMode::system();
      GenerateOptions options;
      if (body.contains("require_all_classes")) {
        if (!body.at("require_all_classes").is_boolean()) {
          throw Error(Errc::invalid_argument, "field 'require_all_classes' must be a boolean");
        }
        options.require_all_classes = body.at("require_all_classes").get<bool>();
      }
      const auto password = generate(length, classes, mode, options);
      const auto charset_size = build_charset(classes).size();
      Json out{{"password", password}, {"length", length}, {"charset_size", charset_size}};
      if (charset_size >= 2) out["entropy_bits"] = entropy(charset_size, length).bits;
      send_json(res, 200, out);
    }));

    server_.Post("/api/encrypt", guarded([](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      auto mode = RecordMode::authenticated;
      if (body.contains("mode")) {
        const auto text = require_string(body, "mode");
        if (text == "paper-compatible") mode = RecordMode::paper_compatible;
        else if (text != "authenticated") throw Error(Errc::invalid_argument, "mode must be authenticated or paper-compatible");
      }
      const auto record = encrypt_password(require_string(body, "plaintext"), require_string(body, "phrase"), mode);
      send_json(res, 200, Json{{"record", record_to_json(record)}});
    }));

    server_.Post("/api/decrypt", guarded([](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      if (!body.contains("record")) throw Error(Errc::invalid_argument, "field 'record' is required");
      const auto record = record_from_json(body.at("record"));
      send_json(res, 200, Json{{"plaintext", decrypt_password(record, require_string(body, "phrase"))}});
    }));

    server_.Get("/api/vault/entries", guarded([this](const httplib::Request&, httplib::Response& res) {
      Json entries = Json::array();
      for (const auto& l : vault_load_or_empty(options_.vault_path).list()) entries.push_back(listing_json(l));
      send_json(res, 200, Json{{"entries", std::move(entries)}});
    }));

    server_.Get(R"(/api/vault/entries/(.+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto label = req.matches[1].str();
      const auto vault = vault_load_or_empty(options_.vault_path);
      const auto& record = vault.get(label);
      std::string created_at;
      for (const auto& l : vault.list()) {
        if (l.label == label) created_at = l.created_at;
      }
      send_json(res, 200, Json{{"label", label}, {"created_at", created_at}, {"record", record_to_json(record)}});
    }));

    server_.Post("/api/vault/entries", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_body(req);
      const auto label = require_string(body, "label");
      if (!body.contains("record")) throw Error(Errc::invalid_argument, "field 'record' is required");
      auto record = record_from_json(body.at("record"));
      bool force = false;
      if (body.contains("force")) {
        if (!body.at("force").is_boolean()) throw Error(Errc::invalid_argument, "field 'force' must be a boolean");
        force = body.at("force").get<bool>();
      }
      std::lock_guard<std::mutex> guard(vault_mutex_);
      const auto vault = vault_update(options_.vault_path, [&](Vault& v) { v.add(label, record, force); });
      for (const auto& l : vault.list()) {
        if (l.label == label) send_json(res, 201, listing_json(l));
      }
    }));

    server_.Delete(R"(/api/vault/entries/(.+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto label = req.matches[1].str();
      std::lock_guard<std::mutex> guard(vault_mutex_);
      vault_update(options_.vault_path, [&](Vault& v) { v.remove(label); });
      send_json(res, 200, Json{{"removed", label}});
    }));

    if (options_.ui_dir && !server_.set_mount_point("/", options_.ui_dir->string())) {
      throw Error(Errc::io, "UI directory not found: " + options_.ui_dir->string());
    }
  }

  ServiceOptions options_;
  CatalogSet catalogs_;
  httplib::Server server_;
  std::mutex vault_mutex_;
};

}  // namespace hector

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

#include <termios.h>
#include <unistd.h>

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hector/config.hpp"
#include "hector/error.hpp"
#include "hector/mnemonic.hpp"
#include "hector/random_password.hpp"
#include "hector/record.hpp"
#include "hector/service.hpp"
#include "hector/vault.hpp"

namespace hector::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kData = 2,
  kAuth = 3,
};

inline int exit_code_for(Errc code) {
  switch (code) {
    case Errc::invalid_argument:
    case Errc::out_of_range: return kUsage;
    case Errc::authentication:
    case Errc::integrity: return kAuth;
    default: return kData;
  }
}

/// Streams and environment for one invocation. `interactive` enables no-echo
/// terminal prompts for secrets; otherwise secrets are read line by line
/// from `in`.
struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool interactive = false;
  std::function<std::optional<std::string>(const char*)> getenv = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    return v ? std::optional<std::string>(v) : std::nullopt;
  };
};

namespace detail {

using Json = nlohmann::ordered_json;

class SecretReader {
 public:
  SecretReader(Io& io, bool force_stdin) : io_(io), use_prompt_(io.interactive && !force_stdin) {}

  /// Flag value if given (with a warning), else a prompt or the next input
  /// line. Returns nullopt at end of input.
  std::optional<std::string> read(const std::optional<std::string>& flag, const char* flag_name, const char* prompt) {
    if (flag) {
      io_.err << "warning: " << flag_name << " on the command line is visible to other processes\n";
      return flag;
    }
    if (use_prompt_) return prompt_no_echo(prompt);
    return read_line();
  }

  std::optional<std::string> read_line() {
    std::string line;
    if (!std::getline(io_.in, line)) return std::nullopt;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

 private:
  std::optional<std::string> prompt_no_echo(const char* prompt) {
    io_.err << prompt << std::flush;
    termios saved{};
    const bool tty = ::tcgetattr(STDIN_FILENO, &saved) == 0;
    if (tty) {
      termios quiet = saved;
      quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
      ::tcsetattr(STDIN_FILENO, TCSANOW, &quiet);
    }
    auto line = read_line();
    if (tty) ::tcsetattr(STDIN_FILENO, TCSANOW, &saved);
    io_.err << "\n";
    return line;
  }

  Io& io_;
  bool use_prompt_;
};

inline std::string require_secret(std::optional<std::string> value, const char* what) {
  if (!value || value->empty()) throw Error(Errc::invalid_argument, std::string(what) + " is required");
  return *value;
}

inline Selection parse_selection_list(const std::string& text) {
  std::vector<std::uint32_t> values;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty() || part.size() > 9 || part.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(Errc::invalid_argument, "selection values must be positive integers: '" + text + "'");
    }
    values.push_back(static_cast<std::uint32_t>(std::stoul(part)));
  }
  if (values.size() != 6) {
    throw Error(Errc::invalid_argument, "a member needs six values hotel,floor,room,meal,topping,beverage");
  }
  return {values[0], values[1], values[2], values[3], values[4], values[5]};
}

inline std::string read_text_file(const std::string& path, std::istream& in) {
  if (path == "-") {
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::io, "cannot open " + path);
  std::stringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

inline bool is_loopback_bind(const std::string& address) {
  return address == "127.0.0.1" || address == "localhost" || address == "::1";
}

}  // namespace detail

/// Runs one command line. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, Io& io) {
  using detail::Json;

  CLI::App app{"Hotel-mnemonic passkeys, random passwords, and an encrypted password vault", "hector"};
  app.require_subcommand(1);
  app.fallthrough();

  bool json = false;
  bool use_stdin = false;
  std::string vault_flag;
  std::string data_dir_flag;
  std::string config_flag;
  app.add_flag("--json", json, "Machine-readable output");
  app.add_flag("--stdin", use_stdin, "Read secrets from standard input, one per line");
  app.add_option("--vault", vault_flag, "Vault file (default $HECTOR_VAULT or ./hector-vault.json)");
  app.add_option("--data-dir", data_dir_flag, "Catalog directory (default $HECTOR_DATA_DIR or ./data)");
  app.add_option("--config", config_flag, "Derivation config file (default $HECTOR_CONFIG)");

  // derive
  auto* derive = app.add_subcommand("derive", "Derive a passkey from hotel selections");
  std::optional<std::uint32_t> hotel, floor, room, meal, topping, beverage;
  std::vector<std::string> member_specs;
  std::optional<std::string> pin_flag;
  std::optional<std::uint64_t> m_flag, k_flag;
  std::optional<std::string> dictionary_flag;
  derive->add_option("--hotel", hotel, "Hotel index 1..1214");
  derive->add_option("--floor", floor, "Floor 1..1000");
  derive->add_option("--room", room, "Room 1..500");
  derive->add_option("--meal", meal, "Breakfast meal 1..61");
  derive->add_option("--topping", topping, "Topping 1..14");
  derive->add_option("--beverage", beverage, "Beverage 1..11");
  derive->add_option("--member", member_specs, "Additional member ROLE=hotel,floor,room,meal,topping,beverage")
      ->type_name("ROLE=H,F,R,M,T,B");
  derive->add_option("--pin", pin_flag, "4-character PIN (prefer the prompt)");
  derive->add_option("--m", m_flag, "Multiplier override");
  derive->add_option("--k", k_flag, "Increment override");
  derive->add_option("--dictionary", dictionary_flag, "Dictionary override");

  // generate
  auto* gen = app.add_subcommand("generate", "Generate a random password");
  std::size_t length = 16;
  std::string classes_text = "a,A,0,@";
  std::optional<std::uint64_t> seed;
  bool require_all = false;
  gen->add_option("--length", length, "Length 1..64")->capture_default_str();
  gen->add_option("--classes", classes_text, "Subset of a,A,0,@")->capture_default_str();
  gen->add_option("--seed", seed, "Deterministic seed (testing only)");
  gen->add_flag("--require-all-classes", require_all, "Redraw until every class appears");

  // encrypt
  auto* enc = app.add_subcommand("encrypt", "Encrypt a password under a secret phrase");
  std::optional<std::string> password_flag, phrase_flag;
  bool paper_compatible = false;
  enc->add_option("--password", password_flag, "Password to encrypt (prefer the prompt)");
  enc->add_option("--phrase", phrase_flag, "Secret phrase (prefer the prompt)");
  enc->add_flag("--paper-compatible", paper_compatible, "Omit the HMAC tag");

  // decrypt
  auto* dec = app.add_subcommand("decrypt", "Recover a password from a record");
  std::optional<std::string> record_flag, record_file;
  dec->add_option("--record", record_flag, "Record JSON");
  dec->add_option("--record-file", record_file, "Record file, '-' for stdin");
  dec->add_option("--phrase", phrase_flag, "Secret phrase (prefer the prompt)");

  // vault
  auto* vault_cmd = app.add_subcommand("vault", "Manage the vault file");
  vault_cmd->require_subcommand(1);
  std::string label;
  bool force = false;
  bool decrypt_on_get = false;
  auto* vadd = vault_cmd->add_subcommand("add", "Store a record");
  vadd->add_option("label", label, "Entry label")->required();
  vadd->add_option("--record", record_flag, "Existing record JSON");
  vadd->add_option("--record-file", record_file, "Existing record file, '-' for stdin");
  vadd->add_option("--password", password_flag, "Password to encrypt (prefer the prompt)");
  vadd->add_option("--phrase", phrase_flag, "Secret phrase (prefer the prompt)");
  vadd->add_flag("--paper-compatible", paper_compatible, "Omit the HMAC tag");
  vadd->add_flag("--force", force, "Overwrite an existing label");
  auto* vget = vault_cmd->add_subcommand("get", "Print a stored record");
  vget->add_option("label", label, "Entry label")->required();
  vget->add_flag("--decrypt", decrypt_on_get, "Decrypt and print the password");
  vget->add_option("--phrase", phrase_flag, "Secret phrase (prefer the prompt)");
  auto* vlist = vault_cmd->add_subcommand("list", "List labels");
  auto* vrm = vault_cmd->add_subcommand("rm", "Remove an entry");
  vrm->add_option("label", label, "Entry label")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Run the loopback HTTP service");
  std::string bind = "127.0.0.1";
  int port = kDefaultPort;
  std::optional<std::string> ui_dir;
  serve->add_option("--bind", bind, "Bind address")->capture_default_str();
  serve->add_option("--port", port, "Port")->capture_default_str();
  serve->add_option("--ui-dir", ui_dir, "Static UI directory to serve at /");

  std::vector<std::string> argv_storage{"hector"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? kOk : kUsage;
  }

  auto env_or = [&](const std::string& flag, const char* env, const char* fallback) {
    if (!flag.empty()) return flag;
    if (auto v = io.getenv(env); v && !v->empty()) return *v;
    return std::string(fallback);
  };
  const std::filesystem::path vault_path = env_or(vault_flag, "HECTOR_VAULT", "hector-vault.json");
  const std::filesystem::path data_dir = env_or(data_dir_flag, "HECTOR_DATA_DIR", "data");
  const std::string config_path = env_or(config_flag, "HECTOR_CONFIG", "");

  detail::SecretReader secrets(io, use_stdin);

  auto load_mnemonic_config = [&] {
    MnemonicConfig config = config_path.empty() ? MnemonicConfig{} : load_config(config_path);
    if (m_flag) config.params.multiplier = *m_flag;
    if (k_flag) config.params.increment = *k_flag;
    if (dictionary_flag) config.params.dictionary = *dictionary_flag;
    validate(config.params);
    return config;
  };

  auto read_record = [&]() -> CipherRecord {
    if (record_flag) return record_from_string(*record_flag);
    if (record_file) return record_from_string(detail::read_text_file(*record_file, io.in));
    auto line = secrets.read_line();
    if (!line) throw Error(Errc::invalid_argument, "expected a record on standard input");
    return record_from_string(*line);
  };

  auto encrypt_from_input = [&] {
    const auto plaintext = detail::require_secret(secrets.read(password_flag, "--password", "Password: "), "password");
    const auto phrase = detail::require_secret(secrets.read(phrase_flag, "--phrase", "Secret phrase: "), "secret phrase");
    return encrypt_password(plaintext, phrase, paper_compatible ? RecordMode::paper_compatible : RecordMode::authenticated);
  };

  try {
    if (derive->parsed()) {
      const auto config = load_mnemonic_config();
      Party party;
      const bool any_self = hotel || floor || room || meal || topping || beverage;
      if (any_self) {
        if (!(hotel && floor && room && meal && topping && beverage)) {
          throw Error(Errc::invalid_argument, "--hotel, --floor, --room, --meal, --topping and --beverage go together");
        }
        party.add(Role::self, {*hotel, *floor, *room, *meal, *topping, *beverage});
      }
      for (const auto& spec : member_specs) {
        const auto eq = spec.find('=');
        const auto role = parse_role(eq == std::string::npos ? spec : spec.substr(0, eq));
        if (eq == std::string::npos || !role) {
          throw Error(Errc::invalid_argument, "--member expects ROLE=H,F,R,M,T,B with ROLE one of "
                                              "self, spouse, dad, mom, daughter, son");
        }
        party.add(*role, detail::parse_selection_list(spec.substr(eq + 1)));
      }
      if (party.empty()) throw Error(Errc::invalid_argument, "no selections given (use --hotel ... or --member)");

      auto pin_text = secrets.read(pin_flag, "--pin", "PIN (empty for default): ");
      const auto salt = (!pin_text || pin_text->empty()) ? config.default_salt : SaltPin::parse(*pin_text);
      const auto result = derive_for_party(party, salt, config.params);
      if (json) {
        io.out << Json{{"digit_sequence", result.digits.str()},
                       {"passkey", result.passkey.str()},
                       {"entropy_bits", result.entropy.bits},
                       {"alphabet_size", result.entropy.alphabet_size},
                       {"length", result.entropy.length}}
                      .dump()
               << "\n";
      } else {
        io.out << "passkey: " << result.passkey.str() << "\n"
               << "digits: " << result.digits.str() << "\n"
               << "entropy: " << format_bits(result.entropy.bits) << " bits\n";
      }
    } else if (gen->parsed()) {
      GenerateOptions options;
      options.require_all_classes = require_all;
      const auto mode = seed ? GeneratorMode::seeded(*seed) : GeneratorMode::system();
      const auto password = generate(length, parse_classes(classes_text), mode, options);
      if (json) {
        io.out << Json{{"password", password}, {"length", length}}.dump() << "\n";
      } else {
        io.out << password << "\n";
      }
    } else if (enc->parsed()) {
      const auto record = encrypt_from_input();
      io.out << (json ? Json{{"record", record_to_json(record)}}.dump() : record_to_string(record)) << "\n";
    } else if (dec->parsed()) {
      const auto record = read_record();
      const auto phrase = detail::require_secret(secrets.read(phrase_flag, "--phrase", "Secret phrase: "), "secret phrase");
      const auto plaintext = decrypt_password(record, phrase);
      io.out << (json ? Json{{"plaintext", plaintext}}.dump() : plaintext) << "\n";
    } else if (vadd->parsed()) {
      validate_label(label);
      const auto record = (record_flag || record_file) ? read_record() : encrypt_from_input();
      const auto vault = vault_update(vault_path, [&](Vault& v) { v.add(label, record, force); });
      std::string created_at;
      for (const auto& l : vault.list()) {
        if (l.label == label) created_at = l.created_at;
      }
      if (json) {
        io.out << Json{{"label", label}, {"created_at", created_at}}.dump() << "\n";
      } else {
        io.out << "stored '" << label << "'\n";
      }
    } else if (vget->parsed()) {
      const auto record = vault_load(vault_path).get(label);
      if (decrypt_on_get) {
        const auto phrase = detail::require_secret(secrets.read(phrase_flag, "--phrase", "Secret phrase: "), "secret phrase");
        const auto plaintext = decrypt_password(record, phrase);
        io.out << (json ? Json{{"label", label}, {"plaintext", plaintext}}.dump() : plaintext) << "\n";
      } else {
        io.out << (json ? Json{{"label", label}, {"record", record_to_json(record)}}.dump() : record_to_string(record))
               << "\n";
      }
    } else if (vlist->parsed()) {
      const auto listing = vault_load_or_empty(vault_path).list();
      if (json) {
        Json entries = Json::array();
        for (const auto& l : listing) entries.push_back(Json{{"label", l.label}, {"created_at", l.created_at}});
        io.out << Json{{"entries", entries}}.dump() << "\n";
      } else {
        for (const auto& l : listing) io.out << l.created_at << "  " << l.label << "\n";
      }
    } else if (vrm->parsed()) {
      vault_update(vault_path, [&](Vault& v) { v.remove(label); });
      io.out << (json ? Json{{"removed", label}}.dump() : "removed '" + label + "'") << "\n";
    } else if (serve->parsed()) {
      ServiceOptions options;
      options.bind_address = bind;
      options.port = port;
      options.data_dir = data_dir;
      options.vault_path = vault_path;
      options.config = load_mnemonic_config();
      if (ui_dir) options.ui_dir = *ui_dir;
      options.access_log = [&io](const std::string& line) { io.err << line << "\n"; };
      if (!detail::is_loopback_bind(bind)) {
        io.err << "WARNING: binding " << bind << " exposes passkey derivation and the vault to the network "
               << "without authentication\n";
      }

      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);

      Service service(std::move(options));
      std::thread waiter([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        service.stop();
      });
      io.err << "listening on http://" << bind << ":" << port << "\n";
      try {
        service.listen();
      } catch (...) {
        pthread_kill(waiter.native_handle(), SIGTERM);
        waiter.join();
        throw;
      }
      waiter.join();
      pthread_sigmask(SIG_UNBLOCK, &signals, nullptr);
    }
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    if (json) io.out << Json{{"error", Json{{"code", to_string(e.code())}, {"message", e.what()}}}}.dump() << "\n";
    return exit_code_for(e.code());
  }
  return kOk;
}

}  // namespace hector::cli

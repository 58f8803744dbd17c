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

#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>

#include "hector/error.hpp"
#include "hector/mnemonic.hpp"

namespace hector {

/// Derivation settings read from a `key = value` file. Recognised keys: m,
/// k, dictionary, default_salt. Blank lines and lines starting with '#' are
/// ignored; whitespace around keys and values is trimmed.
struct MnemonicConfig {
  DerivationParams params;
  SaltPin default_salt = SaltPin::default_pin();
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::uint64_t parse_u64(std::string_view text, std::string_view key) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string_view::npos) {
    throw Error(Errc::format, "config: '" + std::string(key) + "' must be a non-negative integer");
  }
  try {
    return std::stoull(std::string(text));
  } catch (const std::out_of_range&) {
    throw Error(Errc::format, "config: '" + std::string(key) + "' does not fit in 64 bits");
  }
}

}  // namespace detail

inline MnemonicConfig parse_config(std::istream& in) {
  MnemonicConfig config;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::format, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key == "m") {
      config.params.multiplier = detail::parse_u64(value, key);
    } else if (key == "k") {
      config.params.increment = detail::parse_u64(value, key);
    } else if (key == "dictionary") {
      if (value.empty()) throw Error(Errc::format, "config: dictionary must not be empty");
      config.params.dictionary = std::string(value);
    } else if (key == "default_salt") {
      try {
        config.default_salt = SaltPin::parse(value);
      } catch (const Error& e) {
        throw Error(Errc::format, std::string("config: default_salt: ") + e.what());
      }
    } else {
      throw Error(Errc::format, "config line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }
  return config;
}

inline MnemonicConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io, "cannot open config file: " + path.string());
  return parse_config(in);
}

}  // namespace hector

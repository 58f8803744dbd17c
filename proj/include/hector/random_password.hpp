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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>

#include "hector/error.hpp"
#include "hector/mnemonic.hpp"
#include "hector/random.hpp"

namespace hector {

inline constexpr std::string_view kLowerClass = "abcdefghijklmnopqrstuvwxyz";
inline constexpr std::string_view kUpperClass = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
inline constexpr std::string_view kDigitClass = "0123456789";
inline constexpr std::string_view kSymbolClass = kSymbolList.substr(62);

inline constexpr std::size_t kMinPasswordLength = 1;
inline constexpr std::size_t kMaxPasswordLength = 64;

struct CharClasses {
  bool lower = false;
  bool upper = false;
  bool digits = false;
  bool symbols = false;

  static CharClasses all() { return {true, true, true, true}; }
  bool any() const noexcept { return lower || upper || digits || symbols; }
  std::size_t count() const noexcept { return lower + upper + digits + symbols; }

  friend bool operator==(const CharClasses&, const CharClasses&) = default;
};

/// Parses a comma-separated subset of the tokens "a", "A", "0", "@".
inline CharClasses parse_classes(std::string_view text) {
  CharClasses out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find(',', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto token = text.substr(pos, end - pos);
    if (token == "a") out.lower = true;
    else if (token == "A") out.upper = true;
    else if (token == "0") out.digits = true;
    else if (token == "@") out.symbols = true;
    else throw Error(Errc::invalid_argument, "unknown character class '" + std::string(token) + "' (use a,A,0,@)");
    pos = end + 1;
  }
  return out;
}

/// Selected classes concatenated in the order lower, upper, digits, symbols.
inline std::string build_charset(const CharClasses& classes) {
  if (!classes.any()) throw Error(Errc::invalid_argument, "select at least one character class");
  std::string out;
  if (classes.lower) out += kLowerClass;
  if (classes.upper) out += kUpperClass;
  if (classes.digits) out += kDigitClass;
  if (classes.symbols) out += kSymbolClass;
  return out;
}

/// Without a seed, draws come from the kernel CSPRNG. With a seed, a
/// std::mt19937_64 seeded with that value drives the draws; intended for
/// reproducible tests only.
struct GeneratorMode {
  std::optional<std::uint64_t> seed;

  static GeneratorMode system() { return {}; }
  static GeneratorMode seeded(std::uint64_t seed) { return {seed}; }
};

struct GenerateOptions {
  std::size_t max_length = kMaxPasswordLength;
  /// Redraw until every selected class occurs at least once.
  bool require_all_classes = false;
};

namespace detail {

template <class Engine>
std::string draw_password(Engine& engine, std::size_t length, std::string_view charset) {
  std::string out(length, '\0');
  for (auto& c : out) c = charset[uniform_index(engine, charset.size())];
  return out;
}

inline bool covers_classes(std::string_view password, const CharClasses& classes) {
  auto has = [&](std::string_view set) {
    return std::any_of(password.begin(), password.end(), [&](char c) { return set.find(c) != set.npos; });
  };
  return (!classes.lower || has(kLowerClass)) && (!classes.upper || has(kUpperClass)) &&
         (!classes.digits || has(kDigitClass)) && (!classes.symbols || has(kSymbolClass));
}

template <class Engine>
std::string generate_with(Engine& engine, std::size_t length, std::string_view charset,
                          const std::optional<CharClasses>& required) {
  for (;;) {
    auto password = draw_password(engine, length, charset);
    if (!required || covers_classes(password, *required)) return password;
  }
}

inline void check_length(std::size_t length, std::size_t max_length) {
  if (length < kMinPasswordLength || length > max_length) {
    throw Error(Errc::out_of_range, "password length must be between 1 and " + std::to_string(max_length));
  }
}

}  // namespace detail

/// Each character is drawn independently and uniformly from `charset`.
inline std::string generate(std::size_t length, std::string_view charset, const GeneratorMode& mode,
                            std::size_t max_length = kMaxPasswordLength) {
  detail::check_length(length, max_length);
  if (charset.empty()) throw Error(Errc::invalid_argument, "charset must not be empty");
  if (mode.seed) {
    std::mt19937_64 engine(*mode.seed);
    return detail::generate_with(engine, length, charset, std::nullopt);
  }
  SystemRandom engine;
  return detail::generate_with(engine, length, charset, std::nullopt);
}

inline std::string generate(std::size_t length, const CharClasses& classes, const GeneratorMode& mode,
                            const GenerateOptions& options = {}) {
  detail::check_length(length, options.max_length);
  const auto charset = build_charset(classes);
  std::optional<CharClasses> required;
  if (options.require_all_classes) {
    if (length < classes.count()) {
      throw Error(Errc::invalid_argument, "length too short to include every selected class");
    }
    required = classes;
  }
  if (mode.seed) {
    std::mt19937_64 engine(*mode.seed);
    return detail::generate_with(engine, length, charset, required);
  }
  SystemRandom engine;
  return detail::generate_with(engine, length, charset, required);
}

}  // namespace hector

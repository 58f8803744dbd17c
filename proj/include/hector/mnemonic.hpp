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
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hector/catalog.hpp"
#include "hector/error.hpp"

// Hotel mnemonic passkeys: six catalog picks per person are encoded into a
// zero-padded digit string, a 4-character PIN is folded into a single linear
// congruential step, and every digit is mapped onto a 93-symbol alphabet.

namespace hector {

/// a-z, A-Z, 0-9, then the keyboard punctuation set (every printable ASCII
/// symbol except the double quote). 93 characters, no repeats.
inline constexpr std::string_view kSymbolList =
    "abcdefghijklmnopqrstuvwxyz"
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "0123456789"
    "!#$%&'()*+,-./:;<=>?@[\\]^_`{|}~";

inline constexpr std::size_t kSymbolCount = 93;
static_assert(kSymbolList.size() == kSymbolCount);

inline constexpr std::uint64_t kDefaultMultiplier = 45;
inline constexpr std::uint64_t kDefaultIncrement = 241;
inline constexpr std::string_view kDefaultSalt = "7391";
inline constexpr std::size_t kDigitsPerPerson = 17;
inline constexpr std::size_t kMaxPartySize = 6;

/// One person's catalog picks, all 1-based.
struct Selection {
  std::uint32_t hotel = 1;
  std::uint32_t floor = 1;
  std::uint32_t room = 1;
  std::uint32_t meal = 1;
  std::uint32_t topping = 1;
  std::uint32_t beverage = 1;

  std::uint32_t get(CatalogKind kind) const {
    switch (kind) {
      case CatalogKind::hotel: return hotel;
      case CatalogKind::floor: return floor;
      case CatalogKind::room: return room;
      case CatalogKind::meal: return meal;
      case CatalogKind::topping: return topping;
      case CatalogKind::beverage: return beverage;
    }
    return 0;
  }

  friend bool operator==(const Selection&, const Selection&) = default;
};

inline void validate(const Selection& sel) {
  for (auto kind : kAllCatalogKinds) {
    const auto value = sel.get(kind);
    const auto max = catalog_shape(kind).cardinality;
    if (value < 1 || value > max) {
      throw Error(Errc::out_of_range, std::string(catalog_name(kind)) + " " + std::to_string(value) +
                                          " outside 1.." + std::to_string(max));
    }
  }
}

// Declaration order is the canonical serialization order.
enum class Role { self, spouse, dad, mom, daughter, son };

inline constexpr std::array<Role, 6> kAllRoles = {Role::self, Role::spouse,   Role::dad,
                                                  Role::mom,  Role::daughter, Role::son};

inline std::string_view role_name(Role role) {
  switch (role) {
    case Role::self: return "self";
    case Role::spouse: return "spouse";
    case Role::dad: return "dad";
    case Role::mom: return "mom";
    case Role::daughter: return "daughter";
    case Role::son: return "son";
  }
  return "";
}

inline std::optional<Role> parse_role(std::string_view text) {
  for (auto role : kAllRoles) {
    if (text == role_name(role)) return role;
  }
  return std::nullopt;
}

/// Up to six people with distinct roles. Members are kept in canonical role
/// order regardless of insertion order.
class Party {
 public:
  Party() = default;
  explicit Party(Selection self) { add(Role::self, self); }

  Party& add(Role role, const Selection& sel) {
    validate(sel);
    auto pos = std::find_if(members_.begin(), members_.end(), [&](const auto& m) { return m.first >= role; });
    if (pos != members_.end() && pos->first == role) {
      throw Error(Errc::invalid_argument, "role '" + std::string(role_name(role)) + "' given twice");
    }
    members_.insert(pos, {role, sel});
    return *this;
  }

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  const std::vector<std::pair<Role, Selection>>& members() const noexcept { return members_; }

 private:
  std::vector<std::pair<Role, Selection>> members_;
};

/// Zero-padded concatenation of catalog indices, 17 digits per person.
class DigitSequence {
 public:
  static DigitSequence parse(std::string digits) {
    if (digits.empty() || digits.size() % kDigitsPerPerson != 0) {
      throw Error(Errc::invalid_argument, "digit sequence length must be a positive multiple of 17");
    }
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(Errc::invalid_argument, "digit sequence may contain only 0-9");
    }
    return DigitSequence(std::move(digits));
  }

  const std::string& str() const noexcept { return digits_; }
  std::size_t size() const noexcept { return digits_.size(); }
  /// Numeric value of the digit at 0-based position i.
  unsigned digit(std::size_t i) const { return static_cast<unsigned>(digits_.at(i) - '0'); }

  friend bool operator==(const DigitSequence&, const DigitSequence&) = default;

 private:
  explicit DigitSequence(std::string digits) : digits_(std::move(digits)) {}
  std::string digits_;
};

/// Exactly four printable, non-space ASCII characters.
class SaltPin {
 public:
  static SaltPin parse(std::string_view text) {
    if (text.size() != 4) throw Error(Errc::invalid_argument, "PIN must be exactly 4 characters");
    for (char c : text) {
      if (c < 0x21 || c > 0x7e) throw Error(Errc::invalid_argument, "PIN characters must be printable ASCII");
    }
    return SaltPin(std::string(text));
  }

  static SaltPin default_pin() { return parse(kDefaultSalt); }

  const std::string& str() const noexcept { return chars_; }

  friend bool operator==(const SaltPin&, const SaltPin&) = default;

 private:
  explicit SaltPin(std::string chars) : chars_(std::move(chars)) {}
  std::string chars_;
};

inline std::string default_dictionary() { return std::string(kSymbolList.rbegin(), kSymbolList.rend()); }

struct DerivationParams {
  std::uint64_t multiplier = kDefaultMultiplier;
  std::uint64_t increment = kDefaultIncrement;
  /// Secret offset string; positions wrap modulo its length.
  std::string dictionary = default_dictionary();
  std::string symbol_list = std::string(kSymbolList);
};

inline void validate(const DerivationParams& params) {
  if (params.dictionary.empty()) throw Error(Errc::invalid_argument, "dictionary must not be empty");
  if (params.symbol_list.size() != kSymbolCount) {
    throw Error(Errc::invalid_argument, "symbol list must have exactly 93 characters");
  }
  std::unordered_set<char> seen(params.symbol_list.begin(), params.symbol_list.end());
  if (seen.size() != kSymbolCount) throw Error(Errc::invalid_argument, "symbol list characters must be distinct");
}

struct MixState {
  std::uint64_t x0 = 0;
  std::uint64_t x1 = 0;
};

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw Error(Errc::overflow, "derivation arithmetic overflows 64 bits");
  return out;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw Error(Errc::overflow, "derivation arithmetic overflows 64 bits");
  return out;
}

}  // namespace detail

inline DigitSequence encode_selection(const Selection& sel) {
  validate(sel);
  std::string digits;
  digits.reserve(kDigitsPerPerson);
  for (auto kind : kAllCatalogKinds) digits += detail::zero_pad(sel.get(kind), catalog_shape(kind).digit_width);
  return DigitSequence::parse(std::move(digits));
}

inline DigitSequence encode_party(const Party& party) {
  if (party.empty()) throw Error(Errc::invalid_argument, "party has no members");
  std::string digits;
  for (const auto& [role, sel] : party.members()) digits += encode_selection(sel).str();
  return DigitSequence::parse(std::move(digits));
}

/// X0 = sum of ascii(salt[j]) * 10^j for j = 1..4.
inline std::uint64_t salt_to_x0(const SaltPin& salt) {
  std::uint64_t x0 = 0;
  std::uint64_t weight = 10;
  for (char c : salt.str()) {
    x0 += static_cast<unsigned char>(c) * weight;
    weight *= 10;
  }
  return x0;
}

/// X1 = (m * X0 + k) mod L2, where L2 is the dictionary length.
inline MixState lcg_mix(std::uint64_t x0, const DerivationParams& params) {
  if (params.dictionary.empty()) throw Error(Errc::invalid_argument, "dictionary must not be empty");
  const auto modulus = static_cast<std::uint64_t>(params.dictionary.size());
  const auto raw = detail::checked_add(detail::checked_mul(params.multiplier, x0), params.increment);
  return {x0, raw % modulus};
}

class Passkey {
 public:
  explicit Passkey(std::string chars) : chars_(std::move(chars)) {}
  const std::string& str() const noexcept { return chars_; }
  std::size_t size() const noexcept { return chars_.size(); }

  friend bool operator==(const Passkey&, const Passkey&) = default;

 private:
  std::string chars_;
};

/// out[i] = SL[(X1 + digit[i] + dictionary[i mod L2]) mod 93].
inline Passkey derive_passkey(const DigitSequence& seq, const SaltPin& salt, const DerivationParams& params) {
  validate(params);
  const auto mix = lcg_mix(salt_to_x0(salt), params);
  const auto dict_len = params.dictionary.size();
  std::string out(seq.size(), '\0');
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto dict_code = static_cast<unsigned char>(params.dictionary[i % dict_len]);
    const auto sum = detail::checked_add(detail::checked_add(mix.x1, seq.digit(i)), dict_code);
    out[i] = params.symbol_list[sum % kSymbolCount];
  }
  return Passkey(std::move(out));
}

struct EntropyReport {
  std::uint64_t alphabet_size = 0;
  std::uint64_t length = 0;
  double bits = 0.0;
};

/// H = log2(N^L), evaluated as L * log2(N) so large L stays finite.
inline EntropyReport entropy(std::uint64_t alphabet_size, std::uint64_t length) {
  if (alphabet_size < 2) throw Error(Errc::invalid_argument, "entropy needs an alphabet of at least 2 symbols");
  if (length < 1) throw Error(Errc::invalid_argument, "entropy needs a length of at least 1");
  return {alphabet_size, length, static_cast<double>(length) * std::log2(static_cast<double>(alphabet_size))};
}

/// Bits truncated (not rounded) to three decimals, the way the reference
/// figures are quoted: 17 symbols over 93 prints as "111.165".
inline std::string format_bits(double bits) {
  const auto millis = static_cast<std::uint64_t>(std::floor(bits * 1000.0 + 1e-9));
  std::string frac = std::to_string(millis % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return std::to_string(millis / 1000) + "." + frac;
}

struct PasskeyResult {
  DigitSequence digits;
  Passkey passkey;
  EntropyReport entropy;
};

/// Full pipeline: encode the party, derive, and report entropy over the
/// symbol alphabet.
inline PasskeyResult derive_for_party(const Party& party, const SaltPin& salt, const DerivationParams& params) {
  auto digits = encode_party(party);
  auto passkey = derive_passkey(digits, salt, params);
  auto report = entropy(kSymbolCount, digits.size());
  return {std::move(digits), std::move(passkey), report};
}

}  // namespace hector

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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hector/base64.hpp"
#include "hector/crypto/aes256.hpp"
#include "hector/crypto/cbc.hpp"
#include "hector/crypto/hmac.hpp"
#include "hector/crypto/sha256.hpp"
#include "hector/error.hpp"
#include "hector/random.hpp"
#include "hector/utf8.hpp"

// Hash-then-encrypt storage of one password. The secret phrase is hashed
// once with SHA-256 to form the AES-256 key; the password is encrypted with
// AES-256-CBC under a fresh IV. Authenticated records add HMAC-SHA-256 over
// iv || ciphertext with a key derived from the encryption key.

namespace hector {

inline constexpr int kRecordVersion = 1;
inline constexpr std::string_view kCipherId = "aes-256-cbc";
inline constexpr std::string_view kKdfId = "sha-256";
inline constexpr std::string_view kMacId = "hmac-sha-256";
inline constexpr std::string_view kNoMacId = "none";
inline constexpr std::size_t kMaxPlaintextBytes = 1024;

enum class RecordMode {
  authenticated,
  /// No MAC; a wrong phrase surfaces only as a padding failure or garbage.
  paper_compatible,
};

struct CipherRecord {
  int version = kRecordVersion;
  RecordMode mode = RecordMode::authenticated;
  crypto::Block128 iv{};
  std::vector<std::uint8_t> ciphertext;
  std::optional<crypto::Digest256> tag;

  std::string_view mac_id() const { return mode == RecordMode::authenticated ? kMacId : kNoMacId; }

  friend bool operator==(const CipherRecord&, const CipherRecord&) = default;
};

inline void validate(const CipherRecord& record) {
  if (record.version != kRecordVersion) {
    throw Error(Errc::format, "unsupported record version " + std::to_string(record.version));
  }
  if (record.ciphertext.empty() || record.ciphertext.size() % crypto::kBlockSize != 0) {
    throw Error(Errc::format, "ciphertext length must be a positive multiple of 16");
  }
  if ((record.mode == RecordMode::authenticated) != record.tag.has_value()) {
    throw Error(Errc::format, "tag must be present exactly when the record is authenticated");
  }
}

struct KeyPair {
  crypto::AesKey256 enc_key;
  crypto::Digest256 mac_key;
};

/// enc_key = SHA-256(phrase), mac_key = SHA-256(enc_key || "mac").
inline KeyPair derive_keys(std::string_view secret_phrase) {
  if (secret_phrase.empty()) throw Error(Errc::invalid_argument, "secret phrase must not be empty");
  if (!is_valid_utf8(secret_phrase)) throw Error(Errc::invalid_argument, "secret phrase must be valid UTF-8");
  KeyPair keys;
  keys.enc_key = crypto::sha256(secret_phrase);
  keys.mac_key = crypto::Sha256().update(keys.enc_key).update(std::string_view("mac")).finish();
  return keys;
}

namespace detail {

inline std::vector<std::uint8_t> mac_input(const CipherRecord& record) {
  std::vector<std::uint8_t> data(record.iv.begin(), record.iv.end());
  data.insert(data.end(), record.ciphertext.begin(), record.ciphertext.end());
  return data;
}

}  // namespace detail

/// Same as encrypt_password but with a caller-chosen IV. Reusing an IV under
/// one phrase leaks plaintext equality; use only for reproducible vectors.
inline CipherRecord encrypt_password_with_iv(std::string_view plaintext, std::string_view secret_phrase,
                                             RecordMode mode, const crypto::Block128& iv) {
  if (plaintext.empty()) throw Error(Errc::invalid_argument, "plaintext must not be empty");
  if (plaintext.size() > kMaxPlaintextBytes) throw Error(Errc::invalid_argument, "plaintext exceeds 1024 bytes");
  if (!is_valid_utf8(plaintext)) throw Error(Errc::invalid_argument, "plaintext must be valid UTF-8");
  const auto keys = derive_keys(secret_phrase);
  const crypto::Aes256KeySchedule schedule(keys.enc_key);

  CipherRecord record;
  record.mode = mode;
  record.iv = iv;
  record.ciphertext = crypto::cbc_encrypt(crypto::pkcs7_pad(crypto::as_bytes(plaintext)), iv, schedule);
  if (mode == RecordMode::authenticated) record.tag = crypto::hmac_sha256(keys.mac_key, detail::mac_input(record));
  return record;
}

inline CipherRecord encrypt_password(std::string_view plaintext, std::string_view secret_phrase,
                                     RecordMode mode = RecordMode::authenticated) {
  crypto::Block128 iv;
  fill_random(iv);
  return encrypt_password_with_iv(plaintext, secret_phrase, mode, iv);
}

/// Authenticated records are verified (constant time) before any block is
/// decrypted.
inline std::string decrypt_password(const CipherRecord& record, std::string_view secret_phrase) {
  validate(record);
  const auto keys = derive_keys(secret_phrase);
  if (record.mode == RecordMode::authenticated) {
    const auto expected = crypto::hmac_sha256(keys.mac_key, detail::mac_input(record));
    if (!crypto::constant_time_equal(expected, *record.tag)) {
      throw Error(Errc::authentication, "authentication failed: wrong phrase or tampered record");
    }
  }
  const crypto::Aes256KeySchedule schedule(keys.enc_key);
  const auto padded = crypto::cbc_decrypt(record.ciphertext, record.iv, schedule);
  const auto plain = crypto::pkcs7_unpad(padded);
  std::string out(plain.begin(), plain.end());
  if (!is_valid_utf8(out)) throw Error(Errc::integrity, "decrypted data is not valid UTF-8");
  return out;
}

/// Wire form: {"v":1,"cipher":"aes-256-cbc","kdf":"sha-256","mac":...,"iv":...,"ct":...,"tag":...}
inline nlohmann::ordered_json record_to_json(const CipherRecord& record) {
  nlohmann::ordered_json j;
  j["v"] = record.version;
  j["cipher"] = kCipherId;
  j["kdf"] = kKdfId;
  j["mac"] = record.mac_id();
  j["iv"] = base64_encode(record.iv);
  j["ct"] = base64_encode(record.ciphertext);
  if (record.tag) j["tag"] = base64_encode(*record.tag);
  return j;
}

template <class Json>
CipherRecord record_from_json(const Json& j) {
  auto bad = [](const std::string& why) { return Error(Errc::format, "malformed record: " + why); };
  if (!j.is_object()) throw bad("expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "v" && key != "cipher" && key != "kdf" && key != "mac" && key != "iv" && key != "ct" && key != "tag") {
      throw bad("unknown field '" + key + "'");
    }
  }
  auto text = [&](const char* key) -> std::string {
    if (!j.contains(key) || !j.at(key).is_string()) throw bad(std::string("missing string field '") + key + "'");
    return j.at(key).template get<std::string>();
  };
  if (!j.contains("v") || !j.at("v").is_number_integer()) throw bad("missing integer field 'v'");

  CipherRecord record;
  record.version = j.at("v").template get<int>();
  if (record.version != kRecordVersion) throw bad("unsupported version " + std::to_string(record.version));
  if (text("cipher") != kCipherId) throw bad("unsupported cipher");
  if (text("kdf") != kKdfId) throw bad("unsupported kdf");
  const auto mac = text("mac");
  if (mac == kMacId) {
    record.mode = RecordMode::authenticated;
  } else if (mac == kNoMacId) {
    record.mode = RecordMode::paper_compatible;
  } else {
    throw bad("unsupported mac");
  }

  const auto iv = base64_decode(text("iv"));
  if (iv.size() != record.iv.size()) throw bad("iv must be 16 bytes");
  std::copy(iv.begin(), iv.end(), record.iv.begin());
  record.ciphertext = base64_decode(text("ct"));

  if (record.mode == RecordMode::authenticated) {
    const auto tag = base64_decode(text("tag"));
    crypto::Digest256 digest;
    if (tag.size() != digest.size()) throw bad("tag must be 32 bytes");
    std::copy(tag.begin(), tag.end(), digest.begin());
    record.tag = digest;
  } else if (j.contains("tag")) {
    throw bad("tag present on an unauthenticated record");
  }
  validate(record);
  return record;
}

inline std::string record_to_string(const CipherRecord& record) { return record_to_json(record).dump(); }

inline CipherRecord record_from_string(std::string_view text) {
  auto j = nlohmann::ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::format, "malformed record: not valid JSON");
  return record_from_json(j);
}

}  // namespace hector

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
#include <cstddef>
#include <cstdint>
#include <span>

// AES-256 (FIPS-197): 32-byte key, 16-byte block, 14 rounds, 60-word
// (240-byte) expanded key.

namespace hector::crypto {

using Block128 = std::array<std::uint8_t, 16>;
using AesKey256 = std::array<std::uint8_t, 32>;

namespace aes_detail {

constexpr std::uint8_t xtime(std::uint8_t x) { return static_cast<std::uint8_t>((x << 1) ^ ((x & 0x80) ? 0x1b : 0)); }

constexpr std::uint8_t gmul(std::uint8_t a, std::uint8_t b) {
  std::uint8_t out = 0;
  while (b) {
    if (b & 1) out ^= a;
    a = xtime(a);
    b >>= 1;
  }
  return out;
}

constexpr std::array<std::uint8_t, 256> make_sbox() {
  std::array<std::uint8_t, 256> box{};
  for (int x = 0; x < 256; ++x) {
    // Multiplicative inverse as x^254; 0 maps to 0.
    std::uint8_t inv = 1;
    for (int i = 0; i < 254; ++i) inv = gmul(inv, static_cast<std::uint8_t>(x));
    if (x == 0) inv = 0;
    std::uint8_t s = inv;
    for (int r = 1; r <= 4; ++r) s ^= static_cast<std::uint8_t>((inv << r) | (inv >> (8 - r)));
    box[x] = s ^ 0x63;
  }
  return box;
}

constexpr std::array<std::uint8_t, 256> invert(const std::array<std::uint8_t, 256>& box) {
  std::array<std::uint8_t, 256> inv{};
  for (int i = 0; i < 256; ++i) inv[box[i]] = static_cast<std::uint8_t>(i);
  return inv;
}

inline constexpr auto kSbox = make_sbox();
inline constexpr auto kInvSbox = invert(kSbox);
static_assert(kSbox[0x00] == 0x63 && kSbox[0x53] == 0xed && kSbox[0xff] == 0x16);

using State = std::array<std::uint8_t, 16>;  // column-major, as in the standard

inline void add_round_key(State& s, const std::uint32_t* words) {
  for (int c = 0; c < 4; ++c) {
    s[4 * c] ^= static_cast<std::uint8_t>(words[c] >> 24);
    s[4 * c + 1] ^= static_cast<std::uint8_t>(words[c] >> 16);
    s[4 * c + 2] ^= static_cast<std::uint8_t>(words[c] >> 8);
    s[4 * c + 3] ^= static_cast<std::uint8_t>(words[c]);
  }
}

inline void sub_bytes(State& s, const std::array<std::uint8_t, 256>& box) {
  for (auto& b : s) b = box[b];
}

inline void shift_rows(State& s) {
  State t = s;
  for (int r = 1; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) s[4 * c + r] = t[4 * ((c + r) % 4) + r];
  }
}

inline void inv_shift_rows(State& s) {
  State t = s;
  for (int r = 1; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) s[4 * ((c + r) % 4) + r] = t[4 * c + r];
  }
}

inline void mix_columns(State& s) {
  for (int c = 0; c < 4; ++c) {
    std::uint8_t* col = &s[4 * c];
    const std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
    col[0] = gmul(a0, 2) ^ gmul(a1, 3) ^ a2 ^ a3;
    col[1] = a0 ^ gmul(a1, 2) ^ gmul(a2, 3) ^ a3;
    col[2] = a0 ^ a1 ^ gmul(a2, 2) ^ gmul(a3, 3);
    col[3] = gmul(a0, 3) ^ a1 ^ a2 ^ gmul(a3, 2);
  }
}

inline void inv_mix_columns(State& s) {
  for (int c = 0; c < 4; ++c) {
    std::uint8_t* col = &s[4 * c];
    const std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
    col[0] = gmul(a0, 14) ^ gmul(a1, 11) ^ gmul(a2, 13) ^ gmul(a3, 9);
    col[1] = gmul(a0, 9) ^ gmul(a1, 14) ^ gmul(a2, 11) ^ gmul(a3, 13);
    col[2] = gmul(a0, 13) ^ gmul(a1, 9) ^ gmul(a2, 14) ^ gmul(a3, 11);
    col[3] = gmul(a0, 11) ^ gmul(a1, 13) ^ gmul(a2, 9) ^ gmul(a3, 14);
  }
}

inline std::uint32_t sub_word(std::uint32_t w) {
  return (std::uint32_t{kSbox[w >> 24]} << 24) | (std::uint32_t{kSbox[(w >> 16) & 0xff]} << 16) |
         (std::uint32_t{kSbox[(w >> 8) & 0xff]} << 8) | std::uint32_t{kSbox[w & 0xff]};
}

}  // namespace aes_detail

/// Expanded AES-256 key: 15 round keys of 4 words each.
class Aes256KeySchedule {
 public:
  static constexpr int kRounds = 14;
  static constexpr std::size_t kWords = 4 * (kRounds + 1);  // 60

  explicit Aes256KeySchedule(std::span<const std::uint8_t, 32> key) {
    constexpr int nk = 8;
    for (int i = 0; i < nk; ++i) {
      words_[i] = (std::uint32_t{key[4 * i]} << 24) | (std::uint32_t{key[4 * i + 1]} << 16) |
                  (std::uint32_t{key[4 * i + 2]} << 8) | std::uint32_t{key[4 * i + 3]};
    }
    std::uint8_t rcon = 0x01;
    for (std::size_t i = nk; i < kWords; ++i) {
      std::uint32_t temp = words_[i - 1];
      if (i % nk == 0) {
        temp = aes_detail::sub_word((temp << 8) | (temp >> 24)) ^ (std::uint32_t{rcon} << 24);
        rcon = aes_detail::xtime(rcon);
      } else if (i % nk == 4) {
        temp = aes_detail::sub_word(temp);
      }
      words_[i] = words_[i - nk] ^ temp;
    }
  }

  const std::array<std::uint32_t, kWords>& words() const noexcept { return words_; }
  /// Round key r (0..14) as 4 words.
  const std::uint32_t* round_key(int r) const { return &words_[4 * static_cast<std::size_t>(r)]; }

  friend bool operator==(const Aes256KeySchedule&, const Aes256KeySchedule&) = default;

 private:
  std::array<std::uint32_t, kWords> words_{};
};

inline Aes256KeySchedule aes256_expand_key(std::span<const std::uint8_t, 32> key) { return Aes256KeySchedule(key); }

inline Block128 aes256_encrypt_block(const Block128& block, const Aes256KeySchedule& schedule) {
  using namespace aes_detail;
  State s = block;
  add_round_key(s, schedule.round_key(0));
  for (int round = 1; round < Aes256KeySchedule::kRounds; ++round) {
    sub_bytes(s, kSbox);
    shift_rows(s);
    mix_columns(s);
    add_round_key(s, schedule.round_key(round));
  }
  sub_bytes(s, kSbox);
  shift_rows(s);
  add_round_key(s, schedule.round_key(Aes256KeySchedule::kRounds));
  return s;
}

inline Block128 aes256_decrypt_block(const Block128& block, const Aes256KeySchedule& schedule) {
  using namespace aes_detail;
  State s = block;
  add_round_key(s, schedule.round_key(Aes256KeySchedule::kRounds));
  for (int round = Aes256KeySchedule::kRounds - 1; round > 0; --round) {
    inv_shift_rows(s);
    sub_bytes(s, kInvSbox);
    add_round_key(s, schedule.round_key(round));
    inv_mix_columns(s);
  }
  inv_shift_rows(s);
  sub_bytes(s, kInvSbox);
  add_round_key(s, schedule.round_key(0));
  return s;
}

}  // namespace hector::crypto

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

#include <cstdint>
#include <span>
#include <vector>

#include "hector/crypto/aes256.hpp"
#include "hector/error.hpp"

namespace hector::crypto {

inline constexpr std::size_t kBlockSize = 16;

/// Always appends 1..16 bytes, each equal to the pad length.
inline std::vector<std::uint8_t> pkcs7_pad(std::span<const std::uint8_t> data) {
  const auto pad = static_cast<std::uint8_t>(kBlockSize - data.size() % kBlockSize);
  std::vector<std::uint8_t> out(data.begin(), data.end());
  out.insert(out.end(), pad, pad);
  return out;
}

inline std::vector<std::uint8_t> pkcs7_unpad(std::span<const std::uint8_t> data) {
  if (data.empty() || data.size() % kBlockSize != 0) {
    throw Error(Errc::integrity, "padded data must be a positive multiple of 16 bytes");
  }
  const std::uint8_t pad = data.back();
  if (pad == 0 || pad > kBlockSize) throw Error(Errc::integrity, "invalid padding");
  for (std::size_t i = data.size() - pad; i < data.size(); ++i) {
    if (data[i] != pad) throw Error(Errc::integrity, "invalid padding");
  }
  return {data.begin(), data.end() - pad};
}

/// CBC over whole blocks; `data` must already be padded.
inline std::vector<std::uint8_t> cbc_encrypt(std::span<const std::uint8_t> data, const Block128& iv,
                                             const Aes256KeySchedule& schedule) {
  if (data.size() % kBlockSize != 0) throw Error(Errc::invalid_argument, "CBC input must be block aligned");
  std::vector<std::uint8_t> out(data.size());
  Block128 chain = iv;
  for (std::size_t off = 0; off < data.size(); off += kBlockSize) {
    Block128 block;
    for (std::size_t i = 0; i < kBlockSize; ++i) block[i] = data[off + i] ^ chain[i];
    chain = aes256_encrypt_block(block, schedule);
    std::copy(chain.begin(), chain.end(), out.begin() + static_cast<std::ptrdiff_t>(off));
  }
  return out;
}

inline std::vector<std::uint8_t> cbc_decrypt(std::span<const std::uint8_t> data, const Block128& iv,
                                             const Aes256KeySchedule& schedule) {
  if (data.size() % kBlockSize != 0) throw Error(Errc::format, "ciphertext must be block aligned");
  std::vector<std::uint8_t> out(data.size());
  Block128 chain = iv;
  for (std::size_t off = 0; off < data.size(); off += kBlockSize) {
    Block128 block;
    std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(off), kBlockSize, block.begin());
    const auto plain = aes256_decrypt_block(block, schedule);
    for (std::size_t i = 0; i < kBlockSize; ++i) out[off + i] = plain[i] ^ chain[i];
    chain = block;
  }
  return out;
}

}  // namespace hector::crypto

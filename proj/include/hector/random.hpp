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

#include <sys/random.h>

#include <cerrno>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

#include "hector/error.hpp"

namespace hector {

/// Fills `out` from the kernel CSPRNG (getrandom). Throws on failure rather
/// than falling back to anything weaker.
inline void fill_random(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    const auto n = ::getrandom(out.data() + done, out.size() - done, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(Errc::randomness, "getrandom failed");
    }
    done += static_cast<std::size_t>(n);
  }
}

/// UniformRandomBitGenerator backed by fill_random.
class SystemRandom {
 public:
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    result_type value = 0;
    fill_random({reinterpret_cast<std::uint8_t*>(&value), sizeof(value)});
    return value;
  }
};

/// Unbiased draw from [0, bound) by rejecting the low 2^64 mod bound values.
template <class Engine>
std::uint64_t uniform_index(Engine& engine, std::uint64_t bound) {
  static_assert(Engine::min() == 0 && Engine::max() == std::numeric_limits<std::uint64_t>::max(),
                "engine must produce full 64-bit words");
  if (bound == 0) throw Error(Errc::invalid_argument, "uniform_index bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine();
    if (x >= threshold) return x % bound;
  }
}

}  // namespace hector

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

#include <stdexcept>
#include <string>
#include <string_view>

namespace hector {

enum class Errc {
  invalid_argument,
  out_of_range,
  format,
  io,
  authentication,
  integrity,
  not_found,
  conflict,
  overflow,
  randomness,
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::out_of_range: return "out_of_range";
    case Errc::format: return "format";
    case Errc::io: return "io";
    case Errc::authentication: return "authentication";
    case Errc::integrity: return "integrity";
    case Errc::not_found: return "not_found";
    case Errc::conflict: return "conflict";
    case Errc::overflow: return "overflow";
    case Errc::randomness: return "randomness";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the Errc codes so the
/// CLI and the service can map it to an exit code or HTTP status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace hector

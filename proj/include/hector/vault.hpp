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

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "hector/error.hpp"
#include "hector/record.hpp"
#include "hector/utf8.hpp"

namespace hector {

inline constexpr int kVaultVersion = 1;
inline constexpr std::size_t kMaxLabelLength = 128;

inline std::string utc_now_iso8601() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  ::gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// 1..128 code points of valid UTF-8 with no control characters.
inline void validate_label(std::string_view label) {
  const auto length = utf8_length(label);
  if (!length) throw Error(Errc::invalid_argument, "label must be valid UTF-8");
  if (*length < 1 || *length > kMaxLabelLength) throw Error(Errc::invalid_argument, "label must be 1..128 characters");
  for (char c : label) {
    const auto u = static_cast<unsigned char>(c);
    if (u < 0x20 || u == 0x7f) throw Error(Errc::invalid_argument, "label must not contain control characters");
  }
}

struct VaultEntry {
  std::string label;
  std::string created_at;
  CipherRecord record;

  friend bool operator==(const VaultEntry&, const VaultEntry&) = default;
};

struct VaultListing {
  std::string label;
  std::string created_at;
};

/// Labeled records, in insertion order. Holds ciphertext only.
class Vault {
 public:
  const std::vector<VaultEntry>& entries() const noexcept { return entries_; }

  bool contains(std::string_view label) const { return find(label) != entries_.end(); }

  /// With `force`, an existing entry of the same label is replaced in place.
  Vault& add(std::string label, CipherRecord record, bool force = false, std::string created_at = utc_now_iso8601()) {
    validate_label(label);
    validate(record);
    VaultEntry entry{std::move(label), std::move(created_at), std::move(record)};
    auto it = find(entry.label);
    if (it != entries_.end()) {
      if (!force) throw Error(Errc::conflict, "label '" + entry.label + "' already exists");
      *it = std::move(entry);
    } else {
      entries_.push_back(std::move(entry));
    }
    return *this;
  }

  const CipherRecord& get(std::string_view label) const {
    auto it = find(label);
    if (it == entries_.end()) throw Error(Errc::not_found, "no entry labeled '" + std::string(label) + "'");
    return it->record;
  }

  std::vector<VaultListing> list() const {
    std::vector<VaultListing> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back({e.label, e.created_at});
    return out;
  }

  Vault& remove(std::string_view label) {
    auto it = find(label);
    if (it == entries_.end()) throw Error(Errc::not_found, "no entry labeled '" + std::string(label) + "'");
    entries_.erase(it);
    return *this;
  }

  friend bool operator==(const Vault&, const Vault&) = default;

 private:
  std::vector<VaultEntry>::const_iterator find(std::string_view label) const {
    return std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.label == label; });
  }
  std::vector<VaultEntry>::iterator find(std::string_view label) {
    return std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.label == label; });
  }

  std::vector<VaultEntry> entries_;
};

inline nlohmann::ordered_json vault_to_json(const Vault& vault) {
  nlohmann::ordered_json j;
  j["version"] = kVaultVersion;
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : vault.entries()) {
    nlohmann::ordered_json entry;
    entry["label"] = e.label;
    entry["created_at"] = e.created_at;
    entry["record"] = record_to_json(e.record);
    j["entries"].push_back(std::move(entry));
  }
  return j;
}

inline Vault vault_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object() || !j.contains("version") || !j.at("version").is_number_integer()) {
    throw Error(Errc::format, "vault: missing integer 'version'");
  }
  if (j.at("version").get<int>() != kVaultVersion) {
    throw Error(Errc::format, "vault: unsupported version " + std::to_string(j.at("version").get<int>()));
  }
  if (!j.contains("entries") || !j.at("entries").is_array()) throw Error(Errc::format, "vault: missing 'entries' array");
  Vault vault;
  for (const auto& e : j.at("entries")) {
    if (!e.is_object() || !e.contains("label") || !e.at("label").is_string() || !e.contains("created_at") ||
        !e.at("created_at").is_string() || !e.contains("record")) {
      throw Error(Errc::format, "vault: malformed entry");
    }
    try {
      vault.add(e.at("label").get<std::string>(), record_from_json(e.at("record")), false,
                e.at("created_at").get<std::string>());
    } catch (const Error& err) {
      if (err.code() == Errc::conflict) throw Error(Errc::format, std::string("vault: ") + err.what());
      throw;
    }
  }
  return vault;
}

inline std::string vault_to_string(const Vault& vault) { return vault_to_json(vault).dump(2) + "\n"; }

inline Vault vault_from_string(std::string_view text) {
  auto j = nlohmann::ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(Errc::format, "vault: not valid JSON");
  return vault_from_json(j);
}

inline Vault vault_load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open vault: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return vault_from_string(buf.str());
}

/// A missing file reads as an empty vault.
inline Vault vault_load_or_empty(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) return {};
  return vault_load(path);
}

/// Called with the running byte count after each chunk reaches the temporary
/// file. Throwing from it aborts the save; tests use this to simulate a crash
/// mid-write.
using WriteProgressHook = std::function<void(std::size_t bytes_written)>;

namespace detail {

class FileDescriptor {
 public:
  explicit FileDescriptor(int fd) : fd_(fd) {}
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;
  ~FileDescriptor() {
    if (fd_ >= 0) ::close(fd_);
  }
  int get() const noexcept { return fd_; }
  int release() noexcept { return std::exchange(fd_, -1); }

 private:
  int fd_;
};

inline Error io_error(const std::string& what) { return Error(Errc::io, what + ": " + std::strerror(errno)); }

/// Writes `contents` to a sibling temporary file, fsyncs it, then renames it
/// over `path`. The target is never opened for writing.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents,
                              const WriteProgressHook& hook = {}, std::size_t chunk = 4096) {
  auto tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  FileDescriptor fd(::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0600));
  if (fd.get() < 0) throw io_error("cannot create " + tmp.string());
  try {
    std::size_t written = 0;
    while (written < contents.size()) {
      const auto n = ::write(fd.get(), contents.data() + written, std::min(chunk, contents.size() - written));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw io_error("write failed on " + tmp.string());
      }
      written += static_cast<std::size_t>(n);
      if (hook) hook(written);
    }
    if (::fsync(fd.get()) != 0) throw io_error("fsync failed on " + tmp.string());
    if (::close(fd.release()) != 0) throw io_error("close failed on " + tmp.string());
    if (::rename(tmp.c_str(), path.c_str()) != 0) throw io_error("rename failed for " + path.string());
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw;
  }
  auto dir = path.parent_path();
  if (dir.empty()) dir = ".";
  FileDescriptor dir_fd(::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC));
  if (dir_fd.get() >= 0) ::fsync(dir_fd.get());
}

}  // namespace detail

inline void vault_save(const Vault& vault, const std::filesystem::path& path, const WriteProgressHook& hook = {}) {
  detail::write_file_atomic(path, vault_to_string(vault), hook);
}

/// Exclusive advisory lock on `<vault>.lock`, held for the object's lifetime.
/// Mutating callers take it around load-modify-save.
class VaultLock {
 public:
  explicit VaultLock(const std::filesystem::path& vault_path) {
    auto lock_path = vault_path;
    lock_path += ".lock";
    fd_ = ::open(lock_path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0600);
    if (fd_ < 0) throw detail::io_error("cannot open lock file " + lock_path.string());
    while (::flock(fd_, LOCK_EX) != 0) {
      if (errno != EINTR) {
        ::close(fd_);
        throw detail::io_error("cannot lock " + lock_path.string());
      }
    }
  }
  VaultLock(const VaultLock&) = delete;
  VaultLock& operator=(const VaultLock&) = delete;
  ~VaultLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }

 private:
  int fd_ = -1;
};

/// Lock, load (missing file = empty), apply `mutate`, save.
template <class Fn>
Vault vault_update(const std::filesystem::path& path, Fn&& mutate) {
  VaultLock lock(path);
  Vault vault = vault_load_or_empty(path);
  std::forward<Fn>(mutate)(vault);
  vault_save(vault, path);
  return vault;
}

}  // namespace hector

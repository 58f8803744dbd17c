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
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "hector/error.hpp"

namespace hector {

enum class CatalogKind { hotel, floor, room, meal, topping, beverage };

inline constexpr std::array<CatalogKind, 6> kAllCatalogKinds = {
    CatalogKind::hotel, CatalogKind::floor,   CatalogKind::room,
    CatalogKind::meal,  CatalogKind::topping, CatalogKind::beverage};

struct CatalogShape {
  std::size_t cardinality;
  std::size_t digit_width;
};

constexpr CatalogShape catalog_shape(CatalogKind kind) {
  switch (kind) {
    case CatalogKind::hotel: return {1214, 4};
    case CatalogKind::floor: return {1000, 4};
    case CatalogKind::room: return {500, 3};
    case CatalogKind::meal: return {61, 2};
    case CatalogKind::topping: return {14, 2};
    case CatalogKind::beverage: return {11, 2};
  }
  return {0, 0};
}

inline std::string_view catalog_name(CatalogKind kind) {
  switch (kind) {
    case CatalogKind::hotel: return "hotel";
    case CatalogKind::floor: return "floor";
    case CatalogKind::room: return "room";
    case CatalogKind::meal: return "meal";
    case CatalogKind::topping: return "topping";
    case CatalogKind::beverage: return "beverage";
  }
  return "";
}

/// Plural form, used for file names and service routes ("hotels.csv",
/// "/api/catalog/hotels").
inline std::string catalog_plural(CatalogKind kind) { return std::string(catalog_name(kind)) + "s"; }

inline std::optional<CatalogKind> parse_catalog_kind(std::string_view text) {
  for (auto kind : kAllCatalogKinds) {
    if (text == catalog_name(kind) || text == catalog_plural(kind)) return kind;
  }
  return std::nullopt;
}

/// Floors and rooms are plain numbers and need no data file.
constexpr bool is_numeric_catalog(CatalogKind kind) {
  return kind == CatalogKind::floor || kind == CatalogKind::room;
}

struct CatalogEntry {
  std::size_t index = 0;  // 1-based
  std::string name;

  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

class Catalog {
 public:
  /// Validates cardinality, contiguity and name uniqueness. Entries must be
  /// given in index order.
  Catalog(CatalogKind kind, std::vector<CatalogEntry> entries) : kind_(kind), entries_(std::move(entries)) {
    const auto shape = catalog_shape(kind_);
    if (entries_.size() != shape.cardinality) {
      throw Error(Errc::format, std::string(catalog_name(kind_)) + " catalog has " +
                                    std::to_string(entries_.size()) + " entries, expected " +
                                    std::to_string(shape.cardinality));
    }
    std::unordered_set<std::string_view> names;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].index != i + 1) {
        throw Error(Errc::format, std::string(catalog_name(kind_)) + " catalog index " +
                                      std::to_string(entries_[i].index) + " out of sequence at row " +
                                      std::to_string(i + 1));
      }
      if (entries_[i].name.empty()) {
        throw Error(Errc::format, "empty name at index " + std::to_string(i + 1));
      }
      if (!names.insert(entries_[i].name).second) {
        throw Error(Errc::format, "duplicate name '" + entries_[i].name + "' in " +
                                      std::string(catalog_name(kind_)) + " catalog");
      }
    }
  }

  static Catalog numeric(CatalogKind kind) {
    std::vector<CatalogEntry> entries;
    const auto shape = catalog_shape(kind);
    entries.reserve(shape.cardinality);
    for (std::size_t i = 1; i <= shape.cardinality; ++i) entries.push_back({i, std::to_string(i)});
    return Catalog(kind, std::move(entries));
  }

  CatalogKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<CatalogEntry>& entries() const noexcept { return entries_; }

  const std::string& lookup_name(std::size_t index) const {
    if (index < 1 || index > entries_.size()) {
      throw Error(Errc::out_of_range, std::string(catalog_name(kind_)) + " index " + std::to_string(index) +
                                          " outside 1.." + std::to_string(entries_.size()));
    }
    return entries_[index - 1].name;
  }

  /// Case-insensitive (ASCII) prefix match, in index order.
  std::vector<CatalogEntry> search_prefix(std::string_view prefix, std::size_t limit) const {
    if (limit < 1) throw Error(Errc::invalid_argument, "search limit must be at least 1");
    std::vector<CatalogEntry> out;
    for (const auto& entry : entries_) {
      if (out.size() >= limit) break;
      if (entry.name.size() < prefix.size()) continue;
      bool match = std::equal(prefix.begin(), prefix.end(), entry.name.begin(), [](char a, char b) {
        return std::tolower(static_cast<unsigned char>(a)) == std::tolower(static_cast<unsigned char>(b));
      });
      if (match) out.push_back(entry);
    }
    return out;
  }

 private:
  CatalogKind kind_;
  std::vector<CatalogEntry> entries_;
};

namespace detail {

inline std::string zero_pad(std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return digits;
}

}  // namespace detail

/// Parses the "NNNN,Name" line format. Each index must be zero-padded to the
/// kind's digit width.
inline Catalog parse_catalog(std::istream& in, CatalogKind kind) {
  const auto shape = catalog_shape(kind);
  std::vector<CatalogEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto malformed = [&](const std::string& why) {
      return Error(Errc::format, "line " + std::to_string(line_no) + ": " + why);
    };
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw malformed("expected 'index,name'");
    std::string_view digits(line.data(), comma);
    if (digits.size() != shape.digit_width ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw malformed("index must be " + std::to_string(shape.digit_width) + " digits");
    }
    std::size_t index = std::stoul(std::string(digits));
    if (index < 1 || index > shape.cardinality) throw malformed("index out of range");
    std::string name = line.substr(comma + 1);
    if (name.empty()) throw malformed("empty name");
    entries.push_back({index, std::move(name)});
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].index == entries[i - 1].index) {
      throw Error(Errc::format, "duplicate index " + std::to_string(entries[i].index));
    }
  }
  return Catalog(kind, std::move(entries));
}

/// Loads a catalog file. Numeric kinds (floor, room) are synthesized when the
/// file does not exist.
inline Catalog load_catalog(const std::filesystem::path& path, CatalogKind kind) {
  if (!std::filesystem::exists(path)) {
    if (is_numeric_catalog(kind)) return Catalog::numeric(kind);
    throw Error(Errc::io, "catalog file not found: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open catalog file: " + path.string());
  try {
    return parse_catalog(in, kind);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

inline std::string serialize_catalog(const Catalog& catalog) {
  const auto width = catalog_shape(catalog.kind()).digit_width;
  std::string out;
  for (const auto& entry : catalog.entries()) {
    out += detail::zero_pad(entry.index, width);
    out += ',';
    out += entry.name;
    out += '\n';
  }
  return out;
}

inline void save_catalog(const Catalog& catalog, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io, "cannot write catalog file: " + path.string());
  out << serialize_catalog(catalog);
  if (!out.flush()) throw Error(Errc::io, "write failed: " + path.string());
}

/// All six catalogs, loaded from `<data_dir>/<plural>.csv`.
class CatalogSet {
 public:
  explicit CatalogSet(const std::filesystem::path& data_dir) {
    for (auto kind : kAllCatalogKinds) {
      catalogs_.push_back(load_catalog(data_dir / (catalog_plural(kind) + ".csv"), kind));
    }
  }

  const Catalog& get(CatalogKind kind) const { return catalogs_[static_cast<std::size_t>(kind)]; }

 private:
  std::vector<Catalog> catalogs_;
};

}  // namespace hector

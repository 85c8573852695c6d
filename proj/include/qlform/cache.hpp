/// @file cache.hpp
/// On-disk memo of command results, one JSON file per key named by the
/// SHA-256 of the key's canonical serialization.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "qlform/serialize.hpp"

namespace qlform {

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

class ResultCache {
 public:
  explicit ResultCache(std::filesystem::path dir);
  /// Uses QLFORM_CACHE_DIR when it is set and non-empty.
  static std::optional<ResultCache> from_env();

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path path_for(const Json& key) const;

  /// Unreadable or corrupt entries count as misses.
  std::optional<Json> get(const Json& key) const;
  /// Written to a temporary file and renamed into place, so concurrent
  /// writers of the same key leave one complete entry.
  void put(const Json& key, const Json& value) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace qlform

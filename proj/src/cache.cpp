#include "qlform/cache.hpp"

#include <openssl/evp.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "qlform/error.hpp"

namespace qlform {

namespace {

// Version tag folded into every key so that format changes invalidate old entries.
constexpr const char* kCacheVersion = "qlform-cache-1";

std::string temp_suffix() {
  static std::atomic<unsigned> counter{0};
  std::ostringstream s;
  s << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "." << counter++;
  return s.str();
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::InternalInconsistency, "SHA-256 failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::optional<ResultCache> ResultCache::from_env() {
  const char* dir = std::getenv("QLFORM_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  return ResultCache(dir);
}

std::filesystem::path ResultCache::path_for(const Json& key) const {
  Json wrapped = Json::array({kCacheVersion, key});
  return dir_ / (sha256_hex(wrapped.dump()) + ".json");
}

std::optional<Json> ResultCache::get(const Json& key) const {
  std::ifstream in(path_for(key));
  if (!in) return std::nullopt;
  Json entry = Json::parse(in, nullptr, false);
  if (entry.is_discarded() || !entry.is_object() || !entry.contains("key") || entry["key"] != key) {
    return std::nullopt;
  }
  return entry["value"];
}

void ResultCache::put(const Json& key, const Json& value) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  const std::filesystem::path target = path_for(key);
  const std::filesystem::path tmp = target.string() + temp_suffix();
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << Json{{"key", key}, {"value", value}}.dump();
    if (!out) {
      std::filesystem::remove(tmp, ec);
      return;
    }
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace qlform

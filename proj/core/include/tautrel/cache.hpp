#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace tautrel {

class KernelTable;

inline constexpr const char* kEngineVersion = "1.0.0";

// Version tag for a cache: the engine semver plus the base table's checksum
// as build metadata, so caches made with other constants stay invisible.
std::string engine_version(const KernelTable& kt);

enum class CacheKind { WK, Kernel, Pairing };
std::string to_string(CacheKind k);  // "WK", "K", "P": the first key field
CacheKind cache_kind_of(std::string_view key);

struct CacheEntry {
  std::string key;  // starts with the kind field
  std::string value;
  std::string version;
  std::uint32_t crc = 0;
  std::string line() const;  // <key>|<value>|<crc32-hex>
};

std::uint32_t cache_crc(std::string_view key, std::string_view value);

struct AuditReport {
  std::size_t total = 0;
  std::size_t sampled = 0;
  std::vector<std::string> differing;  // "key: stored -> recomputed"
  bool ok() const { return differing.empty(); }
};

// Append-only text store:
//   TAUTREL-CACHE v1 engine=<version>
//   <kind>|<key fields>|<value>|<crc32-hex>
// A file may hold several version sections; only the open version is visible.
class CacheStore {
 public:
  // Loads `path` if it exists. An empty path gives an in-memory store.
  explicit CacheStore(std::string path, std::string version = kEngineVersion);

  const std::string& path() const { return path_; }
  const std::string& version() const { return version_; }

  // Throws CorruptEntry if the only stored line for key failed its checksum.
  std::optional<std::string> get(const std::string& key) const;
  // Equal duplicate puts are no-ops; an unequal value for a known key throws.
  void put(const std::string& key, const std::string& value);

  std::size_t size() const;
  std::vector<CacheEntry> entries() const;      // visible entries, sorted by key
  std::vector<std::string> corrupt() const;     // lines dropped on load
  std::size_t foreign_entries() const { return foreign_; }  // other versions

  // Recomputes a seeded random sample of at least ceil(fraction*size) entries.
  AuditReport audit(double fraction, const KernelTable& kt, std::uint32_t seed = 20240611) const;

  // Imports every visible entry of another store file; conflicts throw.
  std::size_t merge_from(const std::string& other_path);
  // Canonical text of the visible section: header plus sorted lines.
  std::string export_text() const;

  static std::string header(const std::string& version);

 private:
  void load();
  void append_line(const CacheEntry& e);

  std::string path_;
  std::string version_;
  mutable std::shared_mutex mu_;
  std::mutex write_mu_;
  std::map<std::string, CacheEntry> index_;
  std::map<std::string, std::string> corrupt_;  // key -> raw line
  std::size_t foreign_ = 0;
  bool header_written_ = false;
};

// Copies the WK and kernel memos into the store so a later audit can
// recompute them. Returns the number of new entries.
std::size_t store_memos(CacheStore& c, const KernelTable& kt);

// Recomputes a cache value from scratch. Throws ParseError on unknown keys.
std::string recompute_cache_value(const std::string& key, const KernelTable& kt);

}  // namespace tautrel

#include "tautrel/cache.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "tautrel/classes.hpp"
#include "tautrel/errors.hpp"
#include "tautrel/kernels.hpp"
#include "tautrel/wk.hpp"
#include "text_fields.hpp"

namespace tautrel {

namespace {

const std::string kMagic = "TAUTREL-CACHE v1 engine=";

std::string hex8(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t p = s.find(sep, start);
    out.emplace_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

int to_int(const std::string& s) {
  size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw ParseError("cache key: bad integer '" + s + "'");
  }
  if (pos != s.size()) throw ParseError("cache key: bad integer '" + s + "'");
  return v;
}

std::vector<int> to_ints(const std::string& s) {
  std::vector<int> out;
  if (s.empty()) return out;
  for (const auto& f : split(s, ',')) out.push_back(to_int(f));
  return out;
}

}  // namespace

std::string engine_version(const KernelTable& kt) {
  std::string canon = "max_g=" + std::to_string(kt.max_g()) + " max_k=" + std::to_string(kt.max_k());
  for (const auto& r : kt.records())
    canon += "\n" + std::to_string(r.g) + " " + std::to_string(r.k) + " " + r.poly.to_string();
  return std::string(kEngineVersion) + "+base." +
         hex8(static_cast<std::uint32_t>(crc32(0L, reinterpret_cast<const Bytef*>(canon.data()), canon.size())));
}

std::string to_string(CacheKind k) {
  switch (k) {
    case CacheKind::WK: return "WK";
    case CacheKind::Kernel: return "K";
    case CacheKind::Pairing: return "P";
  }
  return "?";
}

CacheKind cache_kind_of(std::string_view key) {
  auto kind = key.substr(0, key.find('|'));
  if (kind == "WK") return CacheKind::WK;
  if (kind == "K") return CacheKind::Kernel;
  if (kind == "P") return CacheKind::Pairing;
  throw ParseError("cache key: unknown kind in '" + std::string(key) + "'");
}

std::uint32_t cache_crc(std::string_view key, std::string_view value) {
  std::string s = std::string(key) + "|" + std::string(value);
  return static_cast<std::uint32_t>(crc32(0L, reinterpret_cast<const Bytef*>(s.data()), s.size()));
}

std::string CacheEntry::line() const { return key + "|" + value + "|" + hex8(crc); }

std::string CacheStore::header(const std::string& version) { return kMagic + version; }

CacheStore::CacheStore(std::string path, std::string version) : path_(std::move(path)), version_(std::move(version)) {
  if (version_.empty() || version_.find_first_of(" \n|") != std::string::npos)
    throw std::invalid_argument("cache: bad version tag '" + version_ + "'");
  load();
}

void CacheStore::load() {
  if (path_.empty()) return;
  std::ifstream in(path_);
  if (!in) return;
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.rfind(kMagic, 0) == 0) {
      section = line.substr(kMagic.size());
      header_written_ = section == version_;
      continue;
    }
    if (section.empty()) throw ParseError(path_ + ":" + std::to_string(lineno) + ": entry before cache header");
    if (section != version_) {
      ++foreign_;
      continue;
    }
    const size_t c = line.rfind('|');
    const size_t v = c == std::string::npos || c == 0 ? std::string::npos : line.rfind('|', c - 1);
    if (v == std::string::npos) {
      corrupt_.emplace("#" + std::to_string(lineno), line);
      continue;
    }
    CacheEntry e{line.substr(0, v), line.substr(v + 1, c - v - 1), section, 0};
    const std::string crc = line.substr(c + 1);
    e.crc = cache_crc(e.key, e.value);
    if (crc != hex8(e.crc)) {
      if (!index_.count(e.key)) corrupt_[e.key] = line;
      continue;
    }
    auto [it, inserted] = index_.emplace(e.key, e);
    if (!inserted && it->second.value != e.value)
      throw CacheConflict(path_ + ": conflicting values for " + e.key + ": " + it->second.value + " vs " + e.value);
    corrupt_.erase(e.key);
  }
}

std::optional<std::string> CacheStore::get(const std::string& key) const {
  std::shared_lock lock(mu_);
  if (auto it = index_.find(key); it != index_.end()) return it->second.value;
  if (auto it = corrupt_.find(key); it != corrupt_.end())
    throw CorruptEntry("cache: checksum mismatch for " + key + " in line '" + it->second + "'");
  return std::nullopt;
}

void CacheStore::put(const std::string& key, const std::string& value) {
  if (key.find('\n') != std::string::npos || value.find_first_of("|\n") != std::string::npos)
    throw std::invalid_argument("cache: key or value not canonical");
  cache_kind_of(key);
  std::lock_guard wlock(write_mu_);
  CacheEntry e{key, value, version_, cache_crc(key, value)};
  {
    std::unique_lock lock(mu_);
    auto it = index_.find(key);
    if (it != index_.end()) {
      if (it->second.value == value) return;
      throw CacheConflict("cache: conflicting values for " + key + ": " + it->second.value + " vs " + value);
    }
    index_.emplace(key, e);
    corrupt_.erase(key);
  }
  append_line(e);
}

void CacheStore::append_line(const CacheEntry& e) {
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  if (!out) throw Error("cache: cannot open " + path_ + " for writing");
  if (!header_written_) {
    out << header(version_) << "\n";
    header_written_ = true;
  }
  out << e.line() << "\n";
  out.flush();
  if (!out) throw Error("cache: write to " + path_ + " failed");
}

std::size_t CacheStore::size() const {
  std::shared_lock lock(mu_);
  return index_.size();
}

std::vector<CacheEntry> CacheStore::entries() const {
  std::shared_lock lock(mu_);
  std::vector<CacheEntry> out;
  for (const auto& [k, e] : index_) out.push_back(e);
  return out;
}

std::vector<std::string> CacheStore::corrupt() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, line] : corrupt_) out.push_back(line);
  return out;
}

std::string recompute_cache_value(const std::string& key, const KernelTable& kt) {
  auto f = split(key, '|');
  switch (cache_kind_of(key)) {
    case CacheKind::WK:
      if (f.size() != 3) break;
      return to_string(wk_integral(to_int(f[1]), to_ints(f[2])));
    case CacheKind::Kernel:
      if (f.size() != 5) break;
      return kt.kernel(to_int(f[1]), to_int(f[2]), to_ints(f[3]), to_int(f[4])).to_string();
    case CacheKind::Pairing: {
      if (f.size() != 6) break;
      PairingRequest r{parse_class_kind(f[1]), to_int(f[2]), to_int(f[3]), to_int(f[4]), to_ints(f[5])};
      return evaluate(r, kt).poly.to_string();
    }
  }
  throw ParseError("cache key: malformed '" + key + "'");
}

std::size_t store_memos(CacheStore& c, const KernelTable& kt) {
  const std::size_t before = c.size();
  for (const auto& [k, v] : wk_memo_snapshot()) c.put("WK|" + std::to_string(k.first) + "|" + detail::join_ints(k.second), to_string(v));
  for (const auto& [k, p] : kt.memo_snapshot()) {
    const auto& [g, kk, d, d0] = k;
    c.put("K|" + std::to_string(g) + "|" + std::to_string(kk) + "|" + detail::join_ints(d) + "|" + std::to_string(d0), p.to_string());
  }
  return c.size() - before;
}

AuditReport CacheStore::audit(double fraction, const KernelTable& kt, std::uint32_t seed) const {
  if (!(fraction > 0 && fraction <= 1)) throw std::invalid_argument("audit fraction must be in (0, 1]");
  auto all = entries();
  AuditReport rep;
  rep.total = all.size();
  if (all.empty()) return rep;
  std::size_t want = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(all.size())));
  want = std::clamp<std::size_t>(want, 1, all.size());
  std::mt19937 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(want);
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.key < b.key; });
  for (const auto& e : all) {
    std::string fresh = recompute_cache_value(e.key, kt);
    if (fresh != e.value) rep.differing.push_back(e.key + ": " + e.value + " -> " + fresh);
  }
  rep.sampled = all.size();
  if (!rep.ok()) {
    std::string msg = "cache audit: " + std::to_string(rep.differing.size()) + " of " + std::to_string(rep.sampled) +
                      " sampled entries differ";
    for (const auto& d : rep.differing) msg += "\n  " + d;
    throw AuditFailure(msg);
  }
  return rep;
}

std::size_t CacheStore::merge_from(const std::string& other_path) {
  {
    std::ifstream probe(other_path);
    if (!probe) throw Error("cache: cannot read " + other_path);
  }
  CacheStore other(other_path, version_);
  std::size_t added = 0;
  for (const auto& e : other.entries()) {
    const std::size_t before = size();
    put(e.key, e.value);
    added += size() > before;
  }
  return added;
}

std::string CacheStore::export_text() const {
  std::string s = header(version_) + "\n";
  for (const auto& e : entries()) s += e.line() + "\n";
  return s;
}

}  // namespace tautrel

#include "ctqw/fetch.hpp"

#include "ctqw/error.hpp"
#include "ctqw/pdb.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>

namespace ctqw {
namespace {

std::string to_upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

// One writer per identifier; different identifiers may write concurrently.
std::mutex& cache_lock_for(const std::string& pdb_id) {
  static std::mutex registry_mutex;
  static std::map<std::string, std::unique_ptr<std::mutex>> registry;
  std::lock_guard lock(registry_mutex);
  auto& slot = registry[pdb_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

struct SplitUrl {
  std::string origin;
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto path_start = url.find('/', host_start);
  if (path_start == std::string::npos) return {url, ""};
  std::string path = url.substr(path_start);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {url.substr(0, path_start), path};
}

std::string download(const std::string& pdb_id, const ArchiveConfig& config) {
  const auto [origin, prefix] = split_url(config.base_url);
  httplib::Client client(origin);
  const auto timeout_us = static_cast<long>(config.timeout_seconds * 1e6);
  client.set_connection_timeout(0, timeout_us);
  client.set_read_timeout(0, timeout_us);
  client.set_follow_location(true);
  if (!client.is_valid()) {
    throw Error(ErrorKind::NetworkFailure, "unsupported archive URL " + config.base_url);
  }
  const std::string path = prefix + "/" + pdb_id + ".pdb";
  auto response = client.Get(path);
  if (!response) {
    throw Error(ErrorKind::NetworkFailure,
                "request for " + origin + path + " failed: " + httplib::to_string(response.error()));
  }
  if (response->status == 404 || response->status == 410) {
    throw Error(ErrorKind::NotFound, pdb_id + " not found in archive");
  }
  if (response->status != 200) {
    throw Error(ErrorKind::NetworkFailure,
                "archive returned HTTP " + std::to_string(response->status) + " for " + pdb_id);
  }
  return std::move(response->body);
}

}  // namespace

ArchiveConfig ArchiveConfig::from_environment() {
  ArchiveConfig config;
  if (const char* url = std::getenv("CTQW_ARCHIVE_URL"); url && *url) config.base_url = url;
  if (const char* dir = std::getenv("CTQW_CACHE_DIR"); dir && *dir) config.cache_dir = dir;
  return config;
}

bool is_valid_pdb_id(std::string_view pdb_id) noexcept {
  return pdb_id.size() == 4 && std::all_of(pdb_id.begin(), pdb_id.end(), [](unsigned char c) {
           return std::isalnum(c) != 0;
         });
}

FetchResult fetch_structure(std::string_view pdb_id, const ArchiveConfig& config) {
  if (!is_valid_pdb_id(pdb_id)) {
    throw Error(ErrorKind::InvalidIdentifier,
                "'" + std::string(pdb_id) + "' is not a 4-character PDB identifier");
  }
  const std::string id = to_upper(pdb_id);
  FetchResult result;
  result.cache_path = config.cache_dir / (id + ".pdb");

  std::error_code ec;
  if (std::filesystem::is_regular_file(result.cache_path, ec)) {
    result.text = read_text_file(result.cache_path);
    result.from_cache = true;
    return result;
  }

  result.text = download(id, config);

  std::lock_guard lock(cache_lock_for(id));
  std::filesystem::create_directories(config.cache_dir, ec);
  const auto tmp = result.cache_path.string() + ".part";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(result.text.data(), static_cast<std::streamsize>(result.text.size()));
    if (!out) {
      result.warnings.push_back("could not write cache file " + tmp);
      std::filesystem::remove(tmp, ec);
      return result;
    }
  }
  std::filesystem::rename(tmp, result.cache_path, ec);
  if (ec) {
    result.warnings.push_back("could not move cache file into place: " + ec.message());
    std::filesystem::remove(tmp, ec);
  }
  return result;
}

}  // namespace ctqw

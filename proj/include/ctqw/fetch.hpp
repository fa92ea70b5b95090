#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ctqw {

/// Where structures come from and where they are kept.
struct ArchiveConfig {
  /// Files are requested as "<base_url>/<PDBID>.pdb".
  std::string base_url = "https://files.rcsb.org/download";
  std::filesystem::path cache_dir = "pdb_cache";
  double timeout_seconds = 30.0;

  /// Defaults overridden by CTQW_ARCHIVE_URL and CTQW_CACHE_DIR when set.
  static ArchiveConfig from_environment();
};

struct FetchResult {
  std::string text;
  bool from_cache = false;
  std::filesystem::path cache_path;
  std::vector<std::string> warnings;
};

bool is_valid_pdb_id(std::string_view pdb_id) noexcept;

/// Returns the cached file when present, otherwise downloads it and stores it
/// in the cache. A failed cache write is reported as a warning and the
/// downloaded text is still returned.
FetchResult fetch_structure(std::string_view pdb_id, const ArchiveConfig& config);

}  // namespace ctqw

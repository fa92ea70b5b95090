#include "ctqw/error.hpp"
#include "ctqw/fetch.hpp"
#include "ctqw/pdb.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <thread>
#include <vector>

namespace fs = std::filesystem;

namespace {

const char* kBody = "ATOM      2  CA  ALA A   1       0.000   0.000   0.000  1.00  0.00           C\nEND\n";

// Archive stand-in on 127.0.0.1 that serves /files/1ABC.pdb and counts requests.
struct FakeArchive {
  httplib::Server server;
  std::atomic<int> requests{0};
  int port = 0;
  std::thread thread;

  FakeArchive() {
    server.Get(R"(/files/(\w+)\.pdb)", [this](const httplib::Request& req, httplib::Response& res) {
      ++requests;
      if (req.matches[1] == "1ABC") {
        res.set_content(kBody, "chemical/x-pdb");
      } else if (req.matches[1] == "5XXX") {
        res.status = 503;
      } else {
        res.status = 404;
      }
    });
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~FakeArchive() {
    server.stop();
    thread.join();
  }

  ctqw::ArchiveConfig config(const fs::path& cache) const {
    ctqw::ArchiveConfig c;
    c.base_url = "http://127.0.0.1:" + std::to_string(port) + "/files/";
    c.cache_dir = cache;
    c.timeout_seconds = 5;
    return c;
  }
};

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("ctqw_fetch_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ctqw::ErrorKind fetch_error(std::string_view id, const ctqw::ArchiveConfig& config) {
  try {
    ctqw::fetch_structure(id, config);
  } catch (const ctqw::Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ctqw::ErrorKind::Io;
}

}  // namespace

TEST_CASE("identifier validation") {
  CHECK(ctqw::is_valid_pdb_id("1XY1"));
  CHECK(ctqw::is_valid_pdb_id("1ubq"));
  CHECK_FALSE(ctqw::is_valid_pdb_id("1UB"));
  CHECK_FALSE(ctqw::is_valid_pdb_id("1UBQX"));
  CHECK_FALSE(ctqw::is_valid_pdb_id("1U-Q"));
  TempDir dir;
  CHECK(fetch_error("../x", ctqw::ArchiveConfig{"http://127.0.0.1:1", dir.path, 1}) ==
        ctqw::ErrorKind::InvalidIdentifier);
}

TEST_CASE("cold cache downloads and persists, warm cache makes no request") {
  FakeArchive archive;
  TempDir dir;
  const auto config = archive.config(dir.path / "cache");

  const auto cold = ctqw::fetch_structure("1abc", config);
  CHECK_FALSE(cold.from_cache);
  CHECK(cold.text == kBody);
  CHECK(cold.warnings.empty());
  CHECK(cold.cache_path == dir.path / "cache" / "1ABC.pdb");
  CHECK(fs::exists(cold.cache_path));
  CHECK_FALSE(fs::exists(cold.cache_path.string() + ".part"));
  CHECK(archive.requests == 1);

  const auto warm = ctqw::fetch_structure("1ABC", config);
  CHECK(warm.from_cache);
  CHECK(warm.text == kBody);
  CHECK(archive.requests == 1);
}

TEST_CASE("archive errors") {
  FakeArchive archive;
  TempDir dir;
  const auto config = archive.config(dir.path);
  CHECK(fetch_error("9ZZZ", config) == ctqw::ErrorKind::NotFound);
  CHECK(fetch_error("5XXX", config) == ctqw::ErrorKind::NetworkFailure);
  CHECK_FALSE(fs::exists(dir.path / "9ZZZ.pdb"));
}

TEST_CASE("unreachable archive is a network failure") {
  int closed_port = 0;
  {
    httplib::Server probe;
    closed_port = probe.bind_to_any_port("127.0.0.1");
  }
  TempDir dir;
  ctqw::ArchiveConfig config{"http://127.0.0.1:" + std::to_string(closed_port), dir.path, 2};
  CHECK(fetch_error("1ABC", config) == ctqw::ErrorKind::NetworkFailure);
}

TEST_CASE("unwritable cache still returns the structure with a warning") {
  FakeArchive archive;
  TempDir dir;
  const auto blocker = dir.path / "not_a_dir";
  std::ofstream(blocker) << "x";
  const auto result = ctqw::fetch_structure("1ABC", archive.config(blocker));
  CHECK(result.text == kBody);
  CHECK_FALSE(result.warnings.empty());
}

TEST_CASE("concurrent fetches of one identifier leave a single complete file") {
  FakeArchive archive;
  TempDir dir;
  const auto config = archive.config(dir.path);
  std::vector<std::thread> workers;
  for (int i = 0; i < 8; ++i) workers.emplace_back([&] { ctqw::fetch_structure("1ABC", config); });
  for (auto& w : workers) w.join();
  CHECK(ctqw::read_text_file(dir.path / "1ABC.pdb") == kBody);
  for (const auto& entry : fs::directory_iterator(dir.path)) CHECK(entry.path().extension() == ".pdb");
}

TEST_CASE("environment overrides") {
  setenv("CTQW_ARCHIVE_URL", "http://example.invalid/pdb", 1);
  setenv("CTQW_CACHE_DIR", "/tmp/ctqw_env_cache", 1);
  const auto c = ctqw::ArchiveConfig::from_environment();
  CHECK(c.base_url == "http://example.invalid/pdb");
  CHECK(c.cache_dir == fs::path("/tmp/ctqw_env_cache"));
  unsetenv("CTQW_ARCHIVE_URL");
  unsetenv("CTQW_CACHE_DIR");
  CHECK(ctqw::ArchiveConfig::from_environment().base_url == "https://files.rcsb.org/download");
}

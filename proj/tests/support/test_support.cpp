#include "test_support.hpp"

#include <sqlite3.h>
#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace reflectbench::testutil {

namespace fs = std::filesystem;

fs::path fixture_dir() { return REFLECTBENCH_FIXTURE_DIR; }
fs::path oracle_dir() { return REFLECTBENCH_ORACLE_DIR; }

fs::path make_temp_dir(const std::string& prefix) {
  static std::atomic<int> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       (prefix + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& body) {
  fs::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << body;
}

void create_database(const fs::path& db, const std::string& script) {
  fs::create_directories(db.parent_path());
  fs::remove(db);
  sqlite3* handle = nullptr;
  if (sqlite3_open(db.string().c_str(), &handle) != SQLITE_OK) {
    throw std::runtime_error("cannot create " + db.string());
  }
  char* err = nullptr;
  const int rc = sqlite3_exec(handle, script.c_str(), nullptr, nullptr, &err);
  const std::string message = err ? err : "";
  sqlite3_free(err);
  sqlite3_close(handle);
  if (rc != SQLITE_OK) throw std::runtime_error("fixture script failed: " + message);
}

fs::path build_sql_fixture(const fs::path& root) {
  const fs::path src = fixture_dir() / "spider";
  const fs::path db = root / "database" / "concert_singer" / "concert_singer.sqlite";
  create_database(db, read_file(src / "concert_singer.sql"));
  fs::copy_file(src / "questions.jsonl", root / "questions.jsonl",
                fs::copy_options::overwrite_existing);
  return db;
}

}  // namespace reflectbench::testutil

#pragma once

#include <filesystem>
#include <string>

namespace reflectbench::testutil {

std::filesystem::path fixture_dir();
std::filesystem::path oracle_dir();

// Fresh empty directory under the system temp dir, unique per call.
std::filesystem::path make_temp_dir(const std::string& prefix);

// Builds the text-to-SQL fixture under `root` in the usual layout
// (root/questions.jsonl, root/database/<db>/<db>.sqlite) and returns the
// database file.
std::filesystem::path build_sql_fixture(const std::filesystem::path& root);

// Runs a SQL script against a new database file.
void create_database(const std::filesystem::path& db, const std::string& script);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& body);

}  // namespace reflectbench::testutil

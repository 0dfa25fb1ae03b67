#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "reflectbench/core/types.hpp"

namespace reflectbench {

// Describes one dataset on disk:
//
//   {"task": "math" | "sentiment" | "translation" | "text_to_sql",
//    "path": "math.jsonl",            // a directory for text_to_sql
//    "fields": {"problem": "question", ...},
//    "subset_size": 200, "subset_seed": 7,
//    "language_pairs": ["en-de"],     // translation: keep only these
//    "databases": ["voter_1"],        // text_to_sql: keep only these
//    "questions_file": "dev.json", "schema_file": "tables.json",
//    "database_dir": "database",
//    "sample_count": 5}               // optional check after loading
//
// Default field names: id; problem/answer; text/label;
// source/target/target_language/source_language; question/query/db_id.
struct DatasetManifest {
  TaskKind task = TaskKind::kMathReasoning;
  std::filesystem::path path;
  std::map<std::string, std::string> fields;
  std::optional<size_t> subset_size;
  std::uint64_t subset_seed = 0;
  std::vector<std::string> language_pairs;
  std::vector<std::string> databases;
  std::string questions_file = "questions.jsonl";
  std::string schema_file = "tables.json";
  std::string database_dir = "database";
  std::optional<size_t> sample_count;

  // Relative paths resolve against `base_dir`. Errors name the JSON path.
  static DatasetManifest from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static DatasetManifest from_file(const std::filesystem::path& path);

  std::string field(const std::string& canonical) const;
};

// "<source_language>-<target_language>".
std::string language_pair(const Sample& sample);

// Loads and optionally subsets the dataset. Throws Error(kParse) with
// file:line, Error(kMissingDatabase) for an absent database file, and
// Error(kDataset) for duplicate ids or a sample_count mismatch.
std::vector<Sample> load_dataset(const DatasetManifest& manifest);

// Seeded uniform choice of `size` indices out of `n`, without replacement,
// returned in ascending order.
std::vector<size_t> sample_indices(size_t n, size_t size, std::uint64_t seed);

// As sample_indices but spread evenly over groups: per-group counts differ
// by at most one unless a group runs out.
std::vector<size_t> stratified_indices(const std::vector<std::string>& group_of, size_t size,
                                       std::uint64_t seed);

// Schema of every table in an SQLite file, in creation order, with the
// stored CREATE TABLE text.
std::vector<TableSchema> read_sqlite_schema(const std::filesystem::path& db_path);

}  // namespace reflectbench

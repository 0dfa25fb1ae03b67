#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "reflectbench/verify/verdict.hpp"

struct sqlite3;

namespace reflectbench {

// null | integer | real | text. Reals are stored rounded to 6 significant
// digits.
using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;

// Comparison key for a cell: numbers compare by value across integer and
// real, text compares as text, null differs from the empty string.
std::string cell_key(const Cell& cell);
std::string cell_to_string(const Cell& cell);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // The query had an ORDER BY, so row order is meaningful.
  bool ordered = false;

  size_t cell_count() const { return rows.size() * columns.size(); }
};

class ExecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A read-only connection to an SQLite database file. One per worker.
class Database {
 public:
  // Throws Error(kMissingDatabase) when the file does not exist.
  static Database open_read_only(const std::filesystem::path& path);

  Database(Database&&) noexcept;
  Database& operator=(Database&&) noexcept;
  Database(const Database&) = delete;
  Database& operator=(const Database&) = delete;
  ~Database();

  const std::filesystem::path& path() const { return path_; }
  sqlite3* handle() const { return db_; }

 private:
  Database(sqlite3* db, std::filesystem::path path) : db_(db), path_(std::move(path)) {}

  sqlite3* db_ = nullptr;
  std::filesystem::path path_;
};

// True when the statement contains ORDER BY outside string literals.
bool has_order_by(std::string_view query);

// Runs a single statement and returns its result table. Throws ExecError with
// the engine message on failure or after `timeout`.
ResultTable execute_sql(std::string_view query, const Database& db,
                        std::chrono::milliseconds timeout = std::chrono::seconds(10));

// Exact match: same column count and equal rows, as a multiset, or as a
// sequence when the gold table is ordered.
bool tables_match(const ResultTable& pred, const ResultTable& gold);

// Partial credit for two tables that do not match exactly. Unordered gold:
// |multiset intersection of all cells| / max(cell counts). Ordered gold: the
// same denominator over cells equal at the same (row, column) position.
double partial_credit(const ResultTable& pred, const ResultTable& gold);

// Executes both queries and grades the prediction. A failing prediction
// scores 0; a failing gold query throws Error(kDataset).
VerdictRecord score_sql(std::string_view pred_sql, std::string_view gold_sql, const Database& db);

// score_sql on the SQL inside the last <SQL> tags of a model response.
VerdictRecord score_sql_response(std::string_view response_text, std::string_view gold_sql,
                                 const Database& db);

// The SQL a response proposes: the last <SQL> block, else the whole text.
std::string extract_sql(std::string_view response_text);

// Tab-separated rendering with a header line, at most `max_rows` rows and a
// note when rows were cut.
std::string serialize_table(const ResultTable& table, size_t max_rows);

// FNV-1a digest of a file's bytes as 16 hex digits. Used to check that
// evaluation never writes to a database.
std::string file_digest(const std::filesystem::path& path);

}  // namespace reflectbench

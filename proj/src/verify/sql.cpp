#include "reflectbench/verify/sql.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <utility>

#include "reflectbench/core/errors.hpp"
#include "reflectbench/core/hash.hpp"

namespace reflectbench {

namespace {

double round_significant(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::strtod(buf, nullptr);
}

std::string format_number(double v) {
  // Integral reals print like integers so 4 and 4.0 share a key.
  if (std::isfinite(v) && v == std::trunc(v) && std::fabs(v) < 9.0e15) {
    return std::to_string(static_cast<std::int64_t>(v));
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Deadline {
  std::chrono::steady_clock::time_point at;
};

int progress_callback(void* arg) {
  const auto* deadline = static_cast<const Deadline*>(arg);
  return std::chrono::steady_clock::now() > deadline->at ? 1 : 0;
}

}  // namespace

std::string cell_key(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return std::string("\x00N", 2); }
    std::string operator()(std::int64_t v) const { return "#" + std::to_string(v); }
    std::string operator()(double v) const { return "#" + format_number(v); }
    std::string operator()(const std::string& v) const { return "s" + v; }
  };
  return std::visit(Visitor{}, cell);
}

std::string cell_to_string(const Cell& cell) {
  struct Visitor {
    std::string operator()(std::monostate) const { return "NULL"; }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_number(v); }
    std::string operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, cell);
}

Database Database::open_read_only(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kMissingDatabase, "database not found: " + path.string());
  }
  sqlite3* db = nullptr;
  const int rc = sqlite3_open_v2(path.string().c_str(), &db, SQLITE_OPEN_READONLY, nullptr);
  if (rc != SQLITE_OK) {
    const std::string msg = db ? sqlite3_errmsg(db) : "out of memory";
    sqlite3_close(db);
    throw Error(ErrorCode::kMissingDatabase, "cannot open " + path.string() + ": " + msg);
  }
  sqlite3_exec(db, "PRAGMA query_only = 1", nullptr, nullptr, nullptr);
  return Database(db, path);
}

Database::Database(Database&& other) noexcept
    : db_(std::exchange(other.db_, nullptr)), path_(std::move(other.path_)) {}

Database& Database::operator=(Database&& other) noexcept {
  if (this != &other) {
    sqlite3_close(db_);
    db_ = std::exchange(other.db_, nullptr);
    path_ = std::move(other.path_);
  }
  return *this;
}

Database::~Database() { sqlite3_close(db_); }

bool has_order_by(std::string_view query) {
  std::string upper;
  upper.reserve(query.size());
  char quote = 0;
  for (char c : query) {
    if (quote) {
      if (c == quote) quote = 0;
      upper += ' ';
      continue;
    }
    if (c == '\'' || c == '"' || c == '`') {
      quote = c;
      upper += ' ';
      continue;
    }
    upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  size_t pos = 0;
  while ((pos = upper.find("ORDER", pos)) != std::string::npos) {
    const bool left_ok = pos == 0 || !std::isalnum(static_cast<unsigned char>(upper[pos - 1]));
    size_t i = pos + 5;
    const bool has_space = i < upper.size() && std::isspace(static_cast<unsigned char>(upper[i]));
    while (i < upper.size() && std::isspace(static_cast<unsigned char>(upper[i]))) ++i;
    if (left_ok && has_space && upper.compare(i, 2, "BY") == 0) return true;
    pos += 5;
  }
  return false;
}

ResultTable execute_sql(std::string_view query, const Database& db,
                        std::chrono::milliseconds timeout) {
  sqlite3_stmt* stmt = nullptr;
  const char* tail = nullptr;
  const std::string sql(query);
  if (sqlite3_prepare_v2(db.handle(), sql.c_str(), static_cast<int>(sql.size()), &stmt, &tail) !=
      SQLITE_OK) {
    throw ExecError(sqlite3_errmsg(db.handle()));
  }
  std::unique_ptr<sqlite3_stmt, int (*)(sqlite3_stmt*)> guard(stmt, sqlite3_finalize);
  if (stmt == nullptr) throw ExecError("empty statement");
  for (const char* p = tail; p && *p; ++p) {
    if (!std::isspace(static_cast<unsigned char>(*p)) && *p != ';') {
      throw ExecError("only one statement may be executed");
    }
  }
  if (!sqlite3_stmt_readonly(stmt)) throw ExecError("attempt to write a readonly database");

  Deadline deadline{std::chrono::steady_clock::now() + timeout};
  sqlite3_progress_handler(db.handle(), 1000, progress_callback, &deadline);
  struct ClearHandler {
    sqlite3* db;
    ~ClearHandler() { sqlite3_progress_handler(db, 0, nullptr, nullptr); }
  } clear{db.handle()};

  ResultTable table;
  table.ordered = has_order_by(query);
  const int ncols = sqlite3_column_count(stmt);
  for (int c = 0; c < ncols; ++c) {
    const char* name = sqlite3_column_name(stmt, c);
    table.columns.emplace_back(name ? name : "");
  }
  for (;;) {
    const int rc = sqlite3_step(stmt);
    if (rc == SQLITE_DONE) break;
    if (rc == SQLITE_INTERRUPT) {
      throw ExecError("query timed out after " + std::to_string(timeout.count()) + " ms");
    }
    if (rc != SQLITE_ROW) throw ExecError(sqlite3_errmsg(db.handle()));
    std::vector<Cell> row;
    row.reserve(ncols);
    for (int c = 0; c < ncols; ++c) {
      switch (sqlite3_column_type(stmt, c)) {
        case SQLITE_NULL: row.emplace_back(std::monostate{}); break;
        case SQLITE_INTEGER: row.emplace_back(static_cast<std::int64_t>(sqlite3_column_int64(stmt, c))); break;
        case SQLITE_FLOAT: row.emplace_back(round_significant(sqlite3_column_double(stmt, c))); break;
        default: {
          const auto* text = reinterpret_cast<const char*>(sqlite3_column_text(stmt, c));
          row.emplace_back(std::string(text ? text : "", sqlite3_column_bytes(stmt, c)));
        }
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

using RowKey = std::vector<std::string>;

RowKey row_key(const std::vector<Cell>& row) {
  RowKey key;
  key.reserve(row.size());
  for (const auto& c : row) key.push_back(cell_key(c));
  return key;
}

}  // namespace

bool tables_match(const ResultTable& pred, const ResultTable& gold) {
  if (pred.columns.size() != gold.columns.size()) return false;
  if (pred.rows.size() != gold.rows.size()) return false;
  std::vector<RowKey> a;
  std::vector<RowKey> b;
  for (const auto& r : pred.rows) a.push_back(row_key(r));
  for (const auto& r : gold.rows) b.push_back(row_key(r));
  if (!gold.ordered) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
  }
  return a == b;
}

double partial_credit(const ResultTable& pred, const ResultTable& gold) {
  const size_t denom = std::max(pred.cell_count(), gold.cell_count());
  if (denom == 0) return 0.0;
  size_t matched = 0;
  if (gold.ordered) {
    const size_t rows = std::min(pred.rows.size(), gold.rows.size());
    const size_t cols = std::min(pred.columns.size(), gold.columns.size());
    for (size_t r = 0; r < rows; ++r) {
      for (size_t c = 0; c < cols; ++c) {
        if (cell_key(pred.rows[r][c]) == cell_key(gold.rows[r][c])) ++matched;
      }
    }
  } else {
    std::map<std::string, size_t> gold_counts;
    for (const auto& row : gold.rows) {
      for (const auto& c : row) ++gold_counts[cell_key(c)];
    }
    for (const auto& row : pred.rows) {
      for (const auto& c : row) {
        auto it = gold_counts.find(cell_key(c));
        if (it != gold_counts.end() && it->second > 0) {
          --it->second;
          ++matched;
        }
      }
    }
  }
  return static_cast<double>(matched) / static_cast<double>(denom);
}

VerdictRecord score_sql(std::string_view pred_sql, std::string_view gold_sql, const Database& db) {
  ResultTable gold;
  try {
    gold = execute_sql(gold_sql, db);
  } catch (const ExecError& e) {
    throw Error(ErrorCode::kDataset, "gold query failed: " + std::string(e.what()));
  }
  ResultTable pred;
  try {
    pred = execute_sql(pred_sql, db);
  } catch (const ExecError& e) {
    return {0.0, false, VerdictMethod::kExecMatch, std::string("execution failed: ") + e.what()};
  }
  if (tables_match(pred, gold)) {
    return {1.0, true, VerdictMethod::kExecMatch, "result tables match"};
  }
  const double score = partial_credit(pred, gold);
  return {score, false, VerdictMethod::kPartialCredit,
          "partial credit over " + std::to_string(std::max(pred.cell_count(), gold.cell_count())) +
              " cells" + (gold.ordered ? " (positional)" : "")};
}

std::string extract_sql(std::string_view response_text) {
  if (auto tagged = extract_tagged(response_text, "SQL")) return *tagged;
  return trim(response_text);
}

VerdictRecord score_sql_response(std::string_view response_text, std::string_view gold_sql,
                                 const Database& db) {
  const auto tagged = extract_tagged(response_text, "SQL");
  if (!tagged) return VerdictRecord::extraction_failed("no <SQL> tags");
  return score_sql(*tagged, gold_sql, db);
}

std::string serialize_table(const ResultTable& table, size_t max_rows) {
  std::string out;
  for (size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += '\t';
    out += table.columns[c];
  }
  out += '\n';
  const size_t shown = std::min(max_rows, table.rows.size());
  for (size_t r = 0; r < shown; ++r) {
    for (size_t c = 0; c < table.rows[r].size(); ++c) {
      if (c) out += '\t';
      out += cell_to_string(table.rows[r][c]);
    }
    out += '\n';
  }
  if (shown < table.rows.size()) {
    out += "... (truncated: showing " + std::to_string(shown) + " of " +
           std::to_string(table.rows.size()) + " rows)\n";
  }
  return out;
}

std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::uint64_t h = kFnvOffsetBasis;
  char buf[8192];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    h = fnv1a64(std::string_view(buf, static_cast<size_t>(in.gcount())), h);
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace reflectbench

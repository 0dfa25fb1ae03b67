#include "reflectbench/data/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "reflectbench/core/errors.hpp"
#include "reflectbench/core/random.hpp"
#include "reflectbench/verify/sql.hpp"

namespace reflectbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::map<std::string, std::string>& default_fields() {
  static const std::map<std::string, std::string> kDefaults = {
      {"id", "id"},
      {"problem", "problem"},
      {"answer", "answer"},
      {"text", "text"},
      {"label", "label"},
      {"source", "source"},
      {"target", "target"},
      {"target_language", "target_language"},
      {"source_language", "source_language"},
      {"question", "question"},
      {"query", "query"},
      {"db_id", "db_id"},
  };
  return kDefaults;
}

std::vector<std::string> string_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw Error(ErrorCode::kValidation, path + ": expected an array of strings");
  std::vector<std::string> out;
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) {
      throw Error(ErrorCode::kValidation, path + "[" + std::to_string(i) + "]: expected a string");
    }
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

// One record per line, or a single top-level JSON array.
std::vector<std::pair<size_t, json>> read_records(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, path.string() + ": cannot open");
  const auto start = in.tellg();
  char c = 0;
  while (in.get(c) && std::isspace(static_cast<unsigned char>(c))) {}
  in.clear();
  in.seekg(start);
  std::vector<std::pair<size_t, json>> out;
  if (c == '[') {
    json arr;
    try {
      arr = json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
    }
    for (size_t i = 0; i < arr.size(); ++i) out.emplace_back(i + 1, arr[i]);
    return out;
  }
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.emplace_back(line_no, json::parse(line));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string text_field(const json& rec, const std::string& name, const std::string& where,
                       bool required = true) {
  const auto it = rec.find(name);
  if (it == rec.end() || it->is_null()) {
    if (!required) return {};
    throw Error(ErrorCode::kParse, where + ": missing field '" + name + "'");
  }
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number() || it->is_boolean()) return it->dump();
  throw Error(ErrorCode::kParse, where + ": field '" + name + "' is not a string");
}

fs::path find_database(const fs::path& dir, const std::string& db_id) {
  for (const fs::path& candidate : {dir / db_id / (db_id + ".sqlite"), dir / (db_id + ".sqlite"),
                                    dir / db_id / (db_id + ".db"), dir / (db_id + ".db")}) {
    if (fs::exists(candidate)) return candidate;
  }
  throw Error(ErrorCode::kMissingDatabase, "no database file for '" + db_id + "' under " + dir.string());
}

// Spider tables.json: one entry per database with original table and column
// names. Column 0 is the "*" pseudo-column.
std::map<std::string, std::vector<TableSchema>> read_spider_tables(const fs::path& path) {
  std::map<std::string, std::vector<TableSchema>> out;
  for (const auto& [line, entry] : read_records(path)) {
    const std::string where = path.string() + ":" + std::to_string(line);
    try {
      const auto db_id = entry.at("db_id").get<std::string>();
      const auto& tables = entry.contains("table_names_original") ? entry["table_names_original"]
                                                                   : entry.at("table_names");
      const auto& columns = entry.contains("column_names_original")
                                ? entry["column_names_original"]
                                : entry.at("column_names");
      const auto& types = entry.at("column_types");
      std::vector<TableSchema> schema(tables.size());
      for (size_t t = 0; t < tables.size(); ++t) schema[t].name = tables[t].get<std::string>();
      for (size_t c = 0; c < columns.size(); ++c) {
        const int table = columns[c].at(0).get<int>();
        if (table < 0 || static_cast<size_t>(table) >= schema.size()) continue;
        schema[static_cast<size_t>(table)].columns.push_back(
            {columns[c].at(1).get<std::string>(), types.at(c).get<std::string>()});
      }
      out[db_id] = std::move(schema);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
  }
  return out;
}

std::vector<Sample> load_text_to_sql(const DatasetManifest& m) {
  const fs::path questions = m.path / m.questions_file;
  const fs::path db_dir = m.path / m.database_dir;
  const fs::path schema_path = m.path / m.schema_file;
  std::map<std::string, std::vector<TableSchema>> schemas;
  if (fs::exists(schema_path)) schemas = read_spider_tables(schema_path);
  const std::set<std::string> keep(m.databases.begin(), m.databases.end());

  std::map<std::string, fs::path> db_paths;
  std::vector<Sample> out;
  for (const auto& [line, rec] : read_records(questions)) {
    const std::string where = questions.string() + ":" + std::to_string(line);
    const std::string db_id = text_field(rec, m.field("db_id"), where);
    if (!keep.empty() && !keep.count(db_id)) continue;
    auto it = db_paths.find(db_id);
    if (it == db_paths.end()) it = db_paths.emplace(db_id, find_database(db_dir, db_id)).first;
    if (!schemas.count(db_id)) schemas[db_id] = read_sqlite_schema(it->second);

    Sample s;
    s.task = TaskKind::kTextToSql;
    s.id = text_field(rec, m.field("id"), where, false);
    if (s.id.empty()) s.id = db_id + "-" + std::to_string(line);
    TextToSqlInput in;
    in.question = text_field(rec, m.field("question"), where);
    in.db_id = db_id;
    in.db_path = it->second.string();
    in.schema = schemas[db_id];
    s.input = std::move(in);
    s.gold = text_field(rec, m.field("query"), where);
    out.push_back(std::move(s));
  }
  for (const auto& db : m.databases) {
    if (!db_paths.count(db)) find_database(db_dir, db);
  }
  return out;
}

std::vector<Sample> load_jsonl_task(const DatasetManifest& m) {
  std::vector<Sample> out;
  const std::string stem = m.path.stem().string();
  const std::set<std::string> pairs(m.language_pairs.begin(), m.language_pairs.end());
  for (const auto& [line, rec] : read_records(m.path)) {
    const std::string where = m.path.string() + ":" + std::to_string(line);
    if (!rec.is_object()) throw Error(ErrorCode::kParse, where + ": expected an object");
    Sample s;
    s.task = m.task;
    s.id = text_field(rec, m.field("id"), where, false);
    if (s.id.empty()) s.id = stem + "-" + std::to_string(line);
    switch (m.task) {
      case TaskKind::kMathReasoning:
        s.input = MathInput{text_field(rec, m.field("problem"), where)};
        s.gold = text_field(rec, m.field("answer"), where);
        break;
      case TaskKind::kSentiment:
        s.input = SentimentInput{text_field(rec, m.field("text"), where)};
        s.gold = text_field(rec, m.field("label"), where);
        break;
      case TaskKind::kTranslation:
        s.input = TranslationInput{text_field(rec, m.field("source"), where),
                                   text_field(rec, m.field("target_language"), where),
                                   text_field(rec, m.field("source_language"), where, false)};
        s.gold = text_field(rec, m.field("target"), where);
        if (!pairs.empty() && !pairs.count(language_pair(s))) continue;
        break;
      case TaskKind::kTextToSql: break;
    }
    try {
      validate_sample(s);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

DatasetManifest DatasetManifest::from_json(const json& j, const fs::path& base_dir) {
  if (!j.is_object()) throw Error(ErrorCode::kValidation, "dataset: expected an object");
  DatasetManifest m;
  if (!j.contains("task")) throw Error(ErrorCode::kValidation, "dataset.task: missing");
  if (!j.contains("path")) throw Error(ErrorCode::kValidation, "dataset.path: missing");
  try {
    m.task = parse_task_kind(j["task"].get<std::string>());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kValidation, std::string("dataset.task: ") + e.what());
  }
  const fs::path p = j["path"].get<std::string>();
  m.path = p.is_absolute() ? p : base_dir / p;
  if (j.contains("fields")) {
    if (!j["fields"].is_object()) throw Error(ErrorCode::kValidation, "dataset.fields: expected an object");
    for (const auto& [k, v] : j["fields"].items()) {
      if (!default_fields().count(k)) {
        throw Error(ErrorCode::kValidation, "dataset.fields." + k + ": unknown field");
      }
      if (!v.is_string()) throw Error(ErrorCode::kValidation, "dataset.fields." + k + ": expected a string");
      m.fields[k] = v.get<std::string>();
    }
  }
  if (j.contains("subset_size")) {
    const auto& v = j["subset_size"];
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
      throw Error(ErrorCode::kValidation, "dataset.subset_size: expected a positive integer");
    }
    m.subset_size = v.get<size_t>();
  }
  if (j.contains("subset_seed")) m.subset_seed = j["subset_seed"].get<std::uint64_t>();
  if (j.contains("sample_count")) m.sample_count = j["sample_count"].get<size_t>();
  if (j.contains("language_pairs")) m.language_pairs = string_list(j["language_pairs"], "dataset.language_pairs");
  if (j.contains("databases")) m.databases = string_list(j["databases"], "dataset.databases");
  m.questions_file = j.value("questions_file", m.questions_file);
  m.schema_file = j.value("schema_file", m.schema_file);
  m.database_dir = j.value("database_dir", m.database_dir);
  return m;
}

DatasetManifest DatasetManifest::from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + path.string());
  try {
    return from_json(json::parse(in), path.parent_path());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

std::string DatasetManifest::field(const std::string& canonical) const {
  const auto it = fields.find(canonical);
  return it != fields.end() ? it->second : default_fields().at(canonical);
}

std::string language_pair(const Sample& sample) {
  const auto* in = std::get_if<TranslationInput>(&sample.input);
  if (!in) return {};
  return in->source_language + "-" + in->target_language;
}

std::vector<size_t> sample_indices(size_t n, size_t size, std::uint64_t seed) {
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  size = std::min(size, n);
  std::mt19937_64 rng(seed);
  for (size_t i = 0; i < size; ++i) {
    const size_t j = i + static_cast<size_t>(uniform_index(rng, n - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(size);
  std::sort(idx.begin(), idx.end());
  return idx;
}

std::vector<size_t> stratified_indices(const std::vector<std::string>& group_of, size_t size,
                                       std::uint64_t seed) {
  std::map<std::string, std::vector<size_t>> groups;
  for (size_t i = 0; i < group_of.size(); ++i) groups[group_of[i]].push_back(i);
  size = std::min(size, group_of.size());

  // Water-fill quotas so group sizes differ by at most one where possible.
  std::vector<std::string> keys;
  for (const auto& [k, _] : groups) keys.push_back(k);
  std::mt19937_64 rng(seed);
  for (size_t i = keys.size(); i > 1; --i) {
    std::swap(keys[i - 1], keys[static_cast<size_t>(uniform_index(rng, i))]);
  }
  std::map<std::string, size_t> quota;
  size_t assigned = 0;
  while (assigned < size) {
    bool progressed = false;
    for (const auto& k : keys) {
      if (assigned == size) break;
      if (quota[k] < groups[k].size()) {
        ++quota[k];
        ++assigned;
        progressed = true;
      }
    }
    if (!progressed) break;
  }

  std::vector<size_t> out;
  for (const auto& [k, members] : groups) {
    const auto picked = sample_indices(members.size(), quota[k], rng());
    for (const size_t p : picked) out.push_back(members[p]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TableSchema> read_sqlite_schema(const fs::path& db_path) {
  const Database db = Database::open_read_only(db_path);
  const ResultTable tables = execute_sql(
      "SELECT name, sql FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite_%' "
      "ORDER BY rowid",
      db);
  std::vector<TableSchema> out;
  for (const auto& row : tables.rows) {
    TableSchema t;
    t.name = cell_to_string(row[0]);
    t.ddl = cell_to_string(row[1]);
    std::string pragma = "PRAGMA table_info(\"" + t.name + "\")";
    const ResultTable cols = execute_sql(pragma, db);
    for (const auto& c : cols.rows) t.columns.push_back({cell_to_string(c[1]), cell_to_string(c[2])});
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<Sample> load_dataset(const DatasetManifest& manifest) {
  std::vector<Sample> samples = manifest.task == TaskKind::kTextToSql
                                    ? load_text_to_sql(manifest)
                                    : load_jsonl_task(manifest);
  std::set<std::string> seen;
  for (const auto& s : samples) {
    if (!seen.insert(s.id).second) throw Error(ErrorCode::kDataset, "duplicate sample id '" + s.id + "'");
  }
  if (manifest.subset_size && *manifest.subset_size < samples.size()) {
    std::vector<size_t> keep;
    if (manifest.task == TaskKind::kTranslation) {
      std::vector<std::string> group_of;
      for (const auto& s : samples) group_of.push_back(language_pair(s));
      keep = stratified_indices(group_of, *manifest.subset_size, manifest.subset_seed);
    } else {
      keep = sample_indices(samples.size(), *manifest.subset_size, manifest.subset_seed);
    }
    std::vector<Sample> subset;
    for (const size_t i : keep) subset.push_back(std::move(samples[i]));
    samples = std::move(subset);
  }
  if (samples.empty()) throw Error(ErrorCode::kDataset, "dataset " + manifest.path.string() + " is empty");
  if (manifest.sample_count && *manifest.sample_count != samples.size()) {
    throw Error(ErrorCode::kDataset, "expected " + std::to_string(*manifest.sample_count) +
                                         " samples, loaded " + std::to_string(samples.size()));
  }
  return samples;
}

}  // namespace reflectbench

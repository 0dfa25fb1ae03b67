#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace reflectbench {

enum class TaskKind { kTranslation, kMathReasoning, kTextToSql, kSentiment };

std::string_view task_kind_name(TaskKind kind);
// Accepts the canonical names ("translation", "math", "text_to_sql",
// "sentiment") and a few aliases. Throws Error(kParse) otherwise.
TaskKind parse_task_kind(std::string_view name);

struct ColumnSchema {
  std::string name;
  std::string type;
};

struct TableSchema {
  std::string name;
  std::vector<ColumnSchema> columns;
  // Verbatim DDL when the schema came from the database itself; takes
  // precedence over the column list when rendering.
  std::string ddl;
};

struct TranslationInput {
  std::string source;
  std::string target_language;
  std::string source_language;
};

struct MathInput {
  std::string problem;
};

struct TextToSqlInput {
  std::string question;
  std::string db_id;
  std::string db_path;
  std::vector<TableSchema> schema;
};

struct SentimentInput {
  std::string review;
};

using SampleInput =
    std::variant<TranslationInput, MathInput, TextToSqlInput, SentimentInput>;

struct Sample {
  std::string id;
  TaskKind task = TaskKind::kMathReasoning;
  SampleInput input;
  // Reference translation, answer expression, gold SQL, or sentiment label.
  std::string gold;
};

enum class Role { kSystem, kUser, kAssistant };

std::string_view role_name(Role role);
Role parse_role(std::string_view name);

struct Message {
  Role role = Role::kUser;
  std::string content;
  bool cache_checkpoint = false;

  friend bool operator==(const Message&, const Message&) = default;
};

enum class FeedbackKind { kNone, kLlmJudge, kSqlExecution };

std::string_view feedback_kind_name(FeedbackKind kind);
FeedbackKind parse_feedback_kind(std::string_view name);

struct StrategyConfig {
  std::string model_id;
  int reflection_rounds = 0;
  FeedbackKind feedback = FeedbackKind::kNone;
  std::optional<int> thinking_budget;
  std::optional<std::string> judge_model_id;
  bool caching_enabled = false;

  // Stable, human-readable key, e.g. "r3+judge" or "budget4096+cache".
  std::string label() const;
  // model_id + "/" + label(); unique per strategy in a grid.
  std::string key() const;

  friend bool operator==(const StrategyConfig&, const StrategyConfig&) = default;
};

struct TokenUsage {
  std::int64_t input_tokens = 0;
  std::int64_t output_tokens = 0;
  std::int64_t cache_read_tokens = 0;
  std::int64_t cache_write_tokens = 0;

  // Every token of the request, wherever it was billed.
  std::int64_t prompt_tokens() const {
    return input_tokens + cache_read_tokens + cache_write_tokens;
  }

  TokenUsage& operator+=(const TokenUsage& other) {
    input_tokens += other.input_tokens;
    output_tokens += other.output_tokens;
    cache_read_tokens += other.cache_read_tokens;
    cache_write_tokens += other.cache_write_tokens;
    return *this;
  }
  friend TokenUsage operator+(TokenUsage a, const TokenUsage& b) { return a += b; }
  friend bool operator==(const TokenUsage&, const TokenUsage&) = default;
};

struct ValidationReport {
  std::vector<std::string> problems;

  bool ok() const { return problems.empty(); }
  std::string to_string() const;
};

// Checks a strategy against the task it will run on. In paper-parity mode
// rounds are restricted to {0, 1, 3} and a thinking budget cannot be
// combined with reflection.
ValidationReport validate_strategy(const StrategyConfig& strategy, TaskKind task,
                                   bool paper_parity = false);

// Throws Error(kValidation) listing every problem in the sample.
void validate_sample(const Sample& sample);

}  // namespace reflectbench

#include "reflectbench/core/types.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "reflectbench/core/errors.hpp"

namespace reflectbench {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingField: return "MissingField";
    case ErrorCode::kValidation: return "ValidationError";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kMissingDatabase: return "MissingDatabase";
    case ErrorCode::kDataset: return "DatasetError";
    case ErrorCode::kMissingPrice: return "MissingPrice";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kZeroBaseline: return "ZeroBaseline";
    case ErrorCode::kRaggedInput: return "RaggedInput";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kIo: return "IoError";
  }
  return "Error";
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view task_kind_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::kTranslation: return "translation";
    case TaskKind::kMathReasoning: return "math";
    case TaskKind::kTextToSql: return "text_to_sql";
    case TaskKind::kSentiment: return "sentiment";
  }
  return "unknown";
}

TaskKind parse_task_kind(std::string_view name) {
  const std::string n = lower(name);
  if (n == "translation" || n == "flores") return TaskKind::kTranslation;
  if (n == "math" || n == "math_reasoning" || n == "mathreasoning") return TaskKind::kMathReasoning;
  if (n == "text_to_sql" || n == "texttosql" || n == "sql" || n == "spider") return TaskKind::kTextToSql;
  if (n == "sentiment" || n == "imdb") return TaskKind::kSentiment;
  throw Error(ErrorCode::kParse, "unknown task kind '" + std::string(name) + "'");
}

std::string_view role_name(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

Role parse_role(std::string_view name) {
  if (name == "system") return Role::kSystem;
  if (name == "user") return Role::kUser;
  if (name == "assistant") return Role::kAssistant;
  throw Error(ErrorCode::kParse, "unknown message role '" + std::string(name) + "'");
}

std::string_view feedback_kind_name(FeedbackKind kind) {
  switch (kind) {
    case FeedbackKind::kNone: return "none";
    case FeedbackKind::kLlmJudge: return "llm_judge";
    case FeedbackKind::kSqlExecution: return "sql_execution";
  }
  return "none";
}

FeedbackKind parse_feedback_kind(std::string_view name) {
  const std::string n = lower(name);
  if (n == "none" || n.empty()) return FeedbackKind::kNone;
  if (n == "llm_judge" || n == "judge" || n == "llmjudge") return FeedbackKind::kLlmJudge;
  if (n == "sql_execution" || n == "sql" || n == "sqlexecution") return FeedbackKind::kSqlExecution;
  throw Error(ErrorCode::kParse, "unknown feedback mechanism '" + std::string(name) + "'");
}

std::string StrategyConfig::label() const {
  std::string out;
  if (thinking_budget) {
    out = "budget" + std::to_string(*thinking_budget);
    if (reflection_rounds > 0) out += "+r" + std::to_string(reflection_rounds);
  } else {
    out = "r" + std::to_string(reflection_rounds);
  }
  if (feedback == FeedbackKind::kLlmJudge) out += "+judge";
  if (feedback == FeedbackKind::kSqlExecution) out += "+sqlexec";
  if (caching_enabled) out += "+cache";
  return out;
}

std::string StrategyConfig::key() const { return model_id + "/" + label(); }

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& p : problems) {
    if (!out.empty()) out += "; ";
    out += p;
  }
  return out;
}

ValidationReport validate_strategy(const StrategyConfig& strategy, TaskKind task,
                                   bool paper_parity) {
  ValidationReport report;
  auto& p = report.problems;
  if (strategy.model_id.empty()) p.push_back("model_id must be non-empty");
  if (strategy.reflection_rounds < 0) p.push_back("reflection_rounds must be >= 0");
  if (strategy.thinking_budget && *strategy.thinking_budget <= 0) {
    p.push_back("thinking_budget must be a positive integer");
  }
  if (strategy.feedback == FeedbackKind::kSqlExecution && task != TaskKind::kTextToSql) {
    p.push_back("feedback sql_execution is only valid for text_to_sql, not " +
                std::string(task_kind_name(task)));
  }
  const bool has_judge = strategy.judge_model_id && !strategy.judge_model_id->empty();
  if (strategy.feedback == FeedbackKind::kLlmJudge && !has_judge) {
    p.push_back("feedback llm_judge requires judge_model_id");
  }
  if (strategy.feedback != FeedbackKind::kLlmJudge && strategy.judge_model_id) {
    p.push_back("judge_model_id is only allowed with feedback llm_judge");
  }
  if (strategy.feedback != FeedbackKind::kNone && strategy.reflection_rounds == 0) {
    p.push_back("a feedback mechanism needs at least one reflection round");
  }
  if (paper_parity) {
    const int r = strategy.reflection_rounds;
    if (r != 0 && r != 1 && r != 3) {
      p.push_back("paper-parity mode allows reflection_rounds in {0, 1, 3}, got " +
                  std::to_string(r));
    }
    if (strategy.thinking_budget && r > 0) {
      p.push_back("paper-parity mode forbids combining thinking_budget with reflection");
    }
  }
  return report;
}

namespace {

struct SampleChecker {
  std::vector<std::string>& problems;

  void require(const std::string& value, const char* field) {
    if (value.empty()) problems.push_back(std::string(field) + " is empty");
  }
  void operator()(const TranslationInput& in) {
    require(in.source, "source");
    require(in.target_language, "target_language");
  }
  void operator()(const MathInput& in) { require(in.problem, "problem"); }
  void operator()(const TextToSqlInput& in) {
    require(in.question, "question");
    require(in.db_id, "db_id");
  }
  void operator()(const SentimentInput& in) { require(in.review, "review"); }
};

bool payload_matches(TaskKind task, const SampleInput& input) {
  switch (task) {
    case TaskKind::kTranslation: return std::holds_alternative<TranslationInput>(input);
    case TaskKind::kMathReasoning: return std::holds_alternative<MathInput>(input);
    case TaskKind::kTextToSql: return std::holds_alternative<TextToSqlInput>(input);
    case TaskKind::kSentiment: return std::holds_alternative<SentimentInput>(input);
  }
  return false;
}

}  // namespace

void validate_sample(const Sample& sample) {
  std::vector<std::string> problems;
  if (sample.id.empty()) problems.push_back("id is empty");
  if (!payload_matches(sample.task, sample.input)) {
    problems.push_back("payload does not match task " +
                       std::string(task_kind_name(sample.task)));
  } else {
    std::visit(SampleChecker{problems}, sample.input);
  }
  if (sample.gold.empty()) problems.push_back("gold is empty");
  if (!problems.empty()) {
    ValidationReport r{problems};
    throw Error(ErrorCode::kValidation, "sample '" + sample.id + "': " + r.to_string());
  }
}

}  // namespace reflectbench

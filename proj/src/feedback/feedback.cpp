#include "reflectbench/feedback/feedback.hpp"

#include <chrono>

#include "reflectbench/verify/sql.hpp"

namespace reflectbench {

FeedbackResult judge_feedback(std::string_view user_query, std::string_view candidate,
                              Provider& judge, const GenerationParams& params,
                              const PromptTemplates& templates) {
  const Message request = build_judge_prompt(user_query, candidate, templates);
  const ModelResponse response = judge.complete(std::span<const Message>(&request, 1), params);
  FeedbackResult out;
  out.text = response.text;
  out.latency_s = response.latency_s;
  out.usage = response.usage;
  out.mechanism = FeedbackKind::kLlmJudge;
  out.usage_estimated = response.usage_estimated;
  out.retries = response.retries;
  return out;
}

FeedbackResult sql_execution_feedback(std::string_view candidate_sql, const Database& db,
                                      size_t max_rows) {
  FeedbackResult out;
  out.mechanism = FeedbackKind::kSqlExecution;
  const auto start = std::chrono::steady_clock::now();
  try {
    const ResultTable table = execute_sql(candidate_sql, db);
    out.text = "Query result:\n" + serialize_table(table, max_rows);
  } catch (const ExecError& e) {
    out.text = std::string("Query failed: ") + e.what();
  }
  out.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace reflectbench

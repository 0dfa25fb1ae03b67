#pragma once

#include <string>
#include <string_view>

#include "reflectbench/core/prompts.hpp"
#include "reflectbench/core/types.hpp"
#include "reflectbench/provider/provider.hpp"

namespace reflectbench {

class Database;

struct FeedbackResult {
  std::string text;
  double latency_s = 0.0;
  // Zero for mechanisms that do not call a model.
  TokenUsage usage;
  FeedbackKind mechanism = FeedbackKind::kNone;
  bool usage_estimated = false;
  int retries = 0;
};

inline constexpr size_t kFeedbackRowCap = 20;

// Asks the judge model for a CORRECT / INCORRECT verdict and returns its
// whole response as the feedback text. ProviderError propagates.
FeedbackResult judge_feedback(std::string_view user_query, std::string_view candidate,
                              Provider& judge, const GenerationParams& params = {},
                              const PromptTemplates& templates = PromptTemplates());

// Runs the candidate query and returns the result table (at most `max_rows`
// rows) or the engine's error message. Never throws for a bad query.
FeedbackResult sql_execution_feedback(std::string_view candidate_sql, const Database& db,
                                      size_t max_rows = kFeedbackRowCap);

}  // namespace reflectbench

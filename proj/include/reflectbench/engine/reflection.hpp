#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "reflectbench/core/prompts.hpp"
#include "reflectbench/core/types.hpp"
#include "reflectbench/feedback/feedback.hpp"
#include "reflectbench/provider/provider.hpp"
#include "reflectbench/verify/scoring.hpp"

namespace reflectbench {

class Database;

inline constexpr int kTraceVersion = 1;

struct RoundSnapshot {
  int round_index = 0;
  ModelResponse response;
  // Feedback injected before this round; absent at round 0 and when the
  // strategy has no feedback mechanism.
  std::optional<std::string> feedback_text;
  double feedback_latency_s = 0.0;
  TokenUsage feedback_usage;
  std::optional<VerdictRecord> verdict;
};

struct SampleTrace {
  std::string sample_id;
  TaskKind task = TaskKind::kMathReasoning;
  StrategyConfig strategy;
  std::string family;
  std::vector<RoundSnapshot> snapshots;
  double total_latency_s = 0.0;
  TokenUsage total_usage;
  bool estimated_usage = false;
  int retries = 0;
  bool truncated = false;
  std::string abort_reason;

  // Usage billed to the strategy's model and to the judge model.
  TokenUsage model_usage() const;
  TokenUsage feedback_usage() const;

  const RoundSnapshot* final_snapshot() const {
    return snapshots.empty() ? nullptr : &snapshots.back();
  }
  // Final verdict score; 0 when the trace has no verdict.
  double final_score() const;
  bool final_pass() const;
};

nlohmann::json strategy_to_json(const StrategyConfig& s);
StrategyConfig strategy_from_json(const nlohmann::json& j);
nlohmann::json verdict_to_json(const VerdictRecord& v);
VerdictRecord verdict_from_json(const nlohmann::json& j);
nlohmann::json trace_to_json(const SampleTrace& t);
// Throws Error(kParse) on a missing field or an unknown trace_version.
SampleTrace trace_from_json(const nlohmann::json& j);

// Reads a trace JSONL file, skipping header lines. Errors carry file:line.
std::vector<SampleTrace> read_traces(const std::filesystem::path& path);

// Copy of `base` carrying the strategy's thinking budget, with max_tokens
// raised to budget + headroom when it would not fit.
GenerationParams apply_budget(const StrategyConfig& strategy, const GenerationParams& base,
                              int answer_headroom = 1024);

struct EngineOptions {
  GenerationParams base_params;
  int answer_headroom = 1024;
  PromptTemplates templates;
  // Required for SqlExecution feedback.
  const Database* database = nullptr;
};

// Runs one sample under one strategy: the initial call, then one call per
// reflection round with feedback computed from the latest answer. The
// transcript only ever grows. A ProviderError ends the run early with the
// snapshots gathered so far and the reason recorded.
SampleTrace run_sample(const Sample& sample, const StrategyConfig& strategy, Provider& provider,
                       Provider* feedback_provider, const EngineOptions& options = {});

// Scores every snapshot of `trace` against the sample's gold answer.
void evaluate_trace(SampleTrace& trace, const Sample& sample,
                    const VerifierOptions& options = {});

}  // namespace reflectbench

#include "reflectbench/engine/reflection.hpp"

#include <fstream>

#include "reflectbench/core/errors.hpp"
#include "reflectbench/provider/cassette.hpp"
#include "reflectbench/verify/sql.hpp"

namespace reflectbench {

using nlohmann::json;

TokenUsage SampleTrace::model_usage() const {
  TokenUsage u;
  for (const auto& s : snapshots) u += s.response.usage;
  return u;
}

TokenUsage SampleTrace::feedback_usage() const {
  TokenUsage u;
  for (const auto& s : snapshots) u += s.feedback_usage;
  return u;
}

double SampleTrace::final_score() const {
  const auto* last = final_snapshot();
  return last && last->verdict ? last->verdict->score : 0.0;
}

bool SampleTrace::final_pass() const {
  const auto* last = final_snapshot();
  return last && last->verdict && last->verdict->pass;
}

json strategy_to_json(const StrategyConfig& s) {
  json j = {{"model_id", s.model_id},
            {"reflection_rounds", s.reflection_rounds},
            {"feedback", std::string(feedback_kind_name(s.feedback))},
            {"caching_enabled", s.caching_enabled}};
  j["thinking_budget"] = s.thinking_budget ? json(*s.thinking_budget) : json(nullptr);
  j["judge_model_id"] = s.judge_model_id ? json(*s.judge_model_id) : json(nullptr);
  return j;
}

StrategyConfig strategy_from_json(const json& j) {
  StrategyConfig s;
  s.model_id = j.at("model_id").get<std::string>();
  s.reflection_rounds = j.value("reflection_rounds", 0);
  s.feedback = parse_feedback_kind(j.value("feedback", std::string("none")));
  s.caching_enabled = j.value("caching_enabled", false);
  if (j.contains("thinking_budget") && !j["thinking_budget"].is_null()) {
    s.thinking_budget = j["thinking_budget"].get<int>();
  }
  if (j.contains("judge_model_id") && !j["judge_model_id"].is_null()) {
    s.judge_model_id = j["judge_model_id"].get<std::string>();
  }
  return s;
}

json verdict_to_json(const VerdictRecord& v) {
  return {{"score", v.score},
          {"pass", v.pass},
          {"method", std::string(verdict_method_name(v.method))},
          {"detail", v.detail}};
}

VerdictRecord verdict_from_json(const json& j) {
  VerdictRecord v;
  v.score = j.at("score").get<double>();
  v.pass = j.at("pass").get<bool>();
  v.method = parse_verdict_method(j.at("method").get<std::string>());
  v.detail = j.value("detail", std::string());
  return v;
}

json trace_to_json(const SampleTrace& t) {
  json snaps = json::array();
  for (const auto& s : t.snapshots) {
    json js = {{"round_index", s.round_index},
               {"text", s.response.text},
               {"usage", usage_to_json(s.response.usage)},
               {"latency_s", s.response.latency_s},
               {"usage_estimated", s.response.usage_estimated},
               {"retries", s.response.retries}};
    if (s.response.thinking_text) js["thinking_text"] = *s.response.thinking_text;
    if (s.feedback_text) {
      js["feedback"] = {{"text", *s.feedback_text},
                        {"latency_s", s.feedback_latency_s},
                        {"usage", usage_to_json(s.feedback_usage)}};
    }
    js["verdict"] = s.verdict ? verdict_to_json(*s.verdict) : json(nullptr);
    snaps.push_back(std::move(js));
  }
  json j = {{"trace_version", kTraceVersion},
            {"sample_id", t.sample_id},
            {"task", std::string(task_kind_name(t.task))},
            {"strategy_key", t.strategy.key()},
            {"strategy", strategy_to_json(t.strategy)},
            {"family", t.family},
            {"snapshots", std::move(snaps)},
            {"total_latency_s", t.total_latency_s},
            {"total_usage", usage_to_json(t.total_usage)},
            {"estimated_usage", t.estimated_usage},
            {"retries", t.retries},
            {"truncated", t.truncated}};
  if (t.truncated) j["abort_reason"] = t.abort_reason;
  return j;
}

SampleTrace trace_from_json(const json& j) {
  try {
    const int version = j.at("trace_version").get<int>();
    if (version != kTraceVersion) {
      throw Error(ErrorCode::kParse, "unsupported trace_version " + std::to_string(version));
    }
    SampleTrace t;
    t.sample_id = j.at("sample_id").get<std::string>();
    t.task = parse_task_kind(j.at("task").get<std::string>());
    t.strategy = strategy_from_json(j.at("strategy"));
    t.family = j.value("family", std::string());
    for (const auto& js : j.at("snapshots")) {
      RoundSnapshot s;
      s.round_index = js.at("round_index").get<int>();
      s.response.text = js.at("text").get<std::string>();
      s.response.usage = usage_from_json(js.at("usage"));
      s.response.latency_s = js.at("latency_s").get<double>();
      s.response.usage_estimated = js.value("usage_estimated", false);
      s.response.retries = js.value("retries", 0);
      if (js.contains("thinking_text")) s.response.thinking_text = js["thinking_text"];
      if (js.contains("feedback")) {
        const auto& f = js["feedback"];
        s.feedback_text = f.at("text").get<std::string>();
        s.feedback_latency_s = f.value("latency_s", 0.0);
        if (f.contains("usage")) s.feedback_usage = usage_from_json(f["usage"]);
      }
      if (js.contains("verdict") && !js["verdict"].is_null()) {
        s.verdict = verdict_from_json(js["verdict"]);
      }
      t.snapshots.push_back(std::move(s));
    }
    t.total_latency_s = j.at("total_latency_s").get<double>();
    t.total_usage = usage_from_json(j.at("total_usage"));
    t.estimated_usage = j.value("estimated_usage", false);
    t.retries = j.value("retries", 0);
    t.truncated = j.value("truncated", false);
    t.abort_reason = j.value("abort_reason", std::string());
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed trace: ") + e.what());
  }
}

std::vector<SampleTrace> read_traces(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<SampleTrace> traces;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
    if (j.value("kind", std::string()) == "header") continue;
    try {
      traces.push_back(trace_from_json(j));
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
  }
  return traces;
}

GenerationParams apply_budget(const StrategyConfig& strategy, const GenerationParams& base,
                              int answer_headroom) {
  GenerationParams p = base;
  if (strategy.thinking_budget) {
    p.thinking_budget = *strategy.thinking_budget;
    p.max_tokens = std::max(p.max_tokens, *strategy.thinking_budget + answer_headroom);
  }
  return p;
}

namespace {

FeedbackResult compute_feedback(const Sample& sample, const StrategyConfig& strategy,
                                const std::string& first_user_message,
                                const std::string& latest_answer, Provider* feedback_provider,
                                const EngineOptions& options) {
  switch (strategy.feedback) {
    case FeedbackKind::kNone: return {};
    case FeedbackKind::kLlmJudge: {
      if (!feedback_provider) {
        throw Error(ErrorCode::kValidation, "judge feedback needs a judge provider");
      }
      GenerationParams judge_params = options.base_params;
      judge_params.thinking_budget.reset();
      return judge_feedback(first_user_message, latest_answer, *feedback_provider, judge_params,
                            options.templates);
    }
    case FeedbackKind::kSqlExecution: {
      if (options.database) return sql_execution_feedback(extract_sql(latest_answer), *options.database);
      const auto* in = std::get_if<TextToSqlInput>(&sample.input);
      if (!in) throw Error(ErrorCode::kValidation, "SQL feedback on a non-SQL sample");
      const Database db = Database::open_read_only(in->db_path);
      return sql_execution_feedback(extract_sql(latest_answer), db);
    }
  }
  return {};
}

void account(SampleTrace& trace, const ModelResponse& r) {
  trace.total_latency_s += r.latency_s;
  trace.total_usage += r.usage;
  trace.estimated_usage = trace.estimated_usage || r.usage_estimated;
  trace.retries += r.retries;
}

}  // namespace

SampleTrace run_sample(const Sample& sample, const StrategyConfig& strategy, Provider& provider,
                       Provider* feedback_provider, const EngineOptions& options) {
  SampleTrace trace;
  trace.sample_id = sample.id;
  trace.task = sample.task;
  trace.strategy = strategy;

  const GenerationParams params =
      apply_budget(strategy, options.base_params, options.answer_headroom);
  std::vector<Message> transcript;
  transcript.push_back(build_initial_prompt(sample, options.templates));
  transcript.back().cache_checkpoint = strategy.caching_enabled;
  const std::string first_user_message = transcript.front().content;

  std::optional<std::string> pending_feedback;
  FeedbackResult pending_result;
  for (int round = 0; round <= strategy.reflection_rounds; ++round) {
    try {
      if (round > 0) {
        pending_result = compute_feedback(sample, strategy, first_user_message,
                                          transcript.back().content, feedback_provider, options);
        trace.total_latency_s += pending_result.latency_s;
        trace.total_usage += pending_result.usage;
        trace.estimated_usage = trace.estimated_usage || pending_result.usage_estimated;
        trace.retries += pending_result.retries;
        pending_feedback.reset();
        if (strategy.feedback != FeedbackKind::kNone) pending_feedback = pending_result.text;
        transcript.push_back(
            build_reflection_prompt(first_user_message, pending_feedback, options.templates));
      }
      ModelResponse response = provider.complete(transcript, params);
      account(trace, response);

      RoundSnapshot snap;
      snap.round_index = round;
      snap.feedback_text = pending_feedback;
      if (pending_feedback) {
        snap.feedback_latency_s = pending_result.latency_s;
        snap.feedback_usage = pending_result.usage;
      }
      transcript.push_back({Role::kAssistant, response.text, strategy.caching_enabled});
      snap.response = std::move(response);
      trace.snapshots.push_back(std::move(snap));
    } catch (const ProviderError& e) {
      trace.truncated = true;
      trace.abort_reason = e.what();
      break;
    }
  }
  return trace;
}

void evaluate_trace(SampleTrace& trace, const Sample& sample, const VerifierOptions& options) {
  for (auto& snap : trace.snapshots) snap.verdict = score_response(sample, snap.response.text, options);
}

}  // namespace reflectbench

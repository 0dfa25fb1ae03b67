#include "reflectbench/provider/mock.hpp"

#include <algorithm>

#include "reflectbench/core/errors.hpp"

namespace reflectbench {

namespace {

using nlohmann::json;

// A round's alternatives may be written as a single string or as a list.
std::vector<std::vector<std::string>> parse_rounds(const json& j, const std::string& where) {
  if (j.is_string()) return {{j.get<std::string>()}};
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::kParse, where + ": expected a non-empty array of replies");
  }
  std::vector<std::vector<std::string>> rounds;
  for (const auto& round : j) {
    if (round.is_string()) {
      rounds.push_back({round.get<std::string>()});
    } else if (round.is_array() && !round.empty()) {
      rounds.push_back(round.get<std::vector<std::string>>());
    } else {
      throw Error(ErrorCode::kParse, where + ": each round must be a string or a non-empty array");
    }
  }
  return rounds;
}

json rounds_to_json(const std::vector<std::vector<std::string>>& rounds) {
  json out = json::array();
  for (const auto& r : rounds) out.push_back(r);
  return out;
}

}  // namespace

MockScript MockScript::from_json(const json& j) {
  MockScript s;
  if (!j.is_object()) throw Error(ErrorCode::kParse, "mock script must be an object");
  if (j.contains("rules")) {
    const auto& rules = j.at("rules");
    for (size_t i = 0; i < rules.size(); ++i) {
      const std::string where = "rules[" + std::to_string(i) + "]";
      Rule rule;
      rule.contains = rules[i].value("contains", "");
      if (!rules[i].contains("replies")) throw Error(ErrorCode::kParse, where + ": missing replies");
      rule.replies = parse_rounds(rules[i].at("replies"), where + ".replies");
      s.rules.push_back(std::move(rule));
    }
  }
  if (j.contains("default_replies")) {
    s.default_replies = parse_rounds(j.at("default_replies"), "default_replies");
  }
  s.seed = j.value("seed", s.seed);
  s.base_latency_s = j.value("base_latency_s", s.base_latency_s);
  s.per_token_latency_s = j.value("per_token_latency_s", s.per_token_latency_s);
  s.supports_thinking = j.value("supports_thinking", s.supports_thinking);
  s.thinking_fraction = j.value("thinking_fraction", s.thinking_fraction);
  if (s.base_latency_s < 0 || s.per_token_latency_s < 0) {
    throw Error(ErrorCode::kParse, "mock latencies must be >= 0");
  }
  return s;
}

json MockScript::to_json() const {
  json rules_json = json::array();
  for (const auto& r : rules) {
    rules_json.push_back({{"contains", r.contains}, {"replies", rounds_to_json(r.replies)}});
  }
  return {{"rules", rules_json},
          {"default_replies", rounds_to_json(default_replies)},
          {"seed", seed},
          {"base_latency_s", base_latency_s},
          {"per_token_latency_s", per_token_latency_s},
          {"supports_thinking", supports_thinking},
          {"thinking_fraction", thinking_fraction}};
}

MockProvider::MockProvider(MockScript script, std::string name)
    : script_(std::move(script)), name_(std::move(name)) {}

TokenUsage checkpoint_usage(std::span<const Message> transcript) {
  std::vector<size_t> checkpoints;
  for (size_t i = 0; i < transcript.size(); ++i) {
    if (transcript[i].cache_checkpoint) checkpoints.push_back(i);
  }
  TokenUsage usage;
  const auto tokens_in = [&](size_t begin, size_t end) {
    return token_estimate(transcript.subspan(begin, end - begin));
  };
  if (checkpoints.empty()) {
    usage.input_tokens = token_estimate(transcript);
    return usage;
  }
  const size_t last_end = checkpoints.back() + 1;
  const size_t prev_end = checkpoints.size() >= 2 ? checkpoints[checkpoints.size() - 2] + 1 : 0;
  usage.cache_read_tokens = tokens_in(0, prev_end);
  usage.cache_write_tokens = tokens_in(prev_end, last_end);
  usage.input_tokens = tokens_in(last_end, transcript.size());
  return usage;
}

ModelResponse MockProvider::complete(std::span<const Message> transcript,
                                     const GenerationParams& params) {
  check_transcript(transcript);
  if (params.thinking_budget && !script_.supports_thinking) {
    throw ProviderError(ProviderErrorKind::kRejected,
                        describe() + " does not support a thinking budget");
  }

  const Message* first_user = nullptr;
  int assistant_turns = 0;
  for (const auto& m : transcript) {
    if (m.role == Role::kUser && first_user == nullptr) first_user = &m;
    if (m.role == Role::kAssistant) ++assistant_turns;
  }

  const std::vector<std::vector<std::string>>* rounds = &script_.default_replies;
  for (const auto& rule : script_.rules) {
    if (first_user->content.find(rule.contains) != std::string::npos) {
      rounds = &rule.replies;
      break;
    }
  }
  const auto& choices =
      (*rounds)[std::min<size_t>(static_cast<size_t>(assistant_turns), rounds->size() - 1)];

  std::uint64_t h = fnv1a64(std::to_string(script_.seed));
  for (const auto& m : transcript) {
    h = fnv1a64(role_name(m.role), h);
    h = fnv1a64(m.content, h);
    h = fnv1a64(std::string_view("\x1f", 1), h);
  }

  ModelResponse response;
  response.text = choices[h % choices.size()];
  response.usage = checkpoint_usage(transcript);
  response.usage.output_tokens = token_estimate(response.text);
  if (params.thinking_budget) {
    const auto thinking_tokens =
        static_cast<std::int64_t>(*params.thinking_budget * script_.thinking_fraction);
    response.usage.output_tokens += thinking_tokens;
    response.thinking_text = "[mock reasoning: " + std::to_string(thinking_tokens) + " tokens]";
  }
  response.usage_estimated = true;
  response.latency_s = script_.base_latency_s +
                       script_.per_token_latency_s * static_cast<double>(response.usage.output_tokens);
  return response;
}

}  // namespace reflectbench

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reflectbench/provider/provider.hpp"
#include "json.hpp"

namespace reflectbench {

// Scripted responses for MockProvider. A reply is chosen by
//   1. the first rule whose `contains` text occurs in the first user message,
//      falling back to `default_replies`;
//   2. the round, counted as the number of assistant messages already in the
//      transcript (clamped to the last scripted round);
//   3. among that round's alternatives, a hash of (seed, transcript).
struct MockScript {
  struct Rule {
    std::string contains;
    std::vector<std::vector<std::string>> replies;
  };

  std::vector<Rule> rules;
  std::vector<std::vector<std::string>> default_replies{{"<answer>0</answer>"}};
  std::uint64_t seed = 0;
  double base_latency_s = 0.5;
  double per_token_latency_s = 0.01;
  bool supports_thinking = true;
  // Share of the thinking budget the mock claims to have used.
  double thinking_fraction = 0.5;

  static MockScript from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Deterministic provider: the response is a pure function of the script and
// the request. Usage is synthesised with token_estimate and latency as
// base + per_token * output_tokens.
class MockProvider final : public Provider {
 public:
  explicit MockProvider(MockScript script, std::string name = "mock");

  ModelResponse complete(std::span<const Message> transcript,
                         const GenerationParams& params) override;
  std::string describe() const override { return "mock:" + name_; }

  const MockScript& script() const { return script_; }

 private:
  MockScript script_;
  std::string name_;
};

// Splits a transcript's prompt tokens into cache reads, cache writes and
// uncached input using the checkpoint flags: everything up to the
// second-to-last checkpoint was cached by an earlier call, the span up to the
// last checkpoint is written now, the rest is plain input. With no
// checkpoints the whole prompt is plain input.
TokenUsage checkpoint_usage(std::span<const Message> transcript);

}  // namespace reflectbench

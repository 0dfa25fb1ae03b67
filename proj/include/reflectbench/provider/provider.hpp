#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "reflectbench/core/hash.hpp"
#include "reflectbench/core/types.hpp"

namespace reflectbench {

struct GenerationParams {
  int max_tokens = 2048;
  // Absent means the provider default.
  std::optional<double> temperature;
  std::optional<int> thinking_budget;

  // Throws Error(kValidation) on a non-positive max_tokens, a negative
  // temperature, or a budget larger than max_tokens.
  void validate() const;

  friend bool operator==(const GenerationParams&, const GenerationParams&) = default;
};

struct ModelResponse {
  std::string text;
  TokenUsage usage;
  double latency_s = 0.0;
  std::optional<std::string> thinking_text;
  // Set when usage was synthesised with token_estimate instead of reported.
  bool usage_estimated = false;
  int retries = 0;

  friend bool operator==(const ModelResponse&, const ModelResponse&) = default;
};

enum class ProviderErrorKind { kTransport, kRateLimited, kRejected, kCassetteMiss };

std::string_view provider_error_kind_name(ProviderErrorKind kind);

class ProviderError : public std::runtime_error {
 public:
  ProviderError(ProviderErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(provider_error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ProviderErrorKind kind() const { return kind_; }
  bool retryable() const {
    return kind_ == ProviderErrorKind::kTransport || kind_ == ProviderErrorKind::kRateLimited;
  }

 private:
  ProviderErrorKind kind_;
};

// A chat-completion backend. Implementations must be safe to call from
// several threads at once.
class Provider {
 public:
  virtual ~Provider() = default;

  // `transcript` must end with a user message. Latency covers the interval
  // from sending the request to having the full response.
  virtual ModelResponse complete(std::span<const Message> transcript,
                                 const GenerationParams& params) = 0;

  virtual std::string describe() const = 0;
};

// ceil(code points / 4). Deterministic and monotone in the text length.
std::int64_t token_estimate(std::string_view text);

// Sum of per-message estimates, so the count is additive over a transcript.
std::int64_t token_estimate(std::span<const Message> transcript);

// Throws ProviderError(kRejected) when the transcript is empty or does not
// end with a user message.
void check_transcript(std::span<const Message> transcript);

// Stable 64-bit FNV-1a hash of the canonical JSON of (scope, transcript,
// params), as 16 lowercase hex digits.
std::string request_hash(std::string_view scope, std::span<const Message> transcript,
                         const GenerationParams& params);

}  // namespace reflectbench

#include "reflectbench/provider/provider.hpp"

#include <cstdio>

#include "json.hpp"
#include "reflectbench/core/errors.hpp"

namespace reflectbench {

std::string_view provider_error_kind_name(ProviderErrorKind kind) {
  switch (kind) {
    case ProviderErrorKind::kTransport: return "TransportError";
    case ProviderErrorKind::kRateLimited: return "RateLimited";
    case ProviderErrorKind::kRejected: return "ProviderRejected";
    case ProviderErrorKind::kCassetteMiss: return "CassetteMiss";
  }
  return "ProviderError";
}

void GenerationParams::validate() const {
  if (max_tokens <= 0) throw Error(ErrorCode::kValidation, "max_tokens must be positive");
  if (temperature && *temperature < 0.0) {
    throw Error(ErrorCode::kValidation, "temperature must be >= 0");
  }
  if (thinking_budget) {
    if (*thinking_budget <= 0) {
      throw Error(ErrorCode::kValidation, "thinking_budget must be positive");
    }
    if (*thinking_budget > max_tokens) {
      throw Error(ErrorCode::kValidation, "thinking_budget exceeds max_tokens");
    }
  }
}

std::int64_t token_estimate(std::string_view text) {
  std::int64_t code_points = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++code_points;
  }
  return (code_points + 3) / 4;
}

std::int64_t token_estimate(std::span<const Message> transcript) {
  std::int64_t total = 0;
  for (const auto& m : transcript) total += token_estimate(m.content);
  return total;
}

void check_transcript(std::span<const Message> transcript) {
  if (transcript.empty()) {
    throw ProviderError(ProviderErrorKind::kRejected, "empty transcript");
  }
  if (transcript.back().role != Role::kUser) {
    throw ProviderError(ProviderErrorKind::kRejected, "transcript must end with a user message");
  }
}

std::string request_hash(std::string_view scope, std::span<const Message> transcript,
                         const GenerationParams& params) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : transcript) {
    messages.push_back({{"role", role_name(m.role)},
                        {"content", m.content},
                        {"cache_checkpoint", m.cache_checkpoint}});
  }
  nlohmann::json p = {{"max_tokens", params.max_tokens}};
  if (params.temperature) p["temperature"] = *params.temperature;
  if (params.thinking_budget) p["thinking_budget"] = *params.thinking_budget;
  const nlohmann::json canonical = {
      {"scope", scope}, {"transcript", messages}, {"params", p}};
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical.dump())));
  return buf;
}

}  // namespace reflectbench

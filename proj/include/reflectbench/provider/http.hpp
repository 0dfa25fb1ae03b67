#pragma once

#include <optional>
#include <string>

#include "json.hpp"
#include "reflectbench/provider/provider.hpp"

namespace reflectbench {

// Maps the neutral request/response onto one vendor's JSON field names.
// Paths are dotted, with numeric components indexing arrays
// ("choices.0.message.content").
struct HttpAdapter {
  std::string model_field = "model";
  std::string remote_model;  // empty: the model_id is sent as-is
  std::string messages_field = "messages";
  std::string max_tokens_field = "max_tokens";
  std::string temperature_field = "temperature";
  // Where the thinking budget goes. Empty means the endpoint cannot take one
  // and a budgeted request is rejected.
  std::string thinking_budget_field;
  // Merged into the body whenever a thinking budget is sent.
  nlohmann::json thinking_extra = nlohmann::json::object();
  // When set, checkpointed messages carry this field with cache_marker_value.
  std::string cache_marker_field;
  nlohmann::json cache_marker_value = nlohmann::json::object();

  std::string text_path = "choices.0.message.content";
  std::string thinking_path;
  std::string input_tokens_path = "usage.prompt_tokens";
  std::string output_tokens_path = "usage.completion_tokens";
  std::string cache_read_tokens_path;
  std::string cache_write_tokens_path;

  static HttpAdapter from_json(const nlohmann::json& j);
};

struct HttpEndpoint {
  std::string url;  // scheme://host[:port]/path
  // Name of the environment variable holding the API key; never the key.
  std::string auth_env;
  std::string auth_header = "Authorization";
  std::string auth_prefix = "Bearer ";
  double timeout_s = 120.0;

  static HttpEndpoint from_json(const nlohmann::json& j);
};

// Dotted-path lookup; nullptr when any component is missing.
const nlohmann::json* json_path(const nlohmann::json& root, const std::string& path);
void json_path_set(nlohmann::json& root, const std::string& path, nlohmann::json value);

class HttpProvider final : public Provider {
 public:
  HttpProvider(std::string model_id, HttpEndpoint endpoint, HttpAdapter adapter);

  ModelResponse complete(std::span<const Message> transcript,
                         const GenerationParams& params) override;
  std::string describe() const override { return "http:" + endpoint_.url; }

  // Exposed for tests: the request body and response decoding without I/O.
  nlohmann::json build_request(std::span<const Message> transcript,
                               const GenerationParams& params) const;
  ModelResponse parse_response(const std::string& body, std::span<const Message> transcript) const;

 private:
  std::string model_id_;
  HttpEndpoint endpoint_;
  HttpAdapter adapter_;
  std::string scheme_host_port_;
  std::string path_;
};

}  // namespace reflectbench

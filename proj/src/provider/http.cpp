#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "reflectbench/provider/http.hpp"

#include <chrono>
#include <cstdlib>

#include "httplib.h"
#include "reflectbench/core/errors.hpp"

namespace reflectbench {

using nlohmann::json;

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (start <= path.size()) {
    const size_t dot = path.find('.', start);
    const size_t end = dot == std::string::npos ? path.size() : dot;
    parts.push_back(path.substr(start, end - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return parts;
}

bool is_index(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789") == std::string::npos;
}

std::int64_t usage_at(const json& body, const std::string& path, bool& found) {
  if (path.empty()) return 0;
  const json* v = json_path(body, path);
  if (v == nullptr || !v->is_number()) return 0;
  found = true;
  return v->get<std::int64_t>();
}

}  // namespace

const json* json_path(const json& root, const std::string& path) {
  const json* cur = &root;
  for (const auto& part : split_path(path)) {
    if (cur->is_array() && is_index(part)) {
      const size_t idx = std::stoul(part);
      if (idx >= cur->size()) return nullptr;
      cur = &(*cur)[idx];
    } else if (cur->is_object() && cur->contains(part)) {
      cur = &(*cur)[part];
    } else {
      return nullptr;
    }
  }
  return cur;
}

void json_path_set(json& root, const std::string& path, json value) {
  json* cur = &root;
  for (const auto& part : split_path(path)) cur = &(*cur)[part];
  *cur = std::move(value);
}

HttpAdapter HttpAdapter::from_json(const json& j) {
  HttpAdapter a;
  a.model_field = j.value("model_field", a.model_field);
  a.remote_model = j.value("remote_model", a.remote_model);
  a.messages_field = j.value("messages_field", a.messages_field);
  a.max_tokens_field = j.value("max_tokens_field", a.max_tokens_field);
  a.temperature_field = j.value("temperature_field", a.temperature_field);
  a.thinking_budget_field = j.value("thinking_budget_field", a.thinking_budget_field);
  if (j.contains("thinking_extra")) a.thinking_extra = j.at("thinking_extra");
  a.cache_marker_field = j.value("cache_marker_field", a.cache_marker_field);
  if (j.contains("cache_marker_value")) a.cache_marker_value = j.at("cache_marker_value");
  a.text_path = j.value("text_path", a.text_path);
  a.thinking_path = j.value("thinking_path", a.thinking_path);
  a.input_tokens_path = j.value("input_tokens_path", a.input_tokens_path);
  a.output_tokens_path = j.value("output_tokens_path", a.output_tokens_path);
  a.cache_read_tokens_path = j.value("cache_read_tokens_path", a.cache_read_tokens_path);
  a.cache_write_tokens_path = j.value("cache_write_tokens_path", a.cache_write_tokens_path);
  return a;
}

HttpEndpoint HttpEndpoint::from_json(const json& j) {
  HttpEndpoint e;
  e.url = j.at("endpoint").get<std::string>();
  e.auth_env = j.value("auth_env", e.auth_env);
  e.auth_header = j.value("auth_header", e.auth_header);
  e.auth_prefix = j.value("auth_prefix", e.auth_prefix);
  e.timeout_s = j.value("timeout_s", e.timeout_s);
  return e;
}

HttpProvider::HttpProvider(std::string model_id, HttpEndpoint endpoint, HttpAdapter adapter)
    : model_id_(std::move(model_id)), endpoint_(std::move(endpoint)), adapter_(std::move(adapter)) {
  const size_t scheme_end = endpoint_.url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kValidation, "endpoint '" + endpoint_.url + "' has no scheme");
  }
  const size_t path_start = endpoint_.url.find('/', scheme_end + 3);
  scheme_host_port_ = endpoint_.url.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : endpoint_.url.substr(path_start);
}

json HttpProvider::build_request(std::span<const Message> transcript,
                                 const GenerationParams& params) const {
  json body = json::object();
  json_path_set(body, adapter_.model_field,
                adapter_.remote_model.empty() ? model_id_ : adapter_.remote_model);
  json messages = json::array();
  for (const auto& m : transcript) {
    json msg = {{"role", role_name(m.role)}, {"content", m.content}};
    if (m.cache_checkpoint && !adapter_.cache_marker_field.empty()) {
      json_path_set(msg, adapter_.cache_marker_field, adapter_.cache_marker_value);
    }
    messages.push_back(std::move(msg));
  }
  json_path_set(body, adapter_.messages_field, std::move(messages));
  json_path_set(body, adapter_.max_tokens_field, params.max_tokens);
  if (params.temperature) json_path_set(body, adapter_.temperature_field, *params.temperature);
  if (params.thinking_budget) {
    if (adapter_.thinking_budget_field.empty()) {
      throw ProviderError(ProviderErrorKind::kRejected,
                          "model '" + model_id_ + "' has no thinking budget field configured");
    }
    body.merge_patch(adapter_.thinking_extra);
    json_path_set(body, adapter_.thinking_budget_field, *params.thinking_budget);
  }
  return body;
}

ModelResponse HttpProvider::parse_response(const std::string& body,
                                           std::span<const Message> transcript) const {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw ProviderError(ProviderErrorKind::kTransport, std::string("malformed response: ") + e.what());
  }
  const json* text = json_path(j, adapter_.text_path);
  if (text == nullptr || !text->is_string()) {
    throw ProviderError(ProviderErrorKind::kRejected,
                        "response has no text at '" + adapter_.text_path + "'");
  }
  ModelResponse response;
  response.text = text->get<std::string>();
  if (!adapter_.thinking_path.empty()) {
    if (const json* t = json_path(j, adapter_.thinking_path); t != nullptr && t->is_string()) {
      response.thinking_text = t->get<std::string>();
    }
  }
  bool have_input = false;
  bool have_output = false;
  bool unused = false;
  response.usage.input_tokens = usage_at(j, adapter_.input_tokens_path, have_input);
  response.usage.output_tokens = usage_at(j, adapter_.output_tokens_path, have_output);
  response.usage.cache_read_tokens = usage_at(j, adapter_.cache_read_tokens_path, unused);
  response.usage.cache_write_tokens = usage_at(j, adapter_.cache_write_tokens_path, unused);
  if (!have_input) {
    response.usage.input_tokens = token_estimate(transcript);
    response.usage_estimated = true;
  }
  if (!have_output) {
    response.usage.output_tokens = token_estimate(response.text);
    response.usage_estimated = true;
  }
  return response;
}

ModelResponse HttpProvider::complete(std::span<const Message> transcript,
                                     const GenerationParams& params) {
  check_transcript(transcript);
  const std::string payload = build_request(transcript, params).dump();

  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::duration<double>(endpoint_.timeout_s);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));

  httplib::Headers headers;
  if (!endpoint_.auth_env.empty()) {
    const char* key = std::getenv(endpoint_.auth_env.c_str());
    if (key == nullptr) {
      throw ProviderError(ProviderErrorKind::kRejected,
                          "environment variable " + endpoint_.auth_env + " is not set");
    }
    headers.emplace(endpoint_.auth_header, endpoint_.auth_prefix + key);
  }

  const auto start = std::chrono::steady_clock::now();
  auto result = client.Post(path_, headers, payload, "application/json");
  const double latency =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!result) {
    throw ProviderError(ProviderErrorKind::kTransport,
                        endpoint_.url + ": " + httplib::to_string(result.error()));
  }
  const int status = result->status;
  if (status == 429) {
    throw ProviderError(ProviderErrorKind::kRateLimited, endpoint_.url + ": HTTP 429");
  }
  if (status >= 500) {
    throw ProviderError(ProviderErrorKind::kTransport,
                        endpoint_.url + ": HTTP " + std::to_string(status));
  }
  if (status < 200 || status >= 300) {
    throw ProviderError(ProviderErrorKind::kRejected,
                        endpoint_.url + ": HTTP " + std::to_string(status) + ": " +
                            result->body.substr(0, 500));
  }
  ModelResponse response = parse_response(result->body, transcript);
  response.latency_s = latency;
  return response;
}

}  // namespace reflectbench

#include "reflectbench/provider/cassette.hpp"

#include <string>

#include "reflectbench/core/errors.hpp"

namespace reflectbench {

using nlohmann::json;

json message_to_json(const Message& m) {
  json j = {{"role", role_name(m.role)}, {"content", m.content}};
  if (m.cache_checkpoint) j["cache_checkpoint"] = true;
  return j;
}

Message message_from_json(const json& j) {
  return Message{parse_role(j.at("role").get<std::string>()), j.at("content").get<std::string>(),
                 j.value("cache_checkpoint", false)};
}

json usage_to_json(const TokenUsage& u) {
  return {{"input_tokens", u.input_tokens},
          {"output_tokens", u.output_tokens},
          {"cache_read_tokens", u.cache_read_tokens},
          {"cache_write_tokens", u.cache_write_tokens}};
}

TokenUsage usage_from_json(const json& j) {
  TokenUsage u;
  u.input_tokens = j.value("input_tokens", std::int64_t{0});
  u.output_tokens = j.value("output_tokens", std::int64_t{0});
  u.cache_read_tokens = j.value("cache_read_tokens", std::int64_t{0});
  u.cache_write_tokens = j.value("cache_write_tokens", std::int64_t{0});
  if (u.input_tokens < 0 || u.output_tokens < 0 || u.cache_read_tokens < 0 ||
      u.cache_write_tokens < 0) {
    throw Error(ErrorCode::kParse, "token counts must be >= 0");
  }
  return u;
}

json params_to_json(const GenerationParams& p) {
  json j = {{"max_tokens", p.max_tokens}};
  if (p.temperature) j["temperature"] = *p.temperature;
  if (p.thinking_budget) j["thinking_budget"] = *p.thinking_budget;
  return j;
}

GenerationParams params_from_json(const json& j) {
  GenerationParams p;
  p.max_tokens = j.value("max_tokens", p.max_tokens);
  if (j.contains("temperature")) p.temperature = j.at("temperature").get<double>();
  if (j.contains("thinking_budget")) p.thinking_budget = j.at("thinking_budget").get<int>();
  return p;
}

json CassetteRecord::to_json() const {
  json messages = json::array();
  for (const auto& m : transcript) messages.push_back(message_to_json(m));
  json j = {{"request_hash", request_hash},
            {"transcript", messages},
            {"params", params_to_json(params)},
            {"response_text", response.text},
            {"usage", usage_to_json(response.usage)},
            {"latency_s", response.latency_s}};
  if (response.thinking_text) j["thinking_text"] = *response.thinking_text;
  if (response.usage_estimated) j["usage_estimated"] = true;
  return j;
}

CassetteRecord CassetteRecord::from_json(const json& j) {
  CassetteRecord r;
  r.request_hash = j.at("request_hash").get<std::string>();
  for (const auto& m : j.at("transcript")) r.transcript.push_back(message_from_json(m));
  r.params = params_from_json(j.at("params"));
  r.response.text = j.at("response_text").get<std::string>();
  r.response.usage = usage_from_json(j.at("usage"));
  r.response.latency_s = j.at("latency_s").get<double>();
  if (j.contains("thinking_text")) r.response.thinking_text = j.at("thinking_text").get<std::string>();
  r.response.usage_estimated = j.value("usage_estimated", false);
  return r;
}

RecordingProvider::RecordingProvider(std::shared_ptr<Provider> inner,
                                     std::filesystem::path cassette, std::string scope)
    : inner_(std::move(inner)), path_(std::move(cassette)), scope_(std::move(scope)) {
  if (!inner_) throw Error(ErrorCode::kValidation, "recording provider needs an inner provider");
  if (dynamic_cast<ReplayProvider*>(inner_.get()) != nullptr) {
    throw Error(ErrorCode::kValidation, "recording provider cannot wrap a replay provider");
  }
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  out_.open(path_, std::ios::app | std::ios::binary);
  if (!out_) throw Error(ErrorCode::kIo, "cannot open cassette " + path_.string());
}

ModelResponse RecordingProvider::complete(std::span<const Message> transcript,
                                          const GenerationParams& params) {
  ModelResponse response = inner_->complete(transcript, params);
  CassetteRecord record{request_hash(scope_, transcript, params),
                        {transcript.begin(), transcript.end()}, params, response};
  // Retries are a property of this particular call, not of the exchange.
  record.response.retries = 0;
  const std::string line = record.to_json().dump();
  std::lock_guard lock(mu_);
  out_ << line << '\n';
  out_.flush();
  return response;
}

std::string RecordingProvider::describe() const {
  return "record(" + inner_->describe() + " -> " + path_.string() + ")";
}

ReplayProvider::ReplayProvider(const std::filesystem::path& cassette, std::string scope)
    : path_(cassette), scope_(std::move(scope)) {
  std::ifstream in(cassette, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cassette not found: " + cassette.string());
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      CassetteRecord record = CassetteRecord::from_json(json::parse(line));
      by_hash_[record.request_hash].push_back(std::move(record.response));
      ++total_;
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kParse,
                  cassette.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

ModelResponse ReplayProvider::complete(std::span<const Message> transcript,
                                       const GenerationParams& params) {
  check_transcript(transcript);
  const std::string hash = request_hash(scope_, transcript, params);
  std::lock_guard lock(mu_);
  auto it = by_hash_.find(hash);
  if (it == by_hash_.end() || it->second.empty()) {
    throw ProviderError(ProviderErrorKind::kCassetteMiss,
                        "no recorded response for request " + hash + " in " + path_.string());
  }
  if (it->second.size() == 1) return it->second.front();
  ModelResponse response = std::move(it->second.front());
  it->second.pop_front();
  return response;
}

std::string ReplayProvider::describe() const { return "replay(" + path_.string() + ")"; }

}  // namespace reflectbench

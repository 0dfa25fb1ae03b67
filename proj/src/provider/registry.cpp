#include "reflectbench/provider/registry.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "reflectbench/core/errors.hpp"
#include "reflectbench/provider/cassette.hpp"
#include "reflectbench/provider/http.hpp"
#include "reflectbench/provider/mock.hpp"

namespace reflectbench {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

// Keys that would put a credential in a config file.
void reject_secrets(const json& j, const std::string& where) {
  if (!j.is_object()) return;
  for (const auto& [key, value] : j.items()) {
    std::string k = key;
    std::transform(k.begin(), k.end(), k.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (k == "api_key" || k == "apikey" || k == "secret" || k == "authorization" ||
        k == "password" || k == "token") {
      throw Error(ErrorCode::kValidation,
                  where + "." + key + ": secrets must come from the environment (use auth_env)");
    }
    reject_secrets(value, where + "." + key);
  }
}

}  // namespace

std::shared_ptr<Provider> make_provider(const std::string& model_id, const json& spec,
                                        const std::filesystem::path& base_dir) {
  const std::string where = "$.models." + model_id;
  if (!spec.is_object() || !spec.contains("kind")) {
    throw Error(ErrorCode::kValidation, where + ": missing \"kind\"");
  }
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "mock") {
    json script = spec.value("script", json::object());
    if (script.is_string()) {
      // A file holding the script.
      const auto path = resolve(base_dir, script.get<std::string>());
      std::ifstream in(path);
      if (!in) throw Error(ErrorCode::kValidation, where + ".script: cannot open " + path.string());
      try {
        script = json::parse(in);
      } catch (const json::parse_error& e) {
        throw Error(ErrorCode::kValidation, where + ".script: " + path.string() + ": " + e.what());
      }
    }
    return std::make_shared<MockProvider>(MockScript::from_json(script), model_id);
  }
  if (kind == "http") {
    if (!spec.contains("endpoint")) throw Error(ErrorCode::kValidation, where + ".endpoint: required");
    return std::make_shared<HttpProvider>(model_id, HttpEndpoint::from_json(spec),
                                          HttpAdapter::from_json(spec.value("adapter", json::object())));
  }
  if (kind == "replay") {
    if (!spec.contains("cassette")) throw Error(ErrorCode::kValidation, where + ".cassette: required");
    const auto path = resolve(base_dir, spec.at("cassette").get<std::string>());
    if (!std::filesystem::exists(path)) {
      throw Error(ErrorCode::kValidation, where + ".cassette: file not found: " + path.string());
    }
    return std::make_shared<ReplayProvider>(path, model_id);
  }
  if (kind == "record") {
    if (!spec.contains("cassette") || !spec.contains("inner")) {
      throw Error(ErrorCode::kValidation, where + ": record needs \"cassette\" and \"inner\"");
    }
    const json& inner = spec.at("inner");
    if (inner.value("kind", "") == "replay" || inner.value("kind", "") == "record") {
      throw Error(ErrorCode::kValidation, where + ".inner: must be a live or mock provider");
    }
    return std::make_shared<RecordingProvider>(make_provider(model_id, inner, base_dir),
                                               resolve(base_dir, spec.at("cassette").get<std::string>()),
                                               model_id);
  }
  throw Error(ErrorCode::kValidation, where + ".kind: unknown provider kind '" + kind + "'");
}

ProviderRegistry ProviderRegistry::from_json(const json& config,
                                             const std::filesystem::path& base_dir,
                                             std::uint64_t seed) {
  reject_secrets(config, "$");
  if (!config.is_object() || !config.contains("models") || !config.at("models").is_object()) {
    throw Error(ErrorCode::kValidation, "$.models: required object");
  }
  const int max_in_flight = config.value("max_in_flight", 4);
  std::optional<double> rate;
  if (config.contains("rate_limit_per_s") && !config.at("rate_limit_per_s").is_null()) {
    rate = config.at("rate_limit_per_s").get<double>();
  }
  RetryPolicy retry;
  if (config.contains("retry")) {
    const json& r = config.at("retry");
    retry.max_retries = r.value("max_retries", retry.max_retries);
    retry.base_delay_s = r.value("base_delay_s", retry.base_delay_s);
    retry.max_delay_s = r.value("max_delay_s", retry.max_delay_s);
  }

  ProviderRegistry registry;
  std::uint64_t stream = 0;
  for (const auto& [model_id, spec] : config.at("models").items()) {
    auto base = make_provider(model_id, spec, base_dir);
    auto retrying = std::make_shared<RetryingProvider>(base, retry, seed + (++stream));
    auto throttled = std::make_shared<ThrottledProvider>(retrying, max_in_flight, rate);
    ModelEntry entry{model_id, spec.value("family", model_id), spec.value("price_id", model_id),
                     throttled};
    registry.add(std::move(entry));
  }
  return registry;
}

ProviderRegistry ProviderRegistry::from_file(const std::filesystem::path& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read providers config " + path.string());
  json config;
  try {
    config = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
  return from_json(config, path.parent_path(), seed);
}

void ProviderRegistry::add(ModelEntry entry) {
  const std::string id = entry.model_id;
  models_[id] = std::move(entry);
}

const ModelEntry& ProviderRegistry::at(const std::string& model_id) const {
  auto it = models_.find(model_id);
  if (it == models_.end()) {
    throw Error(ErrorCode::kValidation, "model '" + model_id + "' is not in the providers config");
  }
  return it->second;
}

}  // namespace reflectbench

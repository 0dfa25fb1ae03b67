#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "json.hpp"
#include "reflectbench/provider/provider.hpp"
#include "reflectbench/provider/resilience.hpp"

namespace reflectbench {

struct ModelEntry {
  std::string model_id;
  std::string family;
  std::string price_id;
  std::shared_ptr<Provider> provider;
};

// Providers built from a providers config file:
//
//   {"max_in_flight": 4, "rate_limit_per_s": 2.0,
//    "retry": {"max_retries": 5, "base_delay_s": 0.5, "max_delay_s": 30},
//    "models": {"<model_id>": {"kind": "mock" | "http" | "replay" | "record",
//                              "family": "...", "price_id": "...", ...}}}
//
// Each provider is wrapped in retry and throttling layers. Relative paths
// resolve against `base_dir`.
class ProviderRegistry {
 public:
  static ProviderRegistry from_json(const nlohmann::json& config,
                                    const std::filesystem::path& base_dir,
                                    std::uint64_t seed = 0);
  static ProviderRegistry from_file(const std::filesystem::path& path, std::uint64_t seed = 0);

  void add(ModelEntry entry);
  bool contains(const std::string& model_id) const { return models_.count(model_id) != 0; }
  // Throws Error(kValidation) for an unknown model.
  const ModelEntry& at(const std::string& model_id) const;
  const std::map<std::string, ModelEntry>& models() const { return models_; }

 private:
  std::map<std::string, ModelEntry> models_;
};

// Builds the unwrapped provider for one model entry.
std::shared_ptr<Provider> make_provider(const std::string& model_id, const nlohmann::json& spec,
                                        const std::filesystem::path& base_dir);

}  // namespace reflectbench

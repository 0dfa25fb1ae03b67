#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "reflectbench/core/errors.hpp"
#include "reflectbench/core/types.hpp"
#include "reflectbench/data/dataset.hpp"
#include "reflectbench/provider/provider.hpp"

namespace reflectbench {

// Raised for anything wrong with a run or report configuration. The message
// lists every problem, each prefixed with its JSON path.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::vector<std::string>& problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

// Run configuration file:
//
//   {"dataset": "manifest.json" | {...inline manifest...},
//    "providers": "providers.json" | {...inline providers config...},
//    "pricing": "pricing.json",                 // optional
//    "output_dir": "out",
//    "seed": 7, "concurrency": 4, "paper_parity": false,
//    "generation": {"max_tokens": 2048, "temperature": 0.0},
//    "answer_headroom": 1024,
//    "templates_dir": "prompts", "current_date": "16/04/2025",
//    "translation_pass_threshold": 0.5,
//    "strategies": [{"model_id": "m", "reflection_rounds": 1,
//                    "feedback": "none" | "llm_judge" | "sql_execution",
//                    "judge_model_id": "j", "thinking_budget": 4096,
//                    "caching_enabled": true}]}
//
// Relative paths resolve against the config file's directory.
struct RunConfig {
  std::filesystem::path base_dir;
  DatasetManifest dataset;
  nlohmann::json providers;
  std::filesystem::path providers_base_dir;
  std::optional<std::filesystem::path> pricing_path;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  int concurrency = 4;
  bool paper_parity = false;
  GenerationParams generation;
  int answer_headroom = 1024;
  std::optional<std::filesystem::path> templates_dir;
  std::optional<std::string> current_date;
  double translation_pass_threshold = 0.5;
  std::vector<StrategyConfig> strategies;

  // Throws ConfigError listing every problem found, including those from
  // validate_strategies.
  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
  static RunConfig from_file(const std::filesystem::path& path);
};

// Checks each strategy against the dataset task and the parity flag, and
// that model ids are unique keys. Returns path-scoped problems.
std::vector<std::string> validate_strategies(const RunConfig& config);

}  // namespace reflectbench

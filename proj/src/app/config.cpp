#include "reflectbench/app/config.hpp"

#include <fstream>
#include <set>

#include "reflectbench/engine/reflection.hpp"

namespace reflectbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration";
  for (const auto& p : problems) out += "\n  " + p;
  return out;
}

json load_json_file(const fs::path& path, const std::string& where,
                    std::vector<std::string>& problems) {
  std::ifstream in(path);
  if (!in) {
    problems.push_back(where + ": cannot open " + path.string());
    return nullptr;
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    problems.push_back(where + ": " + path.string() + ": " + e.what());
    return nullptr;
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> kKeys = {
      "dataset",     "providers",       "pricing",       "output_dir",
      "seed",        "concurrency",     "paper_parity",  "generation",
      "answer_headroom", "templates_dir", "current_date", "translation_pass_threshold",
      "strategies"};
  return kKeys;
}

}  // namespace

ConfigError::ConfigError(const std::vector<std::string>& problems)
    : Error(ErrorCode::kValidation, join_problems(problems)), problems_(problems) {}

RunConfig RunConfig::from_json(const json& j, const fs::path& base_dir) {
  std::vector<std::string> problems;
  RunConfig c;
  c.base_dir = base_dir;
  if (!j.is_object()) throw ConfigError({"$: expected an object"});
  for (const auto& [k, _] : j.items()) {
    if (!known_keys().count(k)) problems.push_back(k + ": unknown key");
  }

  // dataset
  if (!j.contains("dataset")) {
    problems.push_back("dataset: missing");
  } else {
    try {
      const auto& d = j["dataset"];
      if (d.is_string()) {
        const fs::path p = resolve(base_dir, d.get<std::string>());
        const json manifest = load_json_file(p, "dataset", problems);
        if (!manifest.is_null()) c.dataset = DatasetManifest::from_json(manifest, p.parent_path());
      } else {
        c.dataset = DatasetManifest::from_json(d, base_dir);
      }
    } catch (const Error& e) {
      problems.push_back(std::string("dataset: ") + e.what());
    }
  }

  // providers
  if (!j.contains("providers")) {
    problems.push_back("providers: missing");
  } else if (j["providers"].is_string()) {
    const fs::path p = resolve(base_dir, j["providers"].get<std::string>());
    c.providers = load_json_file(p, "providers", problems);
    c.providers_base_dir = p.parent_path();
  } else if (j["providers"].is_object()) {
    c.providers = j["providers"];
    c.providers_base_dir = base_dir;
  } else {
    problems.push_back("providers: expected a file name or an object");
  }

  if (j.contains("pricing")) {
    if (j["pricing"].is_string()) {
      c.pricing_path = resolve(base_dir, j["pricing"].get<std::string>());
      if (!fs::exists(*c.pricing_path)) problems.push_back("pricing: no such file " + c.pricing_path->string());
    } else {
      problems.push_back("pricing: expected a file name");
    }
  }

  if (!j.contains("output_dir") || !j["output_dir"].is_string() ||
      j["output_dir"].get<std::string>().empty()) {
    problems.push_back("output_dir: expected a non-empty string");
  } else {
    c.output_dir = resolve(base_dir, j["output_dir"].get<std::string>());
  }

  auto integer = [&](const char* key, auto& target, long long min) {
    if (!j.contains(key)) return;
    const auto& v = j[key];
    if (!v.is_number_integer() || v.template get<long long>() < min) {
      problems.push_back(std::string(key) + ": expected an integer >= " + std::to_string(min));
      return;
    }
    target = v.template get<std::remove_reference_t<decltype(target)>>();
  };
  integer("seed", c.seed, 0);
  integer("concurrency", c.concurrency, 1);
  integer("answer_headroom", c.answer_headroom, 0);
  if (j.contains("paper_parity")) {
    if (j["paper_parity"].is_boolean()) c.paper_parity = j["paper_parity"].get<bool>();
    else problems.push_back("paper_parity: expected a boolean");
  }
  if (j.contains("translation_pass_threshold")) {
    const auto& v = j["translation_pass_threshold"];
    if (!v.is_number() || v.get<double>() < 0.0 || v.get<double>() > 1.0) {
      problems.push_back("translation_pass_threshold: expected a number in [0, 1]");
    } else {
      c.translation_pass_threshold = v.get<double>();
    }
  }
  if (j.contains("templates_dir")) {
    if (!j["templates_dir"].is_string()) {
      problems.push_back("templates_dir: expected a string");
    } else {
      c.templates_dir = resolve(base_dir, j["templates_dir"].get<std::string>());
      if (!fs::is_directory(*c.templates_dir)) problems.push_back("templates_dir: not a directory");
    }
  }
  if (j.contains("current_date")) {
    if (j["current_date"].is_string()) c.current_date = j["current_date"].get<std::string>();
    else problems.push_back("current_date: expected a string");
  }

  if (j.contains("generation")) {
    const auto& g = j["generation"];
    if (!g.is_object()) {
      problems.push_back("generation: expected an object");
    } else {
      for (const auto& [k, v] : g.items()) {
        if (k == "max_tokens") {
          if (!v.is_number_integer() || v.get<long long>() <= 0) {
            problems.push_back("generation.max_tokens: expected a positive integer");
          } else {
            c.generation.max_tokens = v.get<int>();
          }
        } else if (k == "temperature") {
          if (!v.is_number() || v.get<double>() < 0.0) {
            problems.push_back("generation.temperature: expected a number >= 0");
          } else {
            c.generation.temperature = v.get<double>();
          }
        } else {
          problems.push_back("generation." + k + ": unknown key");
        }
      }
    }
  }

  if (!j.contains("strategies") || !j["strategies"].is_array()) {
    problems.push_back("strategies: expected an array");
  } else if (j["strategies"].empty()) {
    problems.push_back("strategies: the strategy grid is empty");
  } else {
    static const std::set<std::string> kStrategyKeys = {
        "model_id", "reflection_rounds", "feedback", "thinking_budget", "judge_model_id",
        "caching_enabled"};
    for (size_t i = 0; i < j["strategies"].size(); ++i) {
      const auto& s = j["strategies"][i];
      const std::string where = "strategies[" + std::to_string(i) + "]";
      if (!s.is_object()) {
        problems.push_back(where + ": expected an object");
        continue;
      }
      bool ok = true;
      for (const auto& [k, _] : s.items()) {
        if (!kStrategyKeys.count(k)) {
          problems.push_back(where + "." + k + ": unknown key");
          ok = false;
        }
      }
      if (!s.contains("model_id") || !s["model_id"].is_string()) {
        problems.push_back(where + ".model_id: expected a string");
        ok = false;
      }
      if (s.contains("reflection_rounds") && !s["reflection_rounds"].is_number_integer()) {
        problems.push_back(where + ".reflection_rounds: expected an integer");
        ok = false;
      }
      if (s.contains("thinking_budget") && !s["thinking_budget"].is_null() &&
          !s["thinking_budget"].is_number_integer()) {
        problems.push_back(where + ".thinking_budget: expected an integer");
        ok = false;
      }
      if (s.contains("caching_enabled") && !s["caching_enabled"].is_boolean()) {
        problems.push_back(where + ".caching_enabled: expected a boolean");
        ok = false;
      }
      if (!ok) continue;
      try {
        c.strategies.push_back(strategy_from_json(s));
      } catch (const std::exception& e) {
        problems.push_back(where + ": " + e.what());
      }
    }
  }

  if (problems.empty()) {
    const auto more = validate_strategies(c);
    problems.insert(problems.end(), more.begin(), more.end());
  }
  if (!problems.empty()) throw ConfigError(problems);
  return c;
}

RunConfig RunConfig::from_file(const fs::path& path) {
  std::vector<std::string> problems;
  const json j = load_json_file(path, "config", problems);
  if (!problems.empty()) throw ConfigError(problems);
  return from_json(j, path.parent_path());
}

std::vector<std::string> validate_strategies(const RunConfig& config) {
  std::vector<std::string> problems;
  std::set<std::string> keys;
  for (size_t i = 0; i < config.strategies.size(); ++i) {
    const auto& s = config.strategies[i];
    const std::string where = "strategies[" + std::to_string(i) + "]";
    const auto report = validate_strategy(s, config.dataset.task, config.paper_parity);
    for (const auto& p : report.problems) problems.push_back(where + ": " + p);
    if (!keys.insert(s.key()).second) problems.push_back(where + ": duplicate strategy " + s.key());
    GenerationParams p = apply_budget(s, config.generation, config.answer_headroom);
    try {
      p.validate();
    } catch (const Error& e) {
      problems.push_back(where + ": " + e.what());
    }
  }
  return problems;
}

}  // namespace reflectbench

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "reflectbench/app/config.hpp"
#include "reflectbench/econ/cost.hpp"
#include "reflectbench/engine/reflection.hpp"
#include "reflectbench/provider/registry.hpp"

namespace reflectbench {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

// Writes lines to a stream in index order no matter which order they are
// submitted in. Lines wait in memory until every earlier index has arrived.
class OrderedAppender {
 public:
  explicit OrderedAppender(std::ostream& out, size_t first_index = 0)
      : out_(out), next_(first_index) {}

  void submit(size_t index, std::string line);
  size_t written() const;

 private:
  std::ostream& out_;
  mutable std::mutex mu_;
  std::map<size_t, std::string> pending_;
  size_t next_;
  size_t written_ = 0;
};

// Everything a run needs, loaded and cross-checked. Throws ConfigError.
struct PreparedRun {
  RunConfig config;
  ProviderRegistry registry;
  std::vector<Sample> samples;
  std::optional<PricingTable> pricing;
};
PreparedRun prepare_run(const RunConfig& config);

// (sample_id, strategy key) pairs already present in a trace file.
std::set<std::pair<std::string, std::string>> completed_keys(const std::filesystem::path& traces);

struct RunResult {
  size_t planned = 0;
  size_t skipped = 0;
  size_t executed = 0;
  std::filesystem::path traces_path;
  std::filesystem::path summary_path;
};

// Runs every (strategy, sample) pair not yet in output_dir/traces.jsonl,
// appending traces in grid order, then rewrites output_dir/summary.json.
RunResult execute_run(PreparedRun& run, std::ostream& log);

// Per-configuration accuracy, latency and cost over a set of traces, in
// order of first appearance.
nlohmann::json run_summary(const std::vector<SampleTrace>& traces, const PreparedRun* run,
                           const std::vector<StrategyConfig>& order = {});

// The `run` command: 0 on success, 2 on configuration errors, 3 on runtime
// failures. With `dry_run` nothing is called or written.
int cmd_run(const std::filesystem::path& config_path, bool dry_run, std::ostream& out,
            std::ostream& err);

// The `validate` command.
int cmd_validate(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

// One-line JSON error record for stderr.
std::string error_record(const std::string& kind, const std::string& message);

}  // namespace reflectbench

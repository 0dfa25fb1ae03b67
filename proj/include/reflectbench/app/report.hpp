#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "reflectbench/analysis/aggregate.hpp"
#include "reflectbench/econ/cost.hpp"
#include "reflectbench/engine/reflection.hpp"

namespace reflectbench {

enum class ReportKind { kFrontier, kGains, kTransitions, kSignificance, kCosts };

ReportKind parse_report_kind(std::string_view name);

struct ReportOptions {
  std::filesystem::path traces;
  ReportKind kind = ReportKind::kFrontier;
  std::filesystem::path out_dir = ".";
  // Restrict to one model family; "all" computes one frontier per family.
  std::optional<std::string> family;
  std::optional<std::filesystem::path> pricing;
  // Latency statistic for frontiers: "mean", "p50" or "p95".
  std::string latency_stat = "mean";
  std::uint64_t seed = 0;
  int replicates = 100;
};

// Accuracy, latency and mean cost per configuration.
std::vector<FrontierPoint> frontier_points(const std::vector<SampleTrace>& traces,
                                           const std::string& latency_stat = "mean",
                                           const PricingTable* pricing = nullptr);

// Pass flag per sample per round; a truncated trace repeats its last verdict.
std::vector<std::vector<bool>> pass_matrix(const std::vector<const SampleTrace*>& traces);

// Writes the report files and returns their paths.
std::vector<std::filesystem::path> write_report(const ReportOptions& options, std::ostream& log);

// The `report` command: 0, 2 for bad options, 3 for runtime failures.
int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err);

}  // namespace reflectbench

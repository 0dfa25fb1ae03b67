#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "reflectbench/core/types.hpp"
#include "reflectbench/econ/money.hpp"

namespace reflectbench {

struct SampleTrace;

// USD per 1000 tokens.
struct PriceEntry {
  Money input_per_1k;
  Money output_per_1k;
  Money cache_read_per_1k;
  Money cache_write_per_1k;
};

// Pricing file:
//
//   {"date": "2025-05-02",
//    "default_cache_read_ratio": "0.10", "default_cache_write_ratio": "1.25",
//    "models": {"<id>": {"input_per_1k": "0.003", "output_per_1k": "0.015",
//                        "cache_read_per_1k": ..., "cache_write_per_1k": ...}}}
//
// Rates may be strings or numbers. Missing cache rates derive from the input
// rate through the ratios; a model may override the ratios too.
class PricingTable {
 public:
  static PricingTable from_json(const nlohmann::json& j);
  static PricingTable from_file(const std::filesystem::path& path);

  void set(const std::string& id, PriceEntry entry) { entries_[id] = entry; }
  bool contains(const std::string& id) const { return entries_.count(id) != 0; }
  // Throws Error(kMissingPrice).
  const PriceEntry& at(const std::string& id) const;

  const std::string& date() const { return date_; }
  const std::map<std::string, PriceEntry>& entries() const { return entries_; }
  // Models whose cache-read rate exceeds the input rate.
  std::vector<std::string> warnings() const;

 private:
  std::string date_;
  std::map<std::string, PriceEntry> entries_;
};

// Rate derived from `input` by a decimal ratio such as "0.10".
Money rate_from_ratio(Money input, const std::string& ratio);

struct CostBreakdown {
  Money input;
  Money output;
  Money cache_read;
  Money cache_write;

  Money total() const { return input + output + cache_read + cache_write; }
  CostBreakdown& operator+=(const CostBreakdown& o) {
    input += o.input;
    output += o.output;
    cache_read += o.cache_read;
    cache_write += o.cache_write;
    return *this;
  }
};

CostBreakdown run_cost(const TokenUsage& usage, const PriceEntry& price);

// Cost of one trace: the strategy model's usage at `model_price_id` plus judge
// usage at `judge_price_id`. Empty ids fall back to the model ids in the
// strategy.
CostBreakdown trace_cost(const SampleTrace& trace, const PricingTable& pricing,
                         const std::string& model_price_id = {},
                         const std::string& judge_price_id = {});

struct CachingComparison {
  CostBreakdown uncached;
  CostBreakdown cached;
  double savings_fraction = 0.0;
};

// What-if billing of a reflection chain with and without prompt caching.
// Each entry is one call's usage; its prompt size is every input token
// wherever it was billed. Checkpoints sit after the first prompt and after
// each answer, so at round r the prefix through answer r-1 is written and the
// prefix written at round r-1 is read back. Uncached, every round bills its
// whole prompt at the input rate. Output is billed identically in both.
CachingComparison caching_cost_model(std::span<const TokenUsage> rounds, const PriceEntry& price);
CachingComparison caching_cost_model(const SampleTrace& trace, const PriceEntry& price);

// Per-round usage of a synthetic chain: a `prefix_tokens` first prompt, each
// reflection adding `addition_tokens` of prompt, `output_tokens` per answer.
std::vector<TokenUsage> synthetic_reflection_usage(std::int64_t prefix_tokens,
                                                   std::int64_t addition_tokens,
                                                   std::int64_t output_tokens, int rounds);

struct LatencySummary {
  double mean = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
};

// Nearest-rank quantile: the value at rank ceil(q * n). Throws
// Error(kEmptyInput) on no values.
double nearest_rank(std::vector<double> values, double q);
LatencySummary aggregate_latency(std::span<const double> latencies_s);
LatencySummary aggregate_latency(std::span<const SampleTrace> traces);

}  // namespace reflectbench

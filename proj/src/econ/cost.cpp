#include "reflectbench/econ/cost.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

#include "reflectbench/core/errors.hpp"
#include "reflectbench/engine/reflection.hpp"

namespace reflectbench {

using nlohmann::json;

namespace {

Money money_field(const json& j, const std::string& path) {
  try {
    if (j.is_string()) return Money::parse(j.get<std::string>());
    if (j.is_number()) return Money::from_double(j.get<double>());
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
  throw Error(ErrorCode::kValidation, path + ": expected a number or decimal string");
}

std::string ratio_field(const json& j, const std::string& path) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return Money::from_double(j.get<double>()).to_string();
  throw Error(ErrorCode::kValidation, path + ": expected a number or decimal string");
}

}  // namespace

Money rate_from_ratio(Money input, const std::string& ratio) {
  using boost::multiprecision::int256_t;
  int256_t scale = 1;
  for (int i = 0; i < Money::kScaleDigits; ++i) scale *= 10;
  const int256_t product = int256_t(static_cast<long long>(0)) +
                           int256_t(input.units() >> 64) * (int256_t(1) << 64) +
                           int256_t(static_cast<unsigned long long>(input.units() & UINT64_MAX));
  const Money r = Money::parse(ratio);
  const int256_t rr = int256_t(r.units() >> 64) * (int256_t(1) << 64) +
                      int256_t(static_cast<unsigned long long>(r.units() & UINT64_MAX));
  const int256_t v = product * rr / scale;
  const __int128 hi = static_cast<__int128>(static_cast<long long>(v >> 64));
  const auto lo = static_cast<unsigned long long>(v & UINT64_MAX);
  return Money::from_units(hi * (static_cast<__int128>(1) << 64) + lo);
}

PricingTable PricingTable::from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kValidation, "pricing: expected an object");
  PricingTable t;
  t.date_ = j.value("date", std::string());
  const std::string read_ratio =
      j.contains("default_cache_read_ratio") ? ratio_field(j["default_cache_read_ratio"], "default_cache_read_ratio") : "0.10";
  const std::string write_ratio =
      j.contains("default_cache_write_ratio") ? ratio_field(j["default_cache_write_ratio"], "default_cache_write_ratio") : "1.25";
  if (!j.contains("models") || !j["models"].is_object()) {
    throw Error(ErrorCode::kValidation, "pricing.models: expected an object");
  }
  for (const auto& [id, m] : j["models"].items()) {
    const std::string path = "pricing.models." + id;
    for (const char* required : {"input_per_1k", "output_per_1k"}) {
      if (!m.contains(required)) {
        throw Error(ErrorCode::kValidation, path + "." + required + ": missing");
      }
    }
    PriceEntry e;
    e.input_per_1k = money_field(m["input_per_1k"], path + ".input_per_1k");
    e.output_per_1k = money_field(m["output_per_1k"], path + ".output_per_1k");
    const std::string rr =
        m.contains("cache_read_ratio") ? ratio_field(m["cache_read_ratio"], path + ".cache_read_ratio") : read_ratio;
    const std::string wr =
        m.contains("cache_write_ratio") ? ratio_field(m["cache_write_ratio"], path + ".cache_write_ratio") : write_ratio;
    e.cache_read_per_1k = m.contains("cache_read_per_1k")
                              ? money_field(m["cache_read_per_1k"], path + ".cache_read_per_1k")
                              : rate_from_ratio(e.input_per_1k, rr);
    e.cache_write_per_1k = m.contains("cache_write_per_1k")
                               ? money_field(m["cache_write_per_1k"], path + ".cache_write_per_1k")
                               : rate_from_ratio(e.input_per_1k, wr);
    for (const auto& [name, value] :
         {std::pair{"input_per_1k", e.input_per_1k}, std::pair{"output_per_1k", e.output_per_1k},
          std::pair{"cache_read_per_1k", e.cache_read_per_1k},
          std::pair{"cache_write_per_1k", e.cache_write_per_1k}}) {
      if (value < Money()) throw Error(ErrorCode::kValidation, path + "." + name + ": negative price");
    }
    t.entries_[id] = e;
  }
  return t;
}

PricingTable PricingTable::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open pricing file " + path.string());
  try {
    return from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

const PriceEntry& PricingTable::at(const std::string& id) const {
  const auto it = entries_.find(id);
  if (it == entries_.end()) throw Error(ErrorCode::kMissingPrice, "no price for '" + id + "'");
  return it->second;
}

std::vector<std::string> PricingTable::warnings() const {
  std::vector<std::string> out;
  for (const auto& [id, e] : entries_) {
    if (e.cache_read_per_1k > e.input_per_1k) {
      out.push_back(id + ": cache read rate exceeds the input rate");
    }
  }
  return out;
}

CostBreakdown run_cost(const TokenUsage& usage, const PriceEntry& price) {
  return {Money::for_tokens(usage.input_tokens, price.input_per_1k),
          Money::for_tokens(usage.output_tokens, price.output_per_1k),
          Money::for_tokens(usage.cache_read_tokens, price.cache_read_per_1k),
          Money::for_tokens(usage.cache_write_tokens, price.cache_write_per_1k)};
}

CostBreakdown trace_cost(const SampleTrace& trace, const PricingTable& pricing,
                         const std::string& model_price_id, const std::string& judge_price_id) {
  const std::string& model_id = model_price_id.empty() ? trace.strategy.model_id : model_price_id;
  CostBreakdown cost = run_cost(trace.model_usage(), pricing.at(model_id));
  const TokenUsage judge = trace.feedback_usage();
  if (judge == TokenUsage{}) return cost;
  std::string judge_id = judge_price_id;
  if (judge_id.empty()) judge_id = trace.strategy.judge_model_id.value_or(trace.strategy.model_id);
  cost += run_cost(judge, pricing.at(judge_id));
  return cost;
}

CachingComparison caching_cost_model(std::span<const TokenUsage> rounds, const PriceEntry& price) {
  CachingComparison out;
  std::int64_t prev_checkpoint = 0;
  std::int64_t prev_prompt = 0;
  std::int64_t prev_output = 0;
  for (size_t r = 0; r < rounds.size(); ++r) {
    const std::int64_t prompt = rounds[r].prompt_tokens();
    const std::int64_t output = rounds[r].output_tokens;
    const std::int64_t checkpoint =
        r == 0 ? prompt : std::min(prompt, prev_prompt + prev_output);
    const std::int64_t read = std::min(prev_checkpoint, checkpoint);
    const std::int64_t write = checkpoint - read;
    const std::int64_t plain = prompt - checkpoint;

    out.uncached += run_cost({prompt, output, 0, 0}, price);
    out.cached += run_cost({plain, output, read, write}, price);

    prev_checkpoint = checkpoint;
    prev_prompt = prompt;
    prev_output = output;
  }
  const double uncached = out.uncached.total().to_double();
  const double cached = out.cached.total().to_double();
  out.savings_fraction = uncached > 0.0 ? 1.0 - cached / uncached : 0.0;
  return out;
}

CachingComparison caching_cost_model(const SampleTrace& trace, const PriceEntry& price) {
  std::vector<TokenUsage> rounds;
  for (const auto& s : trace.snapshots) rounds.push_back(s.response.usage);
  return caching_cost_model(rounds, price);
}

std::vector<TokenUsage> synthetic_reflection_usage(std::int64_t prefix_tokens,
                                                   std::int64_t addition_tokens,
                                                   std::int64_t output_tokens, int rounds) {
  std::vector<TokenUsage> out;
  std::int64_t prompt = prefix_tokens;
  for (int r = 0; r <= rounds; ++r) {
    if (r > 0) prompt += output_tokens + addition_tokens;
    out.push_back({prompt, output_tokens, 0, 0});
  }
  return out;
}

double nearest_rank(std::vector<double> values, double q) {
  if (values.empty()) throw Error(ErrorCode::kEmptyInput, "no values for a quantile");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  auto rank = static_cast<size_t>(std::ceil(q * n - 1e-9));
  rank = std::clamp<size_t>(rank, 1, values.size());
  return values[rank - 1];
}

LatencySummary aggregate_latency(std::span<const double> latencies_s) {
  if (latencies_s.empty()) throw Error(ErrorCode::kEmptyInput, "no traces for latency");
  std::vector<double> v(latencies_s.begin(), latencies_s.end());
  LatencySummary s;
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  s.p50 = nearest_rank(v, 0.50);
  s.p95 = nearest_rank(v, 0.95);
  return s;
}

LatencySummary aggregate_latency(std::span<const SampleTrace> traces) {
  std::vector<double> v;
  v.reserve(traces.size());
  for (const auto& t : traces) v.push_back(t.total_latency_s);
  return aggregate_latency(v);
}

}  // namespace reflectbench

#include "reflectbench/app/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "reflectbench/analysis/stats.hpp"
#include "reflectbench/app/config.hpp"
#include "reflectbench/app/run.hpp"
#include "reflectbench/core/errors.hpp"
#include "reflectbench/core/hash.hpp"
#include "reflectbench/econ/cost.hpp"

namespace reflectbench {

namespace fs = std::filesystem;
using nlohmann::json;

ReportKind parse_report_kind(std::string_view name) {
  if (name == "frontier") return ReportKind::kFrontier;
  if (name == "gains") return ReportKind::kGains;
  if (name == "transitions") return ReportKind::kTransitions;
  if (name == "significance") return ReportKind::kSignificance;
  if (name == "costs") return ReportKind::kCosts;
  throw Error(ErrorCode::kValidation, "unknown report kind '" + std::string(name) + "'");
}

namespace {

std::string num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

class CsvWriter {
 public:
  explicit CsvWriter(const fs::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  void row(const std::vector<std::string>& fields) {
    for (size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << csv_field(fields[i]);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string family_of(const SampleTrace& t) {
  return t.family.empty() ? t.strategy.model_id : t.family;
}

// Traces grouped by strategy key, in order of first appearance.
struct Groups {
  std::vector<std::string> keys;
  std::map<std::string, std::vector<const SampleTrace*>> by_key;
};

Groups group_traces(const std::vector<SampleTrace>& traces) {
  Groups g;
  for (const auto& t : traces) {
    const auto key = t.strategy.key();
    if (!g.by_key.count(key)) g.keys.push_back(key);
    g.by_key[key].push_back(&t);
  }
  return g;
}

double latency_of(const std::vector<const SampleTrace*>& group, const std::string& stat) {
  std::vector<double> v;
  for (const auto* t : group) v.push_back(t->total_latency_s);
  const LatencySummary s = aggregate_latency(v);
  if (stat == "p50") return s.p50;
  if (stat == "p95") return s.p95;
  return s.mean;
}

std::vector<fs::path> frontier_report(const std::vector<SampleTrace>& traces,
                                      const ReportOptions& o, const PricingTable* pricing) {
  const auto points = frontier_points(traces, o.latency_stat, pricing);
  std::map<std::string, std::vector<FrontierPoint>> per_family;
  if (o.family == std::optional<std::string>("all")) {
    for (const auto& p : points) per_family[p.family].push_back(p);
  } else {
    per_family[""] = points;
  }
  std::set<std::pair<std::string, std::string>> on_frontier;
  std::vector<FrontierPoint> frontier;
  for (const auto& [_, pts] : per_family) {
    for (const auto& p : pareto_frontier(pts)) {
      on_frontier.emplace(p.model_id, p.strategy);
      frontier.push_back(p);
    }
  }
  const std::vector<std::string> header = {"family", "model_id", "strategy",
                                           "accuracy", "latency_s", "cost_usd"};
  auto fields = [&](const FrontierPoint& p) {
    return std::vector<std::string>{p.family, p.model_id, p.strategy, num(p.accuracy),
                                    num(p.latency_s), pricing ? num(p.cost_usd) : ""};
  };
  CsvWriter f(o.out_dir / "frontier.csv");
  f.row(header);
  for (const auto& p : frontier) f.row(fields(p));
  CsvWriter all(o.out_dir / "points.csv");
  auto h = header;
  h.push_back("on_frontier");
  all.row(h);
  for (const auto& p : points) {
    auto row = fields(p);
    row.push_back(on_frontier.count(std::pair(p.model_id, p.strategy)) ? "true" : "false");
    all.row(row);
  }
  return {o.out_dir / "frontier.csv", o.out_dir / "points.csv"};
}

double mean_score(const std::vector<const SampleTrace*>& group) {
  double sum = 0.0;
  for (const auto* t : group) sum += t->final_score();
  return sum / static_cast<double>(group.size());
}

std::vector<fs::path> gains_report(const std::vector<SampleTrace>& traces, const ReportOptions& o) {
  const Groups g = group_traces(traces);
  // Baseline per model: no reflection, no thinking budget, preferring the
  // uncached variant.
  std::map<std::string, const std::vector<const SampleTrace*>*> baseline;
  for (const auto& key : g.keys) {
    const auto& group = g.by_key.at(key);
    const auto& s = group.front()->strategy;
    if (s.reflection_rounds != 0 || s.thinking_budget) continue;
    auto it = baseline.find(s.model_id);
    if (it == baseline.end() || (!s.caching_enabled && it->second->front()->strategy.caching_enabled)) {
      baseline[s.model_id] = &group;
    }
  }
  CsvWriter gains(o.out_dir / "gains.csv");
  gains.row({"model_id", "strategy", "baseline_accuracy", "accuracy", "relative_gain_pct"});
  for (const auto& key : g.keys) {
    const auto& group = g.by_key.at(key);
    const auto& s = group.front()->strategy;
    const double acc = mean_score(group);
    const auto it = baseline.find(s.model_id);
    std::string base, gain;
    if (it != baseline.end()) {
      const double acc0 = mean_score(*it->second);
      base = num(acc0);
      if (acc0 > 0.0) gain = num(relative_gain(acc, acc0));
    }
    gains.row({s.model_id, s.label(), base, num(acc), gain});
  }

  // Accuracy after each round within reflection runs.
  CsvWriter curves(o.out_dir / "curves.csv");
  curves.row({"model_id", "strategy", "round", "accuracy", "relative_gain_pct"});
  for (const auto& key : g.keys) {
    const auto& group = g.by_key.at(key);
    const auto passes = pass_matrix(group);
    std::vector<double> per_round(passes.front().size(), 0.0);
    for (const auto* t : group) {
      for (size_t r = 0; r < per_round.size(); ++r) {
        const size_t idx = std::min(r, t->snapshots.size() - 1);
        const auto& v = t->snapshots[idx].verdict;
        per_round[r] += v ? v->score : 0.0;
      }
    }
    const auto& s = group.front()->strategy;
    const double n = static_cast<double>(group.size());
    for (size_t r = 0; r < per_round.size(); ++r) {
      const double acc = per_round[r] / n;
      const double acc0 = per_round[0] / n;
      curves.row({s.model_id, s.label(), std::to_string(r), num(acc),
                  acc0 > 0.0 ? num(relative_gain(acc, acc0)) : ""});
    }
  }
  return {o.out_dir / "gains.csv", o.out_dir / "curves.csv"};
}

std::vector<fs::path> transitions_report(const std::vector<SampleTrace>& traces,
                                         const ReportOptions& o) {
  const Groups g = group_traces(traces);
  CsvWriter csv(o.out_dir / "transitions.csv");
  csv.row({"key", "boundary", "correct_to_correct", "correct_to_incorrect", "incorrect_to_correct",
           "incorrect_to_incorrect", "accuracy_before", "accuracy_after",
           "fraction_errors_corrected"});
  json sankey = json::object();
  for (const auto& key : g.keys) {
    const auto& group = g.by_key.at(key);
    if (group.front()->strategy.reflection_rounds == 0) continue;
    const TransitionMatrix m = transitions(pass_matrix(group));
    for (size_t b = 0; b < m.boundaries.size(); ++b) {
      const auto& c = m.boundaries[b];
      csv.row({key, std::to_string(b) + "->" + std::to_string(b + 1),
               std::to_string(c.correct_to_correct), std::to_string(c.correct_to_incorrect),
               std::to_string(c.incorrect_to_correct), std::to_string(c.incorrect_to_incorrect),
               num(m.accuracy_at(b)), num(m.accuracy_at(b + 1)),
               num(m.fraction_errors_corrected(b))});
    }
    sankey[key] = m.to_sankey_json();
  }
  write_json(o.out_dir / "sankey.json", sankey);
  return {o.out_dir / "transitions.csv", o.out_dir / "sankey.json"};
}

void write_matrix(const fs::path& path, const std::vector<std::string>& keys,
                  const std::vector<std::vector<double>>& m) {
  CsvWriter csv(path);
  std::vector<std::string> header = {"key"};
  header.insert(header.end(), keys.begin(), keys.end());
  csv.row(header);
  for (size_t i = 0; i < keys.size(); ++i) {
    std::vector<std::string> row = {keys[i]};
    for (const double v : m[i]) row.push_back(num(v));
    csv.row(row);
  }
}

std::vector<fs::path> significance_report(const std::vector<SampleTrace>& traces,
                                          const ReportOptions& o, std::ostream& log) {
  const Groups g = group_traces(traces);
  std::vector<std::string> keys = g.keys;
  if (keys.size() < 2) throw Error(ErrorCode::kEmptyInput, "significance needs two configurations");
  log << "note: the tests run on bootstrap replicate accuracies, which are not independent "
         "samples; treat p-values as descriptive\n";

  // Scores ordered by sample id so equal-sized groups resample the same
  // examples in every configuration.
  std::vector<std::vector<double>> replicates;
  json bundle = {{"replicates_per_configuration", o.replicates}, {"seed", o.seed}};
  json configs = json::array();
  for (const auto& key : keys) {
    auto group = g.by_key.at(key);
    std::sort(group.begin(), group.end(),
              [](const SampleTrace* a, const SampleTrace* b) { return a->sample_id < b->sample_id; });
    std::vector<double> scores;
    for (const auto* t : group) scores.push_back(t->final_score());
    replicates.push_back(bootstrap_accuracies(scores, o.replicates, o.seed));
    const double mean = accuracy(replicates.back());
    configs.push_back({{"key", key}, {"accuracy", accuracy(scores)}, {"bootstrap_mean", mean}});
  }
  bundle["configurations"] = configs;

  const size_t k = keys.size();
  std::vector<std::vector<double>> welch_p(k, std::vector<double>(k, 1.0));
  json welch = json::array();
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      json entry = {{"a", keys[i]}, {"b", keys[j]}};
      try {
        const WelchResult w = welch_t_test(replicates[i], replicates[j]);
        welch_p[i][j] = welch_p[j][i] = w.p;
        entry["t"] = w.t;
        entry["df"] = w.df;
        entry["p"] = w.p;
      } catch (const Error& e) {
        // Both constant: identical means are indistinguishable, different
        // ones are separated with certainty.
        const double p = replicates[i][0] == replicates[j][0] ? 1.0 : 0.0;
        welch_p[i][j] = welch_p[j][i] = p;
        entry["p"] = p;
        entry["note"] = e.what();
      }
      welch.push_back(entry);
    }
  }
  bundle["welch"] = welch;
  write_matrix(o.out_dir / "welch_pvalues.csv", keys, welch_p);
  std::vector<fs::path> files = {o.out_dir / "welch_pvalues.csv"};

  if (k >= 3) {
    ScoreMatrix matrix(static_cast<size_t>(o.replicates), std::vector<double>(k));
    for (size_t r = 0; r < matrix.size(); ++r) {
      for (size_t c = 0; c < k; ++c) matrix[r][c] = replicates[c][r];
    }
    try {
      const FriedmanResult f = friedman_test(matrix);
      bundle["friedman"] = {{"chi2", f.chi2}, {"df", f.df}, {"p", f.p}, {"mean_ranks", f.mean_ranks}};
      const auto nemenyi = nemenyi_posthoc(matrix);
      bundle["nemenyi"] = nemenyi;
      write_matrix(o.out_dir / "nemenyi_pvalues.csv", keys, nemenyi);
      files.push_back(o.out_dir / "nemenyi_pvalues.csv");
    } catch (const Error& e) {
      bundle["friedman"] = {{"error", e.what()}};
    }
  }
  write_json(o.out_dir / "significance.json", bundle);
  files.push_back(o.out_dir / "significance.json");
  return files;
}

std::vector<fs::path> costs_report(const std::vector<SampleTrace>& traces, const ReportOptions& o,
                                   const PricingTable& pricing) {
  const Groups g = group_traces(traces);
  CsvWriter csv(o.out_dir / "costs.csv");
  csv.row({"key", "model_id", "strategy", "samples", "total_cost_usd", "mean_cost_usd",
           "uncached_model_cost_usd", "cached_model_cost_usd", "caching_savings_fraction",
           "mean_latency_s", "p50_latency_s", "p95_latency_s"});
  for (const auto& key : g.keys) {
    const auto& group = g.by_key.at(key);
    const auto& s = group.front()->strategy;
    Money total, uncached, cached;
    const PriceEntry& price = pricing.at(s.model_id);
    for (const auto* t : group) {
      total += trace_cost(*t, pricing).total();
      const auto what_if = caching_cost_model(*t, price);
      uncached += what_if.uncached.total();
      cached += what_if.cached.total();
    }
    const double n = static_cast<double>(group.size());
    const double savings =
        uncached.to_double() > 0.0 ? 1.0 - cached.to_double() / uncached.to_double() : 0.0;
    std::vector<double> lat;
    for (const auto* t : group) lat.push_back(t->total_latency_s);
    const LatencySummary ls = aggregate_latency(lat);
    csv.row({key, s.model_id, s.label(), std::to_string(group.size()), total.to_string(),
             num(total.to_double() / n), uncached.to_string(), cached.to_string(), num(savings),
             num(ls.mean), num(ls.p50), num(ls.p95)});
  }
  return {o.out_dir / "costs.csv"};
}

}  // namespace

std::vector<FrontierPoint> frontier_points(const std::vector<SampleTrace>& traces,
                                           const std::string& latency_stat,
                                           const PricingTable* pricing) {
  const Groups g = group_traces(traces);
  std::vector<FrontierPoint> out;
  for (const auto& key : g.keys) {
    const auto& group = g.by_key.at(key);
    FrontierPoint p;
    p.model_id = group.front()->strategy.model_id;
    p.strategy = group.front()->strategy.label();
    p.family = family_of(*group.front());
    p.accuracy = mean_score(group);
    p.latency_s = latency_of(group, latency_stat);
    if (pricing) {
      Money total;
      for (const auto* t : group) total += trace_cost(*t, *pricing).total();
      p.cost_usd = total.to_double() / static_cast<double>(group.size());
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::vector<bool>> pass_matrix(const std::vector<const SampleTrace*>& traces) {
  size_t rounds = 0;
  for (const auto* t : traces) {
    rounds = std::max(rounds, static_cast<size_t>(t->strategy.reflection_rounds) + 1);
  }
  std::vector<std::vector<bool>> out;
  for (const auto* t : traces) {
    std::vector<bool> row;
    for (size_t r = 0; r < rounds; ++r) {
      if (t->snapshots.empty()) {
        row.push_back(false);
        continue;
      }
      const auto& snap = t->snapshots[std::min(r, t->snapshots.size() - 1)];
      row.push_back(snap.verdict && snap.verdict->pass);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<fs::path> write_report(const ReportOptions& o, std::ostream& log) {
  std::vector<SampleTrace> traces = read_traces(o.traces);
  if (o.family && *o.family != "all") {
    std::erase_if(traces, [&](const SampleTrace& t) { return family_of(t) != *o.family; });
  }
  if (traces.empty()) throw Error(ErrorCode::kEmptyInput, "no traces to report on");
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);

  std::optional<PricingTable> pricing;
  if (o.pricing) pricing = PricingTable::from_file(*o.pricing);
  switch (o.kind) {
    case ReportKind::kFrontier: return frontier_report(traces, o, pricing ? &*pricing : nullptr);
    case ReportKind::kGains: return gains_report(traces, o);
    case ReportKind::kTransitions: return transitions_report(traces, o);
    case ReportKind::kSignificance: return significance_report(traces, o, log);
    case ReportKind::kCosts:
      if (!pricing) throw ConfigError({"--pricing: required for the costs report"});
      return costs_report(traces, o, *pricing);
  }
  return {};
}

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err) {
  if (options.latency_stat != "mean" && options.latency_stat != "p50" &&
      options.latency_stat != "p95") {
    err << error_record("config", "--latency: expected mean, p50 or p95") << '\n';
    return kExitConfig;
  }
  if (options.replicates < 2) {
    err << error_record("config", "--replicates: expected at least 2") << '\n';
    return kExitConfig;
  }
  try {
    for (const auto& f : write_report(options, err)) out << f.string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) err << error_record("config", p) << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << error_record(std::string(error_code_name(e.code())), e.what()) << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << error_record("runtime", e.what()) << '\n';
    return kExitRuntime;
  }
}

}  // namespace reflectbench

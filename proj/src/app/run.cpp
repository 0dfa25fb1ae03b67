#include "reflectbench/app/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <iostream>
#include <thread>

#include "reflectbench/core/errors.hpp"

namespace reflectbench {

namespace fs = std::filesystem;
using nlohmann::json;

void OrderedAppender::submit(size_t index, std::string line) {
  std::lock_guard lock(mu_);
  pending_.emplace(index, std::move(line));
  while (!pending_.empty() && pending_.begin()->first == next_) {
    out_ << pending_.begin()->second << '\n';
    pending_.erase(pending_.begin());
    ++next_;
    ++written_;
  }
  out_.flush();
}

size_t OrderedAppender::written() const {
  std::lock_guard lock(mu_);
  return written_;
}

std::string error_record(const std::string& kind, const std::string& message) {
  return json{{"error", kind}, {"message", message}}.dump();
}

PreparedRun prepare_run(const RunConfig& config) {
  std::vector<std::string> problems;
  PreparedRun run{config, {}, {}, std::nullopt};
  try {
    run.registry = ProviderRegistry::from_json(config.providers, config.providers_base_dir, config.seed);
  } catch (const std::exception& e) {
    problems.push_back(std::string("providers: ") + e.what());
  }
  if (problems.empty()) {
    for (size_t i = 0; i < config.strategies.size(); ++i) {
      const auto& s = config.strategies[i];
      const std::string where = "strategies[" + std::to_string(i) + "]";
      if (!run.registry.contains(s.model_id)) {
        problems.push_back(where + ".model_id: '" + s.model_id + "' is not in the providers config");
      }
      if (s.judge_model_id && !run.registry.contains(*s.judge_model_id)) {
        problems.push_back(where + ".judge_model_id: '" + *s.judge_model_id +
                           "' is not in the providers config");
      }
    }
  }
  if (config.pricing_path) {
    try {
      run.pricing = PricingTable::from_file(*config.pricing_path);
      for (const auto& s : config.strategies) {
        if (!run.registry.contains(s.model_id)) continue;
        std::vector<std::string> ids = {s.model_id};
        if (s.judge_model_id) ids.push_back(*s.judge_model_id);
        for (const auto& id : ids) {
          if (!run.registry.contains(id)) continue;
          const auto& price_id = run.registry.at(id).price_id;
          const std::string problem = "pricing: no price for '" + price_id + "'";
          if (!run.pricing->contains(price_id) &&
              std::find(problems.begin(), problems.end(), problem) == problems.end()) {
            problems.push_back(problem);
          }
        }
      }
    } catch (const std::exception& e) {
      problems.push_back(std::string("pricing: ") + e.what());
    }
  }
  try {
    run.samples = load_dataset(config.dataset);
  } catch (const std::exception& e) {
    problems.push_back(std::string("dataset: ") + e.what());
  }
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec || !fs::is_directory(config.output_dir)) {
    problems.push_back("output_dir: cannot create " + config.output_dir.string());
  } else {
    const fs::path probe = config.output_dir / ".write_probe";
    std::ofstream(probe) << "";
    if (!fs::exists(probe)) problems.push_back("output_dir: not writable");
    fs::remove(probe, ec);
  }
  if (!problems.empty()) throw ConfigError(problems);
  return run;
}

std::set<std::pair<std::string, std::string>> completed_keys(const fs::path& traces) {
  std::set<std::pair<std::string, std::string>> done;
  if (!fs::exists(traces)) return done;
  for (const auto& t : read_traces(traces)) done.emplace(t.sample_id, t.strategy.key());
  return done;
}

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

PromptTemplates templates_for(const RunConfig& c) {
  PromptTemplates t = c.templates_dir ? PromptTemplates::from_directory(*c.templates_dir)
                                      : PromptTemplates();
  if (c.current_date) t.set_current_date(*c.current_date);
  return t;
}

std::string price_id_for(const PreparedRun* run, const std::string& model_id) {
  if (run && run->registry.contains(model_id)) return run->registry.at(model_id).price_id;
  return model_id;
}

}  // namespace

json run_summary(const std::vector<SampleTrace>& traces, const PreparedRun* run,
                 const std::vector<StrategyConfig>& order) {
  std::vector<std::string> keys;
  std::map<std::string, std::vector<const SampleTrace*>> by_key;
  for (const auto& s : order) {
    if (!by_key.count(s.key())) keys.push_back(s.key());
    by_key[s.key()];
  }
  for (const auto& t : traces) {
    const auto key = t.strategy.key();
    if (!by_key.count(key)) keys.push_back(key);
    by_key[key].push_back(&t);
  }
  json configs = json::array();
  for (const auto& key : keys) {
    const auto& group = by_key[key];
    if (group.empty()) continue;
    const SampleTrace& first = *group.front();
    std::vector<double> latencies;
    double score_sum = 0.0;
    size_t passes = 0, truncated = 0, estimated = 0;
    int retries = 0;
    std::optional<Money> total_cost = Money();
    for (const auto* t : group) {
      latencies.push_back(t->total_latency_s);
      score_sum += t->final_score();
      passes += t->final_pass() ? 1 : 0;
      truncated += t->truncated ? 1 : 0;
      estimated += t->estimated_usage ? 1 : 0;
      retries += t->retries;
      if (run && run->pricing && total_cost) {
        try {
          const std::string judge = t->strategy.judge_model_id
                                        ? price_id_for(run, *t->strategy.judge_model_id)
                                        : std::string();
          *total_cost += trace_cost(*t, *run->pricing, price_id_for(run, t->strategy.model_id), judge)
                             .total();
        } catch (const Error&) {
          total_cost.reset();
        }
      } else {
        total_cost.reset();
      }
    }
    const auto n = static_cast<double>(group.size());
    const LatencySummary lat = aggregate_latency(latencies);
    json c = {{"key", key},
              {"model_id", first.strategy.model_id},
              {"strategy", first.strategy.label()},
              {"family", first.family},
              {"task", std::string(task_kind_name(first.task))},
              {"samples", group.size()},
              {"accuracy", score_sum / n},
              {"pass_rate", static_cast<double>(passes) / n},
              {"mean_latency_s", lat.mean},
              {"p50_latency_s", lat.p50},
              {"p95_latency_s", lat.p95},
              {"truncated", truncated},
              {"estimated_usage", estimated},
              {"retries", retries}};
    if (total_cost) {
      c["total_cost_usd"] = total_cost->to_string();
      c["mean_cost_usd"] = total_cost->to_double() / n;
    } else {
      c["total_cost_usd"] = nullptr;
      c["mean_cost_usd"] = nullptr;
    }
    configs.push_back(std::move(c));
  }
  return {{"configurations", configs}};
}

RunResult execute_run(PreparedRun& run, std::ostream& log) {
  const RunConfig& c = run.config;
  RunResult result;
  result.traces_path = c.output_dir / "traces.jsonl";
  result.summary_path = c.output_dir / "summary.json";

  const auto done = completed_keys(result.traces_path);
  struct Job {
    const Sample* sample;
    const StrategyConfig* strategy;
  };
  std::vector<Job> jobs;
  for (const auto& s : c.strategies) {
    for (const auto& sample : run.samples) {
      ++result.planned;
      if (done.count({sample.id, s.key()})) {
        ++result.skipped;
        continue;
      }
      jobs.push_back({&sample, &s});
    }
  }

  const bool fresh = !fs::exists(result.traces_path);
  std::ofstream out(result.traces_path, std::ios::app | std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + result.traces_path.string());
  if (fresh) {
    out << json{{"kind", "header"},
                {"trace_version", kTraceVersion},
                {"created_at", utc_timestamp()},
                {"seed", c.seed}}
               .dump()
        << '\n';
  }
  log << "run: " << result.planned << " planned, " << result.skipped << " already done, "
      << jobs.size() << " to execute\n";

  EngineOptions engine;
  engine.base_params = c.generation;
  engine.answer_headroom = c.answer_headroom;
  engine.templates = templates_for(c);
  VerifierOptions verifier;
  verifier.translation_pass_threshold = c.translation_pass_threshold;

  OrderedAppender appender(out);
  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first_error;
  std::mutex error_mu;

  auto worker = [&] {
    while (!failed.load()) {
      const size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      try {
        const Job& job = jobs[i];
        const ModelEntry& model = run.registry.at(job.strategy->model_id);
        Provider* judge = job.strategy->judge_model_id
                              ? run.registry.at(*job.strategy->judge_model_id).provider.get()
                              : nullptr;
        SampleTrace trace = run_sample(*job.sample, *job.strategy, *model.provider, judge, engine);
        trace.family = model.family;
        evaluate_trace(trace, *job.sample, verifier);
        appender.submit(i, trace_to_json(trace).dump());
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        failed = true;
      }
    }
  };
  const int threads = std::max(1, std::min<int>(c.concurrency, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  out.close();
  result.executed = appender.written();
  if (first_error) std::rethrow_exception(first_error);

  const auto traces = read_traces(result.traces_path);
  std::ofstream summary(result.summary_path, std::ios::binary);
  summary << run_summary(traces, &run, c.strategies).dump(2) << '\n';
  log << "run: wrote " << result.executed << " traces to " << result.traces_path.string() << "\n";
  return result;
}

namespace {

int report_failure(std::ostream& err, const std::exception_ptr& ep) {
  try {
    std::rethrow_exception(ep);
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

}  // namespace

int cmd_validate(const fs::path& config_path, std::ostream& out, std::ostream& err) {
  try {
    const PreparedRun run = prepare_run(RunConfig::from_file(config_path));
    out << "config ok: " << run.samples.size() << " samples x " << run.config.strategies.size()
        << " strategies\n";
    if (run.pricing) {
      for (const auto& w : run.pricing->warnings()) out << "warning: " << w << '\n';
    }
    return kExitOk;
  } catch (...) {
    const int code = report_failure(err, std::current_exception());
    return code == kExitRuntime ? kExitConfig : code;
  }
}

int cmd_run(const fs::path& config_path, bool dry_run, std::ostream& out, std::ostream& err) {
  PreparedRun run;
  try {
    run = prepare_run(RunConfig::from_file(config_path));
  } catch (...) {
    const int code = report_failure(err, std::current_exception());
    return code == kExitRuntime ? kExitConfig : code;
  }
  try {
    if (dry_run) {
      const auto done = completed_keys(run.config.output_dir / "traces.jsonl");
      size_t pending = 0;
      for (const auto& s : run.config.strategies) {
        size_t n = 0;
        for (const auto& sample : run.samples) n += done.count({sample.id, s.key()}) ? 0 : 1;
        out << "plan: " << s.key() << ": " << n << " of " << run.samples.size() << " pending\n";
        pending += n;
      }
      out << "plan: " << pending << " provider runs pending\n";
      return kExitOk;
    }
    execute_run(run, out);
    return kExitOk;
  } catch (...) {
    return report_failure(err, std::current_exception());
  }
}

}  // namespace reflectbench

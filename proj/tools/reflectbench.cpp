// Command-line front end: run, report, validate.

#include <iostream>

#include "CLI11.hpp"
#include "reflectbench/app/report.hpp"
#include "reflectbench/app/run.hpp"

int main(int argc, char** argv) {
  using namespace reflectbench;

  CLI::App app{"Benchmark harness for self-reflection and thinking-budget strategies"};
  app.require_subcommand(1);

  std::string config_path;
  bool dry_run = false;
  auto* run = app.add_subcommand("run", "Execute a strategy grid over a dataset");
  run->add_option("--config", config_path, "Run configuration file")->required();
  run->add_flag("--dry-run", dry_run, "Validate and print the plan without calling providers");

  auto* validate = app.add_subcommand("validate", "Check a run configuration");
  validate->add_option("--config", config_path, "Run configuration file")->required();

  ReportOptions report_options;
  std::string traces, kind, out_dir = ".", family, pricing;
  auto* report = app.add_subcommand("report", "Derive CSV/JSON artifacts from a trace file");
  report->add_option("--traces", traces, "Trace JSONL file")->required();
  report->add_option("--kind", kind, "frontier | gains | transitions | significance | costs")
      ->required()
      ->check(CLI::IsMember({"frontier", "gains", "transitions", "significance", "costs"}));
  report->add_option("--out", out_dir, "Output directory");
  report->add_option("--family", family, "Model family to keep, or 'all' for per-family frontiers");
  report->add_option("--pricing", pricing, "Pricing file (needed for costs)");
  report->add_option("--latency", report_options.latency_stat, "mean | p50 | p95");
  report->add_option("--seed", report_options.seed, "Bootstrap seed");
  report->add_option("--replicates", report_options.replicates, "Bootstrap replicates");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(config_path, dry_run, std::cout, std::cerr);
  if (*validate) return cmd_validate(config_path, std::cout, std::cerr);

  report_options.traces = traces;
  report_options.kind = parse_report_kind(kind);
  report_options.out_dir = out_dir;
  if (!family.empty()) report_options.family = family;
  if (!pricing.empty()) report_options.pricing = pricing;
  return cmd_report(report_options, std::cout, std::cerr);
}

#include "reflectbench/analysis/aggregate.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <tuple>

#include "reflectbench/core/errors.hpp"
#include "reflectbench/core/random.hpp"

namespace reflectbench {

double accuracy(std::span<const VerdictRecord> verdicts) {
  if (verdicts.empty()) throw Error(ErrorCode::kEmptyInput, "accuracy of no verdicts");
  double sum = 0.0;
  for (const auto& v : verdicts) sum += v.score;
  return sum / static_cast<double>(verdicts.size());
}

double accuracy(std::span<const double> scores) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyInput, "accuracy of no scores");
  return std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
}

double relative_gain(double acc_k, double acc_0) {
  if (!(acc_0 > 0.0)) throw Error(ErrorCode::kZeroBaseline, "baseline accuracy is zero");
  return 100.0 * (acc_k - acc_0) / acc_0;
}

bool dominates(const FrontierPoint& p, const FrontierPoint& q) {
  return p.accuracy >= q.accuracy && p.latency_s <= q.latency_s &&
         (p.accuracy > q.accuracy || p.latency_s < q.latency_s);
}

std::vector<FrontierPoint> pareto_frontier(std::span<const FrontierPoint> points) {
  std::vector<FrontierPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const FrontierPoint& a, const FrontierPoint& b) {
    return std::tie(a.latency_s, b.accuracy, a.model_id, a.strategy) <
           std::tie(b.latency_s, a.accuracy, b.model_id, b.strategy);
  });
  // Sweep by latency: a point survives if no faster-or-equal point is at
  // least as accurate (with a strict edge somewhere).
  std::vector<FrontierPoint> out;
  double best_accuracy = -std::numeric_limits<double>::infinity();
  size_t i = 0;
  while (i < sorted.size()) {
    size_t j = i;
    while (j < sorted.size() && sorted[j].latency_s == sorted[i].latency_s) ++j;
    // Within one latency group only the top accuracy can survive.
    const double group_best = sorted[i].accuracy;
    if (group_best > best_accuracy) {
      for (size_t k = i; k < j && sorted[k].accuracy == group_best; ++k) out.push_back(sorted[k]);
      best_accuracy = group_best;
    }
    i = j;
  }
  return out;
}

double TransitionMatrix::accuracy_at(size_t round) const {
  if (samples == 0) return 0.0;
  return static_cast<double>(correct_per_round.at(round)) / static_cast<double>(samples);
}

double TransitionMatrix::fraction_errors_corrected(size_t boundary) const {
  const auto& b = boundaries.at(boundary);
  const auto errors = b.incorrect_to_correct + b.incorrect_to_incorrect;
  return errors == 0 ? 0.0 : static_cast<double>(b.incorrect_to_correct) / static_cast<double>(errors);
}

double TransitionMatrix::fraction_initial_errors_fixed() const {
  const auto errors = samples - correct_per_round.at(0);
  return errors == 0 ? 0.0 : static_cast<double>(initial_errors_fixed) / static_cast<double>(errors);
}

nlohmann::json TransitionMatrix::to_sankey_json() const {
  using nlohmann::json;
  json nodes = json::array();
  for (size_t r = 0; r < correct_per_round.size(); ++r) {
    nodes.push_back({{"id", 2 * r}, {"name", "round " + std::to_string(r) + " correct"},
                     {"round", r}, {"correct", true}, {"count", correct_per_round[r]}});
    nodes.push_back({{"id", 2 * r + 1}, {"name", "round " + std::to_string(r) + " incorrect"},
                     {"round", r}, {"correct", false},
                     {"count", samples - correct_per_round[r]}});
  }
  json links = json::array();
  for (size_t r = 0; r < boundaries.size(); ++r) {
    const auto& b = boundaries[r];
    const auto link = [&](size_t from, size_t to, std::int64_t value, const char* kind) {
      links.push_back({{"source", from}, {"target", to}, {"value", value},
                       {"boundary", r}, {"kind", kind}});
    };
    link(2 * r, 2 * r + 2, b.correct_to_correct, "correct_to_correct");
    link(2 * r, 2 * r + 3, b.correct_to_incorrect, "correct_to_incorrect");
    link(2 * r + 1, 2 * r + 2, b.incorrect_to_correct, "incorrect_to_correct");
    link(2 * r + 1, 2 * r + 3, b.incorrect_to_incorrect, "incorrect_to_incorrect");
  }
  json out = {{"samples", samples}, {"nodes", nodes}, {"links", links}};
  json corrected = json::array();
  for (size_t r = 0; r < boundaries.size(); ++r) corrected.push_back(fraction_errors_corrected(r));
  out["fraction_errors_corrected"] = corrected;
  out["fraction_initial_errors_fixed"] = fraction_initial_errors_fixed();
  return out;
}

TransitionMatrix transitions(const std::vector<std::vector<bool>>& passes) {
  if (passes.empty()) throw Error(ErrorCode::kEmptyInput, "no samples for transitions");
  const size_t rounds = passes.front().size();
  if (rounds == 0) throw Error(ErrorCode::kEmptyInput, "samples have no rounds");
  for (size_t i = 0; i < passes.size(); ++i) {
    if (passes[i].size() != rounds) {
      throw Error(ErrorCode::kRaggedInput, "sample " + std::to_string(i) + " has " +
                                               std::to_string(passes[i].size()) +
                                               " rounds, expected " + std::to_string(rounds));
    }
  }
  TransitionMatrix m;
  m.samples = static_cast<std::int64_t>(passes.size());
  m.correct_per_round.assign(rounds, 0);
  m.boundaries.assign(rounds - 1, {});
  for (const auto& row : passes) {
    if (!row.front() && row.back()) ++m.initial_errors_fixed;
    for (size_t r = 0; r < rounds; ++r) {
      if (row[r]) ++m.correct_per_round[r];
      if (r + 1 == rounds) continue;
      auto& b = m.boundaries[r];
      if (row[r]) {
        ++(row[r + 1] ? b.correct_to_correct : b.correct_to_incorrect);
      } else {
        ++(row[r + 1] ? b.incorrect_to_correct : b.incorrect_to_incorrect);
      }
    }
  }
  return m;
}

std::vector<double> bootstrap_accuracies(std::span<const double> scores, int replicates,
                                         std::uint64_t seed) {
  if (scores.size() < 2) throw Error(ErrorCode::kEmptyInput, "bootstrap needs at least two scores");
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::uint64_t>(scores.size());
  std::vector<double> out;
  out.reserve(static_cast<size_t>(std::max(replicates, 0)));
  for (int b = 0; b < replicates; ++b) {
    double sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) sum += scores[uniform_index(rng, n)];
    out.push_back(sum / static_cast<double>(n));
  }
  return out;
}

}  // namespace reflectbench

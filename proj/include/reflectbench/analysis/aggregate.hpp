#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "reflectbench/verify/verdict.hpp"

namespace reflectbench {

// Mean score. Throws Error(kEmptyInput) on no verdicts.
double accuracy(std::span<const VerdictRecord> verdicts);
double accuracy(std::span<const double> scores);

// 100 * (acc_k - acc_0) / acc_0. Throws Error(kZeroBaseline) when acc_0 <= 0.
double relative_gain(double acc_k, double acc_0);

struct FrontierPoint {
  std::string model_id;
  std::string strategy;
  double accuracy = 0.0;
  double latency_s = 0.0;
  double cost_usd = 0.0;
  std::string family;
};

// p dominates q when it is at least as accurate and at least as fast, and
// strictly better on one of the two.
bool dominates(const FrontierPoint& p, const FrontierPoint& q);

// Points not dominated by any other, sorted by latency, then accuracy
// descending, then model and strategy. Exact ties are all kept.
std::vector<FrontierPoint> pareto_frontier(std::span<const FrontierPoint> points);

struct TransitionCounts {
  std::int64_t correct_to_correct = 0;
  std::int64_t correct_to_incorrect = 0;
  std::int64_t incorrect_to_correct = 0;
  std::int64_t incorrect_to_incorrect = 0;

  std::int64_t total() const {
    return correct_to_correct + correct_to_incorrect + incorrect_to_correct +
           incorrect_to_incorrect;
  }
  friend bool operator==(const TransitionCounts&, const TransitionCounts&) = default;
};

struct TransitionMatrix {
  std::int64_t samples = 0;
  std::vector<std::int64_t> correct_per_round;
  // boundaries[r] covers round r -> r + 1.
  std::vector<TransitionCounts> boundaries;
  // Samples wrong at round 0 and right at the last round.
  std::int64_t initial_errors_fixed = 0;

  double accuracy_at(size_t round) const;
  // incorrect->correct over the errors present before the boundary.
  double fraction_errors_corrected(size_t boundary) const;
  // Round-0 errors that are correct at the last round, over round-0 errors.
  double fraction_initial_errors_fixed() const;

  // Sankey nodes "round r correct/incorrect" and the links between them.
  nlohmann::json to_sankey_json() const;
};

// passes[i][r] is sample i's pass flag at round r. Throws Error(kRaggedInput)
// when samples have different round counts and Error(kEmptyInput) on none.
TransitionMatrix transitions(const std::vector<std::vector<bool>>& passes);

// `replicates` accuracies, each over n scores drawn with replacement.
// Throws Error(kEmptyInput) on fewer than two scores.
std::vector<double> bootstrap_accuracies(std::span<const double> scores, int replicates = 100,
                                         std::uint64_t seed = 0);

}  // namespace reflectbench

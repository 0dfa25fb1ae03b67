// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "reflectbench/analysis/aggregate.hpp"
#include "reflectbench/analysis/stats.hpp"
#include "reflectbench/app/run.hpp"
#include "reflectbench/data/dataset.hpp"
#include "reflectbench/econ/cost.hpp"
#include "reflectbench/verify/math.hpp"
#include "reflectbench/verify/meteor.hpp"
#include "reflectbench/verify/sql.hpp"
#include "test_support.hpp"

using namespace reflectbench;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits.
constexpr double kGainTolerancePct = 0.1;
constexpr double kGainRuntimeS = 1.0;
constexpr double kFrontierRuntimeS = 5.0;
constexpr double kTransitionTolerancePct = 0.1;
constexpr double kPartialCreditTolerance = 1e-9;
constexpr double kWelchTolerance = 1e-6;
constexpr double kTukeyReference = 3.314;
constexpr double kTukeyRelativeTolerance = 0.01;
constexpr double kNemenyiIdenticalMin = 0.999;
constexpr double kCachingMinSavings = 0.20;
constexpr double kCachingDegenerateTolerance = 1e-12;
constexpr double kRunRuntimeS = 60.0;
constexpr double kMeteorTolerance = 1e-9;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << std::fixed << v;
  return s.str();
}

// ---------------------------------------------------------------------------

Outcome relative_gains() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double a = relative_gain(0.71, 0.22);
  const double b = relative_gain(0.86, 0.74);
  const double elapsed = seconds_since(t0);
  o.check(std::abs(a - 222.7) <= kGainTolerancePct, "gain(0.71, 0.22) = " + fmt(a));
  o.check(std::abs(b - 16.2) <= kGainTolerancePct, "gain(0.86, 0.74) = " + fmt(b));
  o.check(elapsed < kGainRuntimeS, "runtime " + fmt(elapsed) + " s");
  o.notes.insert(o.notes.begin(), fmt(a, 1) + "% and " + fmt(b, 1) + "%");
  return o;
}

// ---------------------------------------------------------------------------

std::vector<FrontierPoint> dominance_oracle(const std::vector<FrontierPoint>& ps) {
  std::vector<FrontierPoint> out;
  for (size_t i = 0; i < ps.size(); ++i) {
    bool dominated = false;
    for (size_t j = 0; j < ps.size() && !dominated; ++j) {
      if (i == j) continue;
      const bool geq = ps[j].accuracy >= ps[i].accuracy && ps[j].latency_s <= ps[i].latency_s;
      const bool strict = ps[j].accuracy > ps[i].accuracy || ps[j].latency_s < ps[i].latency_s;
      dominated = geq && strict;
    }
    if (!dominated) out.push_back(ps[i]);
  }
  return out;
}

std::multiset<std::string> keys(const std::vector<FrontierPoint>& ps) {
  std::multiset<std::string> out;
  for (const auto& p : ps) out.insert(p.model_id + "/" + p.strategy);
  return out;
}

std::vector<FrontierPoint> random_points(std::mt19937_64& rng, size_t n) {
  // Coarse grids so that ties on one or both axes are common.
  std::uniform_int_distribution<int> acc(0, 20), lat(1, 40);
  std::vector<FrontierPoint> ps;
  for (size_t i = 0; i < n; ++i) {
    ps.push_back({"m" + std::to_string(i), "s", acc(rng) / 20.0, lat(rng) * 0.5, 0.0, "f"});
  }
  return ps;
}

Outcome frontier() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double a = 0.80, a_prime = 0.85, latency = 15.0;
  const std::vector<FrontierPoint> fixture = {
      {"haiku", "r0", 0.64, 7.5, 0, "f"},
      {"sonnet", "budget4096", 0.93, 27.9, 0, "f"},
      {"sonnet", "budget1024", a, latency, 0, "f"},
      {"sonnet", "r1", a_prime, latency, 0, "f"},
  };
  const auto front = keys(pareto_frontier(fixture));
  o.check(front == std::multiset<std::string>{"haiku/r0", "sonnet/budget4096", "sonnet/r1"},
          "fixture frontier is wrong");

  std::mt19937_64 rng(20250416);
  std::uniform_int_distribution<size_t> size(0, 64);
  for (int i = 0; i < 1000; ++i) {
    const auto ps = random_points(rng, size(rng));
    const auto f = pareto_frontier(ps);
    if (keys(pareto_frontier(f)) != keys(f)) {
      o.check(false, "not idempotent on set " + std::to_string(i));
      break;
    }
  }
  for (int i = 0; i < 200; ++i) {
    const auto ps = random_points(rng, size(rng));
    if (keys(pareto_frontier(ps)) != keys(dominance_oracle(ps))) {
      o.check(false, "differs from the dominance oracle on set " + std::to_string(i));
      break;
    }
  }
  const double elapsed = seconds_since(t0);
  o.check(elapsed < kFrontierRuntimeS, "runtime " + fmt(elapsed) + " s");
  o.notes.insert(o.notes.begin(), "fixture + 1000 idempotence + 200 oracle sets in " + fmt(elapsed, 2) + " s");
  return o;
}

// ---------------------------------------------------------------------------

bool conserved(const TransitionMatrix& m) {
  for (size_t b = 0; b < m.boundaries.size(); ++b) {
    const auto& c = m.boundaries[b];
    if (c.total() != m.samples) return false;
    if (c.correct_to_correct + c.correct_to_incorrect != m.correct_per_round[b]) return false;
    if (c.correct_to_correct + c.incorrect_to_correct != m.correct_per_round[b + 1]) return false;
  }
  return true;
}

Outcome transition_fixture() {
  Outcome o;
  std::vector<std::vector<bool>> passes;
  for (int i = 0; i < 30; ++i) passes.push_back({true, true});
  for (int i = 0; i < 34; ++i) passes.push_back({false, true});
  for (int i = 0; i < 36; ++i) passes.push_back({false, false});
  const auto m = transitions(passes);
  const double acc1 = 100.0 * m.accuracy_at(1);
  const double corrected = 100.0 * m.fraction_errors_corrected(0);
  o.check(std::abs(acc1 - 64.0) <= kTransitionTolerancePct, "round-1 accuracy " + fmt(acc1));
  o.check(std::abs(corrected - 48.6) <= kTransitionTolerancePct, "errors corrected " + fmt(corrected));
  o.check(m.boundaries[0].correct_to_incorrect == 0, "unexpected regressions");
  o.check(conserved(m), "fixture not conserved");

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> n(1, 200), rounds(2, 5);
  std::bernoulli_distribution coin(0.5);
  for (int s = 0; s < 100; ++s) {
    std::vector<std::vector<bool>> p(n(rng));
    const int r = rounds(rng);
    for (auto& row : p) {
      for (int k = 0; k < r; ++k) row.push_back(coin(rng));
    }
    if (!conserved(transitions(p))) {
      o.check(false, "conservation fails on random set " + std::to_string(s));
      break;
    }
  }
  o.notes.insert(o.notes.begin(), fmt(acc1, 1) + "% at round 1, " + fmt(corrected, 1) + "% of errors corrected");
  return o;
}

// ---------------------------------------------------------------------------

Outcome math_suite() {
  Outcome o;
  std::ifstream in(testutil::oracle_dir() / "math_pairs.json");
  if (!in) {
    o.check(false, "math_pairs.json missing");
    return o;
  }
  const json pairs = json::parse(in);
  int agree = 0, false_positives = 0, negatives = 0;
  for (const auto& p : pairs) {
    const std::string a = normalize_latex(p["a"].get<std::string>());
    const std::string b = normalize_latex(p["b"].get<std::string>());
    const bool got = a == b || symbolic_equivalent(a, b);
    const bool want = p["equivalent"].get<bool>();
    agree += got == want;
    if (!want) {
      ++negatives;
      false_positives += got;
    }
    if (got != want) o.notes.push_back("disagrees on " + p.dump());
  }
  o.pass = agree == static_cast<int>(pairs.size()) && false_positives == 0 && pairs.size() == 60 &&
           negatives == 30;
  o.notes.insert(o.notes.begin(), std::to_string(agree) + "/" + std::to_string(pairs.size()) +
                                      " agree, " + std::to_string(false_positives) + " false positives on " +
                                      std::to_string(negatives) + " non-equivalent pairs");
  return o;
}

// ---------------------------------------------------------------------------

bool oracle_cell_equal(const Cell& a, const Cell& b) {
  auto num = [](const Cell& c, double& out) {
    if (auto i = std::get_if<std::int64_t>(&c)) return out = static_cast<double>(*i), true;
    if (auto d = std::get_if<double>(&c)) return out = *d, true;
    return false;
  };
  double x, y;
  if (num(a, x) && num(b, y)) return x == y;
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<std::monostate>(a)) return true;
  return std::get<std::string>(a) == std::get<std::string>(b);
}

double oracle_partial_credit(const ResultTable& pred, const ResultTable& gold) {
  const double denom = static_cast<double>(std::max(pred.cell_count(), gold.cell_count()));
  if (denom == 0) return 0.0;
  size_t hits = 0;
  if (gold.ordered) {
    for (size_t r = 0; r < std::min(pred.rows.size(), gold.rows.size()); ++r) {
      for (size_t c = 0; c < std::min(pred.columns.size(), gold.columns.size()); ++c) {
        hits += oracle_cell_equal(pred.rows[r][c], gold.rows[r][c]);
      }
    }
    return hits / denom;
  }
  std::vector<Cell> pool;
  for (const auto& row : gold.rows) pool.insert(pool.end(), row.begin(), row.end());
  std::vector<bool> used(pool.size(), false);
  for (const auto& row : pred.rows) {
    for (const auto& cell : row) {
      for (size_t k = 0; k < pool.size(); ++k) {
        if (!used[k] && oracle_cell_equal(cell, pool[k])) {
          used[k] = true;
          ++hits;
          break;
        }
      }
    }
  }
  return hits / denom;
}

ResultTable random_table(std::mt19937_64& rng, size_t cols, bool ordered) {
  std::uniform_int_distribution<int> rows(0, 12), kind(0, 3), small(0, 4);
  ResultTable t;
  for (size_t c = 0; c < cols; ++c) t.columns.push_back("c" + std::to_string(c));
  t.ordered = ordered;
  const int n = rows(rng);
  for (int r = 0; r < n; ++r) {
    std::vector<Cell> row;
    for (size_t c = 0; c < cols; ++c) {
      switch (kind(rng)) {
        case 0: row.emplace_back(std::int64_t{small(rng)}); break;
        case 1: row.emplace_back(static_cast<double>(small(rng)) + (small(rng) % 2 ? 0.5 : 0.0)); break;
        case 2: row.emplace_back(std::string(1, static_cast<char>('a' + small(rng)))); break;
        default: row.emplace_back(std::monostate{});
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Outcome sql_scorer() {
  Outcome o;
  const fs::path root = testutil::make_temp_dir("rb-accept-sql");
  const fs::path db_path = testutil::build_sql_fixture(root);
  const Database db = Database::open_read_only(db_path);
  const std::string digest = file_digest(db_path);

  DatasetManifest manifest;
  manifest.task = TaskKind::kTextToSql;
  manifest.path = root;
  const auto samples = load_dataset(manifest);
  int perfect = 0;
  for (const auto& s : samples) {
    const auto v = score_sql(s.gold, s.gold, db);
    if (v.score == 1.0 && v.pass) ++perfect;
    else o.notes.push_back("q vs q below 1 for " + s.id);
  }
  o.check(samples.size() == 50 && perfect == 50, "self-match " + std::to_string(perfect) + "/50");

  // Unordered gold: a permutation of the rows still matches.
  const auto unordered = score_sql("SELECT name, age FROM singer ORDER BY age DESC",
                                   "SELECT name, age FROM singer", db);
  o.check(unordered.score == 1.0, "unordered permutation scored " + fmt(unordered.score));
  // Ordered gold: the reversed order does not.
  const auto ordered = score_sql("SELECT name, age FROM singer ORDER BY age DESC",
                                 "SELECT name, age FROM singer ORDER BY age ASC", db);
  o.check(ordered.score < 1.0, "ordered permutation scored " + fmt(ordered.score));
  ResultTable gold = execute_sql("SELECT name, age FROM singer", db);
  ResultTable shuffled = gold;
  std::mt19937_64 rng(5);
  std::shuffle(shuffled.rows.begin(), shuffled.rows.end(), rng);
  o.check(tables_match(shuffled, gold), "table-level permutation does not match");

  int agree = 0;
  for (int i = 0; i < 100; ++i) {
    std::uniform_int_distribution<size_t> cols(1, 3);
    const size_t gc = cols(rng);
    const size_t pc = i % 4 == 0 ? cols(rng) : gc;
    const ResultTable g = random_table(rng, gc, i % 2 == 1);
    const ResultTable p = random_table(rng, pc, false);
    const double got = partial_credit(p, g), want = oracle_partial_credit(p, g);
    if (std::abs(got - want) <= kPartialCreditTolerance) ++agree;
    else o.notes.push_back("partial credit " + fmt(got, 9) + " vs oracle " + fmt(want, 9));
  }
  o.check(agree == 100, "partial credit agrees on " + std::to_string(agree) + "/100");
  o.check(file_digest(db_path) == digest, "database file changed");
  fs::remove_all(root);
  o.notes.insert(o.notes.begin(), std::to_string(perfect) + "/50 self-matches, partial credit " +
                                      std::to_string(agree) + "/100 vs oracle");
  return o;
}

// ---------------------------------------------------------------------------

double reference_welch_p(const std::vector<double>& x, const std::vector<double>& y) {
  auto moments = [](const std::vector<double>& v) {
    double mean = 0;
    for (double a : v) mean += a;
    mean /= v.size();
    double ss = 0;
    for (double a : v) ss += (a - mean) * (a - mean);
    return std::pair{mean, ss / (v.size() - 1)};
  };
  const auto [mx, vx] = moments(x);
  const auto [my, vy] = moments(y);
  const double sx = vx / x.size(), sy = vy / y.size();
  const double t = (mx - my) / std::sqrt(sx + sy);
  const double df = (sx + sy) * (sx + sy) /
                    (sx * sx / (x.size() - 1) + sy * sy / (y.size() - 1));
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

Outcome statistics() {
  Outcome o;
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> n(3, 40);
  std::normal_distribution<double> noise(0.0, 1.0);
  double worst = 0;
  for (int c = 0; c < 20; ++c) {
    std::vector<double> x(n(rng)), y(n(rng));
    const double shift = 0.1 * c, scale = 0.5 + 0.1 * (c % 7);
    for (auto& v : x) v = 0.6 + 0.05 * noise(rng);
    for (auto& v : y) v = 0.6 + shift * 0.05 + scale * 0.05 * noise(rng);
    const double d = std::abs(welch_t_test(x, y).p - reference_welch_p(x, y));
    worst = std::max(worst, d);
  }
  o.check(worst <= kWelchTolerance, "Welch max |dp| " + std::to_string(worst));

  const ScoreMatrix identical = {{0.2, 0.2, 0.2}, {0.7, 0.7, 0.7}, {0.5, 0.5, 0.5}, {0.9, 0.9, 0.9}};
  const auto fr = friedman_test(identical);
  o.check(fr.p == 1.0, "Friedman p on identical columns " + fmt(fr.p));

  const double q = qtukey(0.95, 3);
  o.check(std::abs(q - kTukeyReference) / kTukeyReference <= kTukeyRelativeTolerance,
          "q(0.05, 3, inf) = " + fmt(q));

  double min_p = 1.0;
  const auto nem = nemenyi_posthoc(identical);
  for (size_t i = 0; i < nem.size(); ++i) {
    for (size_t j = 0; j < nem.size(); ++j) {
      if (i != j) min_p = std::min(min_p, nem[i][j]);
    }
  }
  o.check(min_p >= kNemenyiIdenticalMin, "Nemenyi min p " + fmt(min_p));
  std::ostringstream note;
  note << "Welch max |dp| " << worst << ", Friedman p " << fr.p << ", q " << fmt(q, 3)
       << ", Nemenyi min p " << fmt(min_p);
  o.notes.insert(o.notes.begin(), note.str());
  return o;
}

// ---------------------------------------------------------------------------

Outcome caching() {
  Outcome o;
  const Money input = Money::parse("0.003");
  PriceEntry price{input, Money::parse("0.015"), rate_from_ratio(input, "0.10"),
                   rate_from_ratio(input, "1.25")};
  double worst_final = 1.0;
  for (std::int64_t addition : {50, 100, 200}) {
    for (std::int64_t output : {50, 100, 200}) {
      double prev = -1e9;
      for (int r = 0; r <= 3; ++r) {
        const double s =
            caching_cost_model(synthetic_reflection_usage(1000, addition, output, r), price).savings_fraction;
        if (s < prev) o.check(false, "not monotone at +" + std::to_string(addition) + "/" + std::to_string(output));
        prev = s;
      }
      worst_final = std::min(worst_final, prev);
    }
  }
  o.check(worst_final >= kCachingMinSavings, "3-round savings " + fmt(worst_final));

  const PriceEntry flat{input, Money::parse("0.015"), input, input};
  double worst_flat = 0;
  for (int r = 0; r <= 3; ++r) {
    worst_flat = std::max(worst_flat, std::abs(caching_cost_model(synthetic_reflection_usage(1000, 100, 200, r), flat)
                                                   .savings_fraction));
  }
  o.check(worst_flat <= kCachingDegenerateTolerance, "flat pricing savings " + std::to_string(worst_flat));
  o.notes.insert(o.notes.begin(), "min 3-round savings " + fmt(worst_final, 3) + ", flat pricing " +
                                      std::to_string(worst_flat));
  return o;
}

// ---------------------------------------------------------------------------

std::string without_header(const std::string& text) {
  const auto nl = text.find('\n');
  return nl == std::string::npos ? "" : text.substr(nl + 1);
}

Outcome determinism_and_meteor() {
  Outcome o;
  const fs::path dir = testutil::make_temp_dir("rb-accept-run");
  std::string data;
  for (int i = 0; i < 100; ++i) {
    data += json{{"id", "p" + std::to_string(1000 + i)},
                 {"problem", "What is " + std::to_string(i) + " + " + std::to_string(i % 3) + "?"},
                 {"answer", std::to_string(i % 4)}}
                .dump() +
            "\n";
  }
  testutil::write_file(dir / "problems.jsonl", data);
  const json providers = json::parse(R"({
    "max_in_flight": 8,
    "models": {
      "model": {"kind": "mock", "script": {"seed": 11,
        "default_replies": [["<answer>0</answer>", "<answer>1</answer>", "<answer>2</answer>"],
                            ["<answer>1</answer>", "<answer>3</answer>"]]}},
      "judge": {"kind": "mock", "script": {"default_replies": [["CORRECT", "INCORRECT: recheck"]]}}
    }})");
  const json strategies = json::parse(R"([
    {"model_id": "model", "reflection_rounds": 0},
    {"model_id": "model", "reflection_rounds": 1, "feedback": "llm_judge", "judge_model_id": "judge"},
    {"model_id": "model", "reflection_rounds": 3, "caching_enabled": true}])");
  std::vector<std::string> traces;
  double slowest = 0;
  for (const char* out : {"a", "b"}) {
    const json config = {{"dataset", {{"task", "math"}, {"path", "problems.jsonl"}}},
                         {"providers", providers},
                         {"output_dir", out},
                         {"seed", 42},
                         {"concurrency", 4},
                         {"strategies", strategies}};
    testutil::write_file(dir / (std::string(out) + ".json"), config.dump());
    std::ostringstream log, err;
    const auto t0 = std::chrono::steady_clock::now();
    const int code = cmd_run(dir / (std::string(out) + ".json"), false, log, err);
    slowest = std::max(slowest, seconds_since(t0));
    o.check(code == kExitOk, std::string("run ") + out + " failed: " + err.str());
    traces.push_back(testutil::read_file(dir / out / "traces.jsonl"));
  }
  const std::string body = without_header(traces[0]);
  const size_t lines = static_cast<size_t>(std::count(body.begin(), body.end(), '\n'));
  o.check(lines == 300, "expected 300 traces, got " + std::to_string(lines));
  o.check(body == without_header(traces[1]), "trace files differ");
  o.check(slowest < kRunRuntimeS, "run took " + fmt(slowest) + " s");
  fs::remove_all(dir);

  // METEOR against the formula applied to a hand-derived alignment. Words
  // are unique within a sentence, so the exact alignment is unambiguous.
  const std::vector<std::string> vocab = {
      "river", "stone", "cloud", "window", "garden", "silver", "morning", "paper", "violin",
      "harbor", "lantern", "meadow", "pencil", "orange", "thunder", "bridge", "candle", "forest",
      "island", "mirror", "planet", "rocket", "saddle", "tunnel", "velvet", "wagon", "yellow",
      "zebra", "anchor", "basket"};
  MeteorOptions exact_only;
  exact_only.use_stem_stage = false;
  std::mt19937_64 rng(2025);
  double worst = 0;
  for (int c = 0; c < 50; ++c) {
    std::vector<std::string> pool = vocab;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::uniform_int_distribution<size_t> len(3, 12);
    const size_t rlen = len(rng);
    std::vector<std::string> ref(pool.begin(), pool.begin() + rlen);
    std::vector<std::string> cand;
    for (const auto& w : ref) {
      if (rng() % 4 != 0) cand.push_back(w);
    }
    if (rng() % 3 == 0 && cand.size() > 2) std::swap(cand[0], cand[cand.size() - 1]);
    if (rng() % 2 == 0) cand.insert(cand.begin() + static_cast<long>(rng() % (cand.size() + 1)), pool[rlen]);
    if (c == 0) cand = ref;

    std::vector<long> pos;
    size_t matches = 0, chunks = 0;
    for (const auto& w : cand) {
      const auto it = std::find(ref.begin(), ref.end(), w);
      pos.push_back(it == ref.end() ? -1 : it - ref.begin());
    }
    for (size_t i = 0; i < pos.size(); ++i) {
      if (pos[i] < 0) continue;
      ++matches;
      if (i == 0 || pos[i - 1] < 0 || pos[i - 1] + 1 != pos[i]) ++chunks;
    }
    double want = 0;
    if (matches > 0) {
      const double p = static_cast<double>(matches) / cand.size();
      const double r = static_cast<double>(matches) / ref.size();
      const double fmean = 10 * p * r / (r + 9 * p);
      want = fmean * (1 - 0.5 * std::pow(static_cast<double>(chunks) / matches, 3));
    }
    auto join = [](const std::vector<std::string>& ws) {
      std::string s;
      for (const auto& w : ws) s += (s.empty() ? "" : " ") + w;
      return s;
    };
    worst = std::max(worst, std::abs(meteor(join(cand), join(ref), exact_only) - want));
  }
  o.check(worst <= kMeteorTolerance, "METEOR max deviation " + std::to_string(worst));
  const double identical = meteor("one two three four five six seven eight nine ten",
                                  "one two three four five six seven eight nine ten");
  o.check(std::abs(identical - 0.9995) <= kMeteorTolerance, "identical sentence " + fmt(identical, 6));

  std::ostringstream note;
  note << lines << " traces identical across runs, slowest run " << fmt(slowest, 2) << " s, METEOR max |d| "
       << worst << ", identical 10-token " << fmt(identical, 4);
  o.notes.insert(o.notes.begin(), note.str());
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"relative gains", relative_gains},
      {"pareto frontier", frontier},
      {"transition accounting", transition_fixture},
      {"math equivalence suite", math_suite},
      {"sql scoring", sql_scorer},
      {"statistics", statistics},
      {"caching cost model", caching},
      {"determinism and meteor", determinism_and_meteor},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first;
    if (!o.notes.empty()) std::cout << ": " << o.notes.front();
    std::cout << '\n';
    for (size_t k = 1; k < o.notes.size(); ++k) std::cout << "        " << o.notes[k] << '\n';
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}

#include "reflectbench/analysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "reflectbench/core/errors.hpp"

namespace reflectbench {

namespace {

constexpr double kEps = 1e-15;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 10000;

double log_gamma(double x) {
  // lgamma_r avoids the global signgam write of plain lgamma.
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

// Continued fraction for I_x(a, b), modified Lentz.
double beta_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_beta(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front =
      log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_fraction(x, a, b) / a;
  return 1.0 - front * beta_fraction(1.0 - x, b, a) / b;
}

double regularized_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) {
    double sum = 1.0 / a;
    double term = sum;
    for (int n = 1; n <= kMaxIterations; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  return 1.0 - regularized_gamma_q(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - regularized_gamma_p(a, x);
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double student_t_two_sided_p(double t, double df) {
  if (!std::isfinite(t)) return 0.0;
  return regularized_beta(df / (df + t * t), df / 2.0, 0.5);
}

double chi_square_sf(double x, double df) { return regularized_gamma_q(df / 2.0, x / 2.0); }

double ptukey(double q, int k) {
  if (q <= 0.0) return 0.0;
  if (k < 2) throw Error(ErrorCode::kValidation, "studentized range needs k >= 2");
  // k * integral of phi(z) [Phi(z) - Phi(z - q)]^(k-1) dz. The integrand is
  // negligible outside [-9, 9 + q].
  const double lo = -9.0;
  const double hi = 9.0 + q;
  const int n = 4000;  // even
  const double h = (hi - lo) / n;
  const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * M_PI);
  auto f = [&](double z) {
    const double inner = normal_cdf(z) - normal_cdf(z - q);
    return inv_sqrt_2pi * std::exp(-0.5 * z * z) * std::pow(inner, k - 1);
  };
  double sum = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) sum += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return std::clamp(k * sum * h / 3.0, 0.0, 1.0);
}

double qtukey(double p, int k) {
  double lo = 0.0;
  double hi = 1.0;
  while (ptukey(hi, k) < p) hi *= 2.0;
  for (int i = 0; i < 100 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ptukey(mid, k) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace {

void mean_var(std::span<const double> v, double& mean, double& var) {
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double ss = 0.0;
  for (const double x : v) ss += (x - mean) * (x - mean);
  var = ss / static_cast<double>(v.size() - 1);
}

}  // namespace

WelchResult welch_t_test(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) {
    throw Error(ErrorCode::kEmptyInput, "Welch test needs at least two values per sample");
  }
  double mx, vx, my, vy;
  mean_var(x, mx, vx);
  mean_var(y, my, vy);
  if (vx == 0.0 && vy == 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "both samples have zero variance");
  }
  const double sx = vx / static_cast<double>(x.size());
  const double sy = vy / static_cast<double>(y.size());
  WelchResult r;
  r.t = (mx - my) / std::sqrt(sx + sy);
  r.df = (sx + sy) * (sx + sy) /
         (sx * sx / static_cast<double>(x.size() - 1) + sy * sy / static_cast<double>(y.size() - 1));
  r.p = student_t_two_sided_p(r.t, r.df);
  return r;
}

std::vector<double> average_ranks(std::span<const double> row) {
  std::vector<size_t> order(row.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return row[a] < row[b]; });
  std::vector<double> ranks(row.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && row[order[j + 1]] == row[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

void check_matrix(const ScoreMatrix& scores) {
  if (scores.size() < 2) throw Error(ErrorCode::kEmptyInput, "need at least two rows");
  const size_t k = scores.front().size();
  if (k < 3) throw Error(ErrorCode::kEmptyInput, "need at least three columns");
  bool all_same = true;
  for (size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].size() != k) {
      throw Error(ErrorCode::kRaggedInput, "row " + std::to_string(i) + " has " +
                                               std::to_string(scores[i].size()) + " columns");
    }
    for (const double v : scores[i]) all_same = all_same && v == scores[0][0];
  }
  if (all_same) throw Error(ErrorCode::kDegenerateInput, "every entry is identical");
}

}  // namespace

FriedmanResult friedman_test(const ScoreMatrix& scores) {
  check_matrix(scores);
  const auto n = static_cast<double>(scores.size());
  const size_t k = scores.front().size();
  const auto kd = static_cast<double>(k);

  std::vector<double> rank_sums(k, 0.0);
  double tie_sum = 0.0;
  for (const auto& row : scores) {
    const auto ranks = average_ranks(row);
    for (size_t j = 0; j < k; ++j) rank_sums[j] += ranks[j];
    std::vector<double> sorted(row);
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size();) {
      size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const auto t = static_cast<double>(j - i);
      tie_sum += t * t * t - t;
      i = j;
    }
  }

  FriedmanResult r;
  r.df = kd - 1.0;
  for (const double s : rank_sums) r.mean_ranks.push_back(s / n);
  const double expected = n * (kd + 1.0) / 2.0;
  double ss = 0.0;
  for (const double s : rank_sums) ss += (s - expected) * (s - expected);
  if (ss == 0.0) {
    r.chi2 = 0.0;
    r.p = 1.0;
    return r;
  }
  const double correction = 1.0 - tie_sum / (n * kd * (kd * kd - 1.0));
  r.chi2 = 12.0 * ss / (n * kd * (kd + 1.0)) / correction;
  r.p = chi_square_sf(r.chi2, r.df);
  return r;
}

std::vector<std::vector<double>> nemenyi_posthoc(const ScoreMatrix& scores) {
  const FriedmanResult f = friedman_test(scores);
  const size_t k = f.mean_ranks.size();
  const auto n = static_cast<double>(scores.size());
  const double se = std::sqrt(static_cast<double>(k * (k + 1)) / (6.0 * n));
  std::vector<std::vector<double>> p(k, std::vector<double>(k, 1.0));
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      const double q = std::sqrt(2.0) * std::fabs(f.mean_ranks[i] - f.mean_ranks[j]) / se;
      const double v = std::clamp(1.0 - ptukey(q, static_cast<int>(k)), 0.0, 1.0);
      p[i][j] = v;
      p[j][i] = v;
    }
  }
  return p;
}

}  // namespace reflectbench

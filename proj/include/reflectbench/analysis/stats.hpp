#pragma once

#include <span>
#include <vector>

namespace reflectbench {

// Regularized incomplete beta I_x(a, b).
double regularized_beta(double x, double a, double b);
// Regularized lower and upper incomplete gamma P(a, x), Q(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

double normal_cdf(double z);
// Two-sided P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);
// P(X >= x) for chi-square with `df` degrees of freedom.
double chi_square_sf(double x, double df);

// CDF of the studentized range for `k` groups and infinite degrees of
// freedom, by fixed-grid Simpson integration.
double ptukey(double q, int k);
// Inverse of ptukey by bisection.
double qtukey(double p, int k);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

// Two-sided Welch t-test. Needs at least two values per side; throws
// Error(kDegenerateInput) when both samples have zero variance.
WelchResult welch_t_test(std::span<const double> x, std::span<const double> y);

// rows x columns; every row must have the same length.
using ScoreMatrix = std::vector<std::vector<double>>;

// Average ranks within each row, ties sharing the mean rank.
std::vector<double> average_ranks(std::span<const double> row);

struct FriedmanResult {
  double chi2 = 0.0;
  double df = 0.0;
  double p = 1.0;
  // Mean rank of each column.
  std::vector<double> mean_ranks;
};

// Friedman test over rows (blocks) and columns (configurations), with the
// tie correction. Needs at least 3 columns and 2 rows. Throws
// Error(kDegenerateInput) when every entry is identical.
FriedmanResult friedman_test(const ScoreMatrix& scores);

// Pairwise p-values from mean-rank differences against the studentized
// range. Symmetric with a unit diagonal.
std::vector<std::vector<double>> nemenyi_posthoc(const ScoreMatrix& scores);

}  // namespace reflectbench

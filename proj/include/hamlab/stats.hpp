#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace hamlab {

// Space/time constants for the first-class (lambda) and second-class
// (rho, lambda) results. rho-dependent fields are NaN when rho is not given.
struct TheoremConstants {
  double lambda = 1.0;
  double rho = 0.0;
  double mu1 = 0.0;
  double sigma1_sq = 0.0;
  double mu2 = 0.0;
  double sigma2_sq = 0.0;
  double eta = 0.0;

  static TheoremConstants make(double lambda);
  static TheoremConstants make(double lambda, double rho);
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

// |a - target| <= k se
bool within(const Estimate& e, double target, double k);
// [a - k se_a, a + k se_a] and [b - k se_b, b + k se_b] intersect
bool overlap(const Estimate& a, const Estimate& b, double k);

struct SummaryStats {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double mean_se = 0.0;
  double variance_se = 0.0;  // sqrt((m4 - s^4) / n), fourth central moment plug-in
  std::pair<double, double> variance_ci;  // variance -/+ k variance_se

  Estimate mean_estimate() const { return {mean, mean_se}; }
  Estimate variance_estimate() const { return {variance, variance_se}; }
};

SummaryStats summarize(std::span<const double> xs, double k = 3.0);

// Binomial proportion with its standard error.
Estimate proportion(std::span<const double> indicators);
// Covariance of paired samples; the SE comes from the influence function
// (x - mx)(y - my) - cov.
Estimate covariance(std::span<const double> x, std::span<const double> y);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double r_squared = 0.0;
};

// Least squares of log y on log x; needs >= 3 points, all positive.
FitResult loglog_fit(std::span<const double> x, std::span<const double> y);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Survival function of the Kolmogorov distribution, P(K > z).
double kolmogorov_sf(double z);

// One-sample KS against a continuous cdf. p from the asymptotic Kolmogorov
// law with Stephens' small-sample correction; n < 50 throws.
TestResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf);
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Pearson chi-square. Adjacent cells are pooled from the right until every
// expected count is >= min_expected; df = cells - 1.
TestResult chi2_test(std::span<const double> counts, std::span<const double> probs, double min_expected = 5.0);

double normal_cdf(double x);

// P(Pois(a) + 1 > Pois(b)) for independent Poisson variables.
double skellam_tail_oracle(double a, double b);

}  // namespace hamlab

#include "hamlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>

#include "hamlab/errors.hpp"

namespace hamlab {

TheoremConstants TheoremConstants::make(double lambda) {
  if (!(lambda > 0.0)) throw InvalidParameter("lambda must be positive");
  TheoremConstants c;
  c.lambda = lambda;
  c.rho = std::numeric_limits<double>::quiet_NaN();
  c.mu1 = -1.0 / (lambda * lambda);
  c.sigma1_sq = 2.0 / (lambda * lambda * lambda);
  c.mu2 = c.sigma2_sq = c.eta = c.rho;
  return c;
}

TheoremConstants TheoremConstants::make(double lambda, double rho) {
  if (!(rho > 0.0 && rho < lambda)) throw InvalidParameter("need 0 < rho < lambda");
  TheoremConstants c = make(lambda);
  c.rho = rho;
  c.mu2 = 1.0 / (lambda * rho);
  c.sigma2_sq = 2.0 / (lambda * rho * (lambda - rho));
  c.eta = std::sqrt((lambda - rho) / (lambda * rho));
  return c;
}

bool within(const Estimate& e, double target, double k) { return std::abs(e.value - target) <= k * e.se; }

bool overlap(const Estimate& a, const Estimate& b, double k) {
  return a.value - k * a.se <= b.value + k * b.se && b.value - k * b.se <= a.value + k * a.se;
}

SummaryStats summarize(std::span<const double> xs, double k) {
  SummaryStats s;
  s.n = xs.size();
  if (s.n < 2) throw InvalidParameter("need at least two samples");
  const double n = static_cast<double>(s.n);
  s.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d2 = (x - s.mean) * (x - s.mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  s.variance = m2 / (n - 1.0);
  s.mean_se = std::sqrt(s.variance / n);
  const double pop = m2 / n;
  s.variance_se = std::sqrt(std::max(0.0, m4 / n - pop * pop) / n);
  s.variance_ci = {s.variance - k * s.variance_se, s.variance + k * s.variance_se};
  return s;
}

Estimate proportion(std::span<const double> indicators) {
  if (indicators.empty()) throw InvalidParameter("no samples");
  const double n = static_cast<double>(indicators.size());
  const double p = std::accumulate(indicators.begin(), indicators.end(), 0.0) / n;
  return {p, std::sqrt(p * (1.0 - p) / n)};
}

Estimate covariance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidParameter("covariance needs paired samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) c += (x[i] - mx) * (y[i] - my);
  c /= n;
  double v = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = (x[i] - mx) * (y[i] - my) - c;
    v += d * d;
  }
  return {c * n / (n - 1.0), std::sqrt(v / (n - 1.0) / n)};
}

FitResult loglog_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 3) throw InvalidParameter("fit needs at least three points");
  const std::size_t m = x.size();
  std::vector<double> lx(m), ly(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw InvalidParameter("log-log fit needs positive values");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double n = static_cast<double>(m);
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  FitResult f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = ly[i] - f.intercept - f.slope * lx[i];
    rss += r * r;
  }
  f.slope_se = std::sqrt(rss / (n - 2.0) / sxx);
  f.r_squared = syy > 0.0 ? 1.0 - rss / syy : 1.0;
  return f;
}

double kolmogorov_sf(double z) {
  if (z <= 0.0) return 1.0;
  if (z < 0.27) return 1.0;  // series below converges slowly; the sf is 1 to double precision here
  if (z < 1.0) {
    // Jacobi-transformed form, fast for small z
    const double c = std::sqrt(2.0 * M_PI) / z;
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double a = (2.0 * k - 1.0) * M_PI / z;
      cdf += std::exp(-a * a / 8.0);
    }
    return std::clamp(1.0 - c * cdf, 0.0, 1.0);
  }
  double sf = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * z * z);
    sf += (k % 2 ? 2.0 : -2.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(sf, 0.0, 1.0);
}

namespace {

double stephens_p(double d, double n_eff) {
  const double rn = std::sqrt(n_eff);
  return kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

TestResult ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.size() < 50) throw InvalidParameter("KS p-value undefined for fewer than 50 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, stephens_p(d, n)};
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 50 || b.size() < 50) throw InvalidParameter("KS p-value undefined for fewer than 50 samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, stephens_p(d, na * nb / (na + nb))};
}

TestResult chi2_test(std::span<const double> counts, std::span<const double> probs, double min_expected) {
  if (counts.size() != probs.size() || counts.empty()) throw InvalidParameter("counts and probabilities must align");
  const double n = std::accumulate(counts.begin(), counts.end(), 0.0);
  std::vector<double> obs, expd;
  double o = 0.0, e = 0.0;
  for (std::size_t i = counts.size(); i-- > 0;) {
    o += counts[i];
    e += n * probs[i];
    if (e >= min_expected) {
      obs.push_back(o);
      expd.push_back(e);
      o = e = 0.0;
    }
  }
  if (e > 0.0 || o > 0.0) {
    if (expd.empty()) throw InvalidParameter("too few expected counts for a chi-square test");
    obs.back() += o;
    expd.back() += e;
  }
  if (obs.size() < 2) throw InvalidParameter("chi-square test needs at least two cells");
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) stat += (obs[i] - expd[i]) * (obs[i] - expd[i]) / expd[i];
  const double df = static_cast<double>(obs.size() - 1);
  return {stat, boost::math::gamma_q(df / 2.0, stat / 2.0)};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double skellam_tail_oracle(double a, double b) {
  if (!(a >= 0.0 && b >= 0.0)) throw InvalidParameter("Poisson means must be non-negative");
  if (b == 0.0) return 1.0;
  // sum_j P(Pois(a) = j) P(Pois(b) <= j); stop once the Pois(a) tail is
  // negligible relative to the sum (the answer can be tiny when b >> a).
  constexpr double kRel = 1e-15;
  double total = 0.0;
  for (std::int64_t j = 0;; ++j) {
    const double jd = static_cast<double>(j);
    const double log_pmf = a > 0.0 ? jd * std::log(a) - a - std::lgamma(jd + 1.0) : (j == 0 ? 0.0 : -INFINITY);
    total += std::exp(log_pmf) * boost::math::gamma_q(jd + 1.0, b);
    if (jd + 2.0 > a) {
      const double next = std::exp(log_pmf + std::log(a > 0.0 ? a : 0.0) - std::log(jd + 1.0));
      const double tail = next / (1.0 - a / (jd + 2.0));
      if (!(tail > kRel * total) || tail < 1e-300) break;
    }
  }
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace hamlab

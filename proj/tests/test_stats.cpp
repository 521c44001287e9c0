#include <catch_amalgamated.hpp>

#include <cmath>

#include "hamlab/errors.hpp"
#include "hamlab/rng.hpp"
#include "hamlab/stats.hpp"

using namespace hamlab;

namespace {

// P(Pois(b) - Pois(a) <= 0) from the Bessel form of the difference law.
double skellam_bessel(double a, double b) {
  if (a == 0.0) return std::exp(-b);
  double total = 0.0;
  for (int k = 0; k <= 400; ++k)  // S = -k
    total += std::exp(-(a + b)) * std::pow(b / a, -k / 2.0) * std::cyl_bessel_i(static_cast<double>(k), 2.0 * std::sqrt(a * b));
  return total;
}

std::function<double(double)> uniform_cdf() {
  return [](double x) { return std::clamp(x, 0.0, 1.0); };
}

}  // namespace

TEST_CASE("tail of a Poisson difference matches the Bessel form") {
  for (double a : {0.0, 0.3, 2.0, 7.5, 15.0})
    for (double b : {0.5, 3.0, 8.0, 20.0}) {
      INFO("a=" << a << " b=" << b);
      CHECK(skellam_tail_oracle(a, b) == Catch::Approx(skellam_bessel(a, b)).epsilon(1e-9).margin(1e-14));
    }
  CHECK(skellam_tail_oracle(4.0, 0.0) == 1.0);
  REQUIRE_THROWS_AS(skellam_tail_oracle(-1.0, 1.0), InvalidParameter);
}

TEST_CASE("tail of a Poisson difference against simulation") {
  Rng r(3);
  auto pois = [&](double m) {
    std::int64_t k = 0;
    for (double s = r.exponential(1.0); s < m; s += r.exponential(1.0)) ++k;
    return k;
  };
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += pois(6.0) + 1 > pois(8.0);
  const double p = skellam_tail_oracle(6.0, 8.0);
  CHECK(std::abs(hits / static_cast<double>(n) - p) < 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST_CASE("Kolmogorov survival function") {
  CHECK(kolmogorov_sf(1.3581) == Catch::Approx(0.05).margin(2e-4));
  CHECK(kolmogorov_sf(1.6276) == Catch::Approx(0.01).margin(1e-4));
  CHECK(kolmogorov_sf(0.5) == Catch::Approx(0.96394).margin(1e-4));
  CHECK(kolmogorov_sf(0.8) == Catch::Approx(0.54414).margin(1e-4));
  CHECK(kolmogorov_sf(0.0) == 1.0);
}

TEST_CASE("KS p-values are calibrated and have power") {
  int small = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Rng r = RngStream(4).child("ks", trial).rng();
    std::vector<double> xs(10000);
    for (double& x : xs) x = r.uniform();
    small += ks_one_sample(xs, uniform_cdf()).p_value < 0.01;
  }
  CHECK(small <= 15);

  Rng r(5);
  std::vector<double> xs(10000);
  for (double& x : xs) x = r.uniform();
  auto shifted = ks_one_sample(xs, [](double x) { return std::clamp(x - 0.05, 0.0, 1.0); });
  CHECK(shifted.p_value < 1e-6);

  std::vector<double> ten(10, 0.5);
  REQUIRE_THROWS_AS(ks_one_sample(ten, uniform_cdf()), InvalidParameter);
}

TEST_CASE("two-sample KS") {
  Rng r(6);
  std::vector<double> a(3000), b(3000), c(3000);
  for (double& x : a) x = r.exponential(1.0);
  for (double& x : b) x = r.exponential(1.0);
  for (double& x : c) x = r.exponential(1.3);
  CHECK(ks_two_sample(a, b).p_value > 1e-3);
  CHECK(ks_two_sample(a, c).p_value < 1e-6);
}

TEST_CASE("chi-square with pooling") {
  Rng r(7);
  std::vector<double> probs{0.5, 0.3, 0.15, 0.04, 0.01};
  std::vector<double> counts(5, 0.0);
  for (int i = 0; i < 5000; ++i) {
    const double u = r.uniform();
    double acc = 0.0;
    for (std::size_t k = 0; k < 5; ++k) {
      acc += probs[k];
      if (u < acc || k == 4) {
        counts[k] += 1;
        break;
      }
    }
  }
  CHECK(chi2_test(counts, probs).p_value > 1e-3);
  std::vector<double> wrong{0.3, 0.3, 0.3, 0.05, 0.05};
  CHECK(chi2_test(counts, wrong).p_value < 1e-6);
}

TEST_CASE("summaries, proportions and covariance") {
  std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  auto s = summarize(xs);
  CHECK(s.n == 4);
  CHECK(s.mean == 2.5);
  CHECK(s.variance == Catch::Approx(5.0 / 3.0));
  CHECK(s.mean_se == Catch::Approx(std::sqrt(5.0 / 3.0 / 4.0)));

  std::vector<double> ind{1, 0, 0, 1, 1, 0, 0, 0};
  auto p = proportion(ind);
  CHECK(p.value == 0.375);
  CHECK(p.se == Catch::Approx(std::sqrt(0.375 * 0.625 / 8)));

  std::vector<double> y{2.0, 4.0, 6.0, 8.0};
  CHECK(covariance(xs, y).value == Catch::Approx(10.0 / 3.0));

  CHECK(within({1.0, 0.1}, 1.25, 3.0));
  CHECK_FALSE(within({1.0, 0.1}, 1.35, 3.0));
  CHECK(overlap({1.0, 0.1}, {1.5, 0.1}, 3.0));
  CHECK_FALSE(overlap({1.0, 0.05}, {1.5, 0.05}, 3.0));
}

TEST_CASE("log-log fit recovers a power law") {
  std::vector<double> x{50, 100, 200, 400, 800}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 2.0 / 3.0));
  auto f = loglog_fit(x, y);
  CHECK(f.slope == Catch::Approx(2.0 / 3.0));
  CHECK(f.intercept == Catch::Approx(std::log(3.0)));
  CHECK(f.r_squared == Catch::Approx(1.0));
  std::vector<double> two{1.0, 2.0};
  REQUIRE_THROWS_AS(loglog_fit(two, two), InvalidParameter);
}

TEST_CASE("model constants") {
  auto c = TheoremConstants::make(2.0, 1.0);
  CHECK(c.mu1 == -0.25);
  CHECK(c.sigma1_sq == 0.25);
  CHECK(c.mu2 == 0.5);
  CHECK(c.sigma2_sq == 1.0);
  // second-class variance at t = 20 is 2t/(lambda rho (lambda - rho)) = 20
  CHECK(c.sigma2_sq * 20.0 == 20.0);
  REQUIRE_THROWS_AS(TheoremConstants::make(1.0, 1.0), InvalidParameter);
}

TEST_CASE("normal cdf") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == Catch::Approx(0.975));
}

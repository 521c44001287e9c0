#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hamlab/errors.hpp"
#include "hamlab/point_process.hpp"
#include "hamlab/stats.hpp"

using namespace hamlab;

TEST_CASE("line counts are Poisson(rate * length)") {
  const double rate = 1.7, len = 12.0;
  std::vector<double> counts;
  for (int i = 0; i < 4000; ++i)
    counts.push_back(static_cast<double>(sample_poisson_line(rate, {-5.0, 7.0}, RngStream(3).child("r", i)).positions.size()));
  auto s = summarize(counts);
  CHECK(std::abs(s.mean - rate * len) < 4.0 * s.mean_se);
  CHECK(std::abs(s.variance - rate * len) < 4.0 * s.variance_se);
}

TEST_CASE("line sample is sorted, inside the window, and gaps are exponential") {
  auto l = sample_poisson_line(2.0, {0.0, 2000.0}, RngStream(5));
  REQUIRE(std::is_sorted(l.positions.begin(), l.positions.end()));
  REQUIRE(std::adjacent_find(l.positions.begin(), l.positions.end()) == l.positions.end());
  REQUIRE(l.positions.front() >= 0.0);
  REQUIRE(l.positions.back() <= 2000.0);
  std::vector<double> gaps;
  for (std::size_t i = 1; i < l.positions.size(); ++i) gaps.push_back(l.positions[i] - l.positions[i - 1]);
  auto ks = ks_one_sample(gaps, [](double g) { return g <= 0.0 ? 0.0 : 1.0 - std::exp(-2.0 * g); });
  CHECK(ks.p_value > 1e-4);
}

TEST_CASE("planar sample is time-ordered with unit intensity") {
  Rect w{{-3.0, 5.0}, 4.0};
  std::vector<double> counts;
  for (int i = 0; i < 3000; ++i) {
    auto p = sample_planar_unit_poisson(w, RngStream(11).child("p", i));
    REQUIRE(std::is_sorted(p.points.begin(), p.points.end(),
                           [](const SpaceTimePoint& a, const SpaceTimePoint& b) { return a.t < b.t; }));
    for (const auto& q : p.points) REQUIRE((w.x.contains(q.x) && q.t > 0.0 && q.t <= w.t_max));
    counts.push_back(static_cast<double>(p.points.size()));
  }
  auto s = summarize(counts);
  CHECK(std::abs(s.mean - w.area()) < 4.0 * s.mean_se);
}

TEST_CASE("tiled samples restrict exactly") {
  const RngStream s(17);
  const Interval big{-100.0, 60.0}, small{-37.5, 12.25};
  auto wide = sample_poisson_line_tiled(1.3, big, s);
  auto narrow = sample_poisson_line_tiled(1.3, small, s);
  REQUIRE(restrict_line(wide, small).positions == narrow.positions);

  auto pw = sample_planar_tiled(Rect{big, 3.0}, s);
  auto pn = sample_planar_tiled(Rect{small, 3.0}, s);
  REQUIRE(restrict_planar(pw, Rect{small, 3.0}).points == pn.points);
}

TEST_CASE("thinning splits the points exactly") {
  auto l = sample_poisson_line(3.0, {0.0, 500.0}, RngStream(1));
  auto [kept, removed] = thin_split(l, 0.25, RngStream(2));
  std::vector<double> both;
  std::merge(kept.positions.begin(), kept.positions.end(), removed.positions.begin(), removed.positions.end(),
             std::back_inserter(both));
  REQUIRE(both == l.positions);
  CHECK(kept.rate == Catch::Approx(0.75));
  CHECK(removed.rate == Catch::Approx(2.25));
  CHECK(std::abs(static_cast<double>(kept.positions.size()) - 0.25 * static_cast<double>(l.positions.size())) <
        4.0 * std::sqrt(0.1875 * static_cast<double>(l.positions.size())));
  REQUIRE_THROWS_AS(thin_split(l, 1.5, RngStream(2)), InvalidParameter);
}

TEST_CASE("extension keeps existing points and adds only outside them") {
  Rect a{{0.0, 10.0}, 2.0}, b{{-5.0, 10.0}, 3.0};
  auto p = sample_planar_unit_poisson(a, RngStream(4));
  auto q = extend_planar(p, b, RngStream(5));
  REQUIRE(restrict_planar(q, a).points == p.points);
  REQUIRE(q.window == b);
  REQUIRE_THROWS_AS(extend_planar(q, a, RngStream(5)), InvalidParameter);
}

TEST_CASE("space sort is a permutation ordered by x") {
  auto p = sample_planar_unit_poisson(Rect{{-20.0, 20.0}, 5.0}, RngStream(8));
  auto s = sorted_by_space(p.points, p.window.x);
  REQUIRE(s.size() == p.points.size());
  REQUIRE(std::is_sorted(s.begin(), s.end(), [](auto& a, auto& b) { return a.x < b.x; }));
}

TEST_CASE("degenerate windows and rates are rejected") {
  REQUIRE_THROWS_AS(sample_poisson_line(1.0, {2.0, 2.0}, RngStream(1)), InvalidParameter);
  REQUIRE_THROWS_AS(sample_planar_unit_poisson(Rect{{0.0, 5.0}, 0.0}, RngStream(1)), InvalidParameter);
  REQUIRE_THROWS_AS(sample_poisson_line(-1.0, {0.0, 1.0}, RngStream(1)), InvalidParameter);
}

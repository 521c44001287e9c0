#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include "hamlab/dynamics.hpp"
#include "hamlab/errors.hpp"
#include "hamlab/lpp.hpp"
#include "hamlab/validate.hpp"

using namespace hamlab;

namespace {

struct Sample {
  ParticleConfig init;
  PlanarPointSet epochs;
};

Sample draw(const RngStream& s, double lam, Interval w, double t) {
  return {ParticleConfig::from_line(sample_poisson_line(lam, w, s.child("line"))),
          sample_planar_unit_poisson(Rect{w, t}, s.child("epochs"))};
}

bool subset(const std::vector<double>& a, const std::vector<double>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

TEST_CASE("epochs pull the nearest particle on the right, or spawn") {
  auto c = ParticleConfig::from_positions({1.0, 2.0, 3.0}, {0.0, 5.0});
  PlanarPointSet e{{{1.5, 0.1}, {4.0, 0.2}, {0.5, 0.3}}, Rect{{0.0, 5.0}, 1.0}};
  auto [state, log] = evolve(c, e, 1.0);
  CHECK(state.config.positions == std::vector<double>{0.5, 1.5, 3.0, 4.0});
  REQUIRE(log.size() == 3);
  CHECK(log[0] == EventRecord{0.1, 1.5, 1, false, 2.0, 1.5});
  CHECK(log[1].spawned);
  CHECK(log[1].from == kInf);
  CHECK(log[1].id == 3);
  CHECK(log[2] == EventRecord{0.3, 0.5, 0, false, 1.0, 0.5});
  // window far too short for any certificate
  CHECK(state.contamination_frontier == kInf);

  auto half = evolve(c, e, 0.25).first;
  CHECK(half.config.positions == std::vector<double>{1.0, 1.5, 3.0, 4.0});
}

TEST_CASE("event log replays to the evolved state at every time") {
  for (int i = 0; i < 100; ++i) {
    auto s = draw(RngStream(61, {{"replay", i}}), 1.2, {-20.0, 15.0}, 3.0);
    auto [state, log] = evolve(s.init, s.epochs, 3.0);
    auto rep = replay(s.init, log);
    REQUIRE(rep.positions == state.config.positions);
    REQUIRE(rep.ids == state.config.ids);
    const double mid = 1.3;
    REQUIRE(replay(s.init, log, mid).positions == evolve(s.init, s.epochs, mid).first.config.positions);
  }
  auto s = draw(RngStream(62), 1.0, {-5.0, 5.0}, 1.0);
  auto log = evolve(s.init, s.epochs, 1.0).second;
  if (!log.empty()) {
    log.front().from += 0.25;
    REQUIRE_THROWS_AS(replay(s.init, log), InvalidParameter);
  }
}

TEST_CASE("particle count grows only by spawns and order is preserved") {
  for (int i = 0; i < 100; ++i) {
    auto s = draw(RngStream(63, {{"count", i}}), 0.8, {-10.0, 10.0}, 2.0);
    auto [state, log] = evolve(s.init, s.epochs, 2.0);
    const auto spawns = std::count_if(log.begin(), log.end(), [](const EventRecord& r) { return r.spawned; });
    REQUIRE(state.config.size() == s.init.size() + static_cast<std::size_t>(spawns));
    state.config.validate();
    // ids stay in position order: nobody overtakes
    std::vector<std::int64_t> ids = state.config.ids;
    std::vector<std::int64_t> sorted_ids = ids;
    std::sort(sorted_ids.begin(), sorted_ids.end());
    REQUIRE(ids == sorted_ids);
    // particles only move left
    for (const auto& r : log)
      if (!r.spawned) REQUIRE(r.to < r.from);
  }
}

TEST_CASE("coupled configurations stay ordered") {
  for (int i = 0; i < 100; ++i) {
    RngStream st(64, {{"attr", i}});
    const Interval w{-15.0, 10.0};
    auto big = ParticleConfig::from_line(sample_poisson_line(1.5, w, st.child("big")));
    std::vector<double> kept;
    Rng r = st.child("thin").rng();
    for (double x : big.positions)
      if (r.bernoulli(0.5)) kept.push_back(x);
    auto small = ParticleConfig::from_positions(kept, w);
    auto e = sample_planar_unit_poisson(Rect{w, 2.5}, st.child("epochs"));
    auto a = evolve(small, e, 2.5).first.config.positions;
    auto b = evolve(big, e, 2.5).first.config.positions;
    REQUIRE(subset(a, b));
    REQUIRE(b.size() - a.size() <= big.size() - small.size());
  }
}

TEST_CASE("dynamics flux agrees with the variational flux where certified") {
  std::size_t compared = 0;
  for (int i = 0; i < 150; ++i) {
    RngStream st(65, {{"engine", i}});
    Rng r = st.child("q").rng();
    const double lam = r.uniform(0.8, 2.0), t = r.uniform(0.5, 3.0);
    const Interval w{-certificate_margin(lam, t) - t / (lam * lam), 8.0};
    auto s = draw(st, lam, w, t);
    auto [state, log] = evolve(s.init, s.epochs, t);
    FluxSolver solver(s.init, s.epochs);
    for (int q = 0; q < 6; ++q) {
      const double x = r.uniform(-5.0, 8.0);
      auto v = solver.query(x, t);
      if (!v.certified) continue;
      REQUIRE(flux_from_dynamics(log, s.init, x, t) == v.value);
      ++compared;
    }
  }
  CHECK(compared > 500);
}

TEST_CASE("frontier never moves left as time goes on") {
  for (int i = 0; i < 60; ++i) {
    auto s = draw(RngStream(66, {{"front", i}}), 1.0, {-80.0, 10.0}, 4.0);
    double prev = -kInf;
    for (double t : {0.5, 1.0, 2.0, 3.0, 4.0}) {
      // b0 grows with the horizon, which only pushes the frontier further right
      const double f = evolve(s.init, s.epochs, t).first.contamination_frontier;
      REQUIRE(f >= prev);
      prev = f;
    }
  }
}

TEST_CASE("boundary envelope") {
  BoundaryEnvelope env(1.0, 4.0);
  CHECK(env.b0 == 15);
  CHECK(env.sink_times() == std::vector<double>{1.0, 2.0, 3.0, 4.0});
  CHECK(BoundaryEnvelope(0.0, 4.0).unbounded());
  CHECK(BoundaryEnvelope(0.0, 4.0).sink_times().empty());
  REQUIRE_THROWS_AS(certificate_margin(0.0, 1.0), InvalidParameter);
  CHECK(certificate_margin(1.0, 10.0) > 0.0);
  CHECK(certificate_margin(1.0, 50.0) > certificate_margin(1.0, 10.0));

  // A rate-1/d Poisson flux exceeds b0 + floor(s/d) before t with
  // probability below 1e-5: no exceedance in 2e5 runs expected.
  int exceed = 0;
  const double d = 0.7, t = 6.0;
  BoundaryEnvelope e2(d, t);
  for (int i = 0; i < 200000; ++i) {
    Rng r = RngStream(67).child("env", i).rng();
    std::int64_t n = 0;
    for (double s = r.exponential(1.0 / d); s <= t; s += r.exponential(1.0 / d)) {
      ++n;
      if (n > e2.b0 + static_cast<std::int64_t>(std::floor(s / d))) {
        ++exceed;
        break;
      }
    }
  }
  CHECK(exceed <= 3);
}

TEST_CASE("frontier starts at the b0-th particle") {
  std::vector<double> xs;
  for (int i = 0; i < 30; ++i) xs.push_back(i * 0.5);
  FrontierTracker tr(BoundaryEnvelope(1.0, 4.0), xs.size());
  CHECK(tr.frontier(xs) == xs[14]);
  tr.advance(1.0);  // one sink: G has nothing to lose, K grows
  CHECK(tr.frontier(xs) == xs[15]);
  FrontierTracker few(BoundaryEnvelope(1.0, 4.0), 10);
  CHECK(few.frontier(std::span<const double>(xs).first(10)) == kInf);
}

TEST_CASE("tagged particle, discrepancy and priority runs agree") {
  std::size_t compared = 0;
  for (int i = 0; i < 100; ++i) {
    RngStream st(68, {{"prio", i}});
    const double lam = 1.0, t = 2.0;
    const Interval w{-certificate_margin(lam, t) - 10.0, 10.0};
    auto s = draw(st, lam, w, t);
    std::erase(s.init.positions, 0.0);
    s.init = ParticleConfig::from_positions(s.init.positions, w);
    s.init.left_density = lam;
    auto z = coupled_discrepancy(s.init, s.epochs, t);
    auto second = ParticleConfig::from_positions({0.0}, w, ParticleClass::second);
    second.ids = {1000000};
    second.left_density = 0.0;
    auto p = priority_dynamics(s.init, second, s.epochs, t);
    REQUIRE(p.second.size() == 1);
    if (!z.certified || !p.second[0].certified) continue;
    REQUIRE(z.jumps == p.second[0].jumps);
    // second-class particles only move right
    double prev = 0.0;
    for (auto [time, x] : z.jumps) {
      REQUIRE(x > prev);
      prev = x;
    }
    ++compared;
  }
  CHECK(compared > 50);
}

TEST_CASE("corrupted spawn rule is caught by engine equivalence") {
  set_spawn_fault(true);
  auto bad = run_identity("engine-equivalence", 1, 200);
  set_spawn_fault(false);
  CHECK_FALSE(bad.pass);
  auto good = run_identity("engine-equivalence", 1, 200);
  CHECK(good.pass);
}

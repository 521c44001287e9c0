#include <catch_amalgamated.hpp>

#include <cmath>

#include "hamlab/errors.hpp"
#include "hamlab/particles.hpp"

using namespace hamlab;

namespace {
ParticleConfig cfg(std::vector<double> xs) { return ParticleConfig::from_positions(std::move(xs), {-10.0, 10.0}); }
}  // namespace

TEST_CASE("signed counting function") {
  auto c = cfg({-3.0, -1.0, 0.0, 2.0, 5.0});
  CHECK(profile_count(c, 0.0) == 0);
  CHECK(profile_count(c, 2.0) == 1);
  CHECK(profile_count(c, 10.0) == 2);
  CHECK(profile_count(c, -0.5) == -1);  // the atom at 0 counts for (x, 0]
  CHECK(profile_count(c, -1.0) == -1);
  CHECK(profile_count(c, -1.5) == -2);
  CHECK(profile_count(c, -10.0) == -3);
  REQUIRE_THROWS_AS(profile_count(c, 11.0), UncertifiedRegion);
}

TEST_CASE("class filters and merges") {
  auto a = cfg({-2.0, 1.0, 4.0});
  auto b = cfg({-1.0, 3.0});
  b.classes.assign(2, ParticleClass::second);
  b.ids = {10, 11};
  a.left_density = 1.0;
  b.left_density = 0.5;
  auto u = merge_configs(a, b);
  u.validate();
  CHECK(u.positions == std::vector<double>{-2.0, -1.0, 1.0, 3.0, 4.0});
  CHECK(u.left_density == 1.5);
  CHECK(u.positions_of(ClassFilter::second) == std::vector<double>{-1.0, 3.0});
  CHECK(profile_count(u, 3.5, ClassFilter::first) == 1);
  CHECK(profile_count(u, 3.5, ClassFilter::second) == 1);
  CHECK(select_class(u, ParticleClass::first).positions == a.positions);
  CHECK(std::isnan(select_class(u, ParticleClass::first).left_density));
  CHECK(u.index_of_id(11) == 3);
  CHECK(u.index_of_id(99) == -1);
  REQUIRE_THROWS_AS(merge_configs(a, a), InvalidParameter);
}

TEST_CASE("atoms keep the boundary density") {
  auto a = cfg({-2.0, 1.0});
  a.left_density = 2.0;
  auto b = with_atom(a, 0.0, ParticleClass::second, 100);
  CHECK(b.size() == 3);
  CHECK(b.left_density == 2.0);
  CHECK(b.classes[1] == ParticleClass::second);
  REQUIRE_THROWS_AS(with_atom(a, 20.0, ParticleClass::second, 100), InvalidParameter);
}

TEST_CASE("structural invariants are enforced") {
  ParticleConfig c = cfg({1.0, 2.0});
  c.positions = {2.0, 1.0};
  REQUIRE_THROWS_AS(c.validate(), InvalidParameter);
  c.positions = {1.0, 20.0};
  REQUIRE_THROWS_AS(c.validate(), InvalidParameter);
  c.positions = {1.0, 2.0};
  c.ids = {3, 3};
  REQUIRE_THROWS_AS(c.validate(), InvalidParameter);
}

TEST_CASE("boundary density uses the known value or a low estimate") {
  std::vector<double> xs;
  for (int i = 0; i < 100; ++i) xs.push_back(-10.0 + 0.5 * (i + 1));  // density 2
  CHECK(boundary_density(xs, {-10.0, 50.0}, 3.0) == 3.0);
  const double est = boundary_density(xs, {-10.0, 50.0}, std::nan(""));
  CHECK(est < 2.0);
  CHECK(est > 0.5);
  CHECK(boundary_density({}, {-10.0, 50.0}, std::nan("")) == 0.0);
}

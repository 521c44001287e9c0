#include <catch_amalgamated.hpp>

#include "hamlab/dynamics.hpp"
#include "hamlab/errors.hpp"
#include "hamlab/validate.hpp"

using namespace hamlab;

TEST_CASE("every pathwise identity holds on fresh instances") {
  for (const auto& name : identity_names()) {
    auto o = run_identity(name, 77, 150);
    INFO(name << ": " << o.detail << " at instance " << o.failing_instance);
    CHECK(o.pass);
    CHECK(o.instances == 150);
    CHECK(o.comparisons > 0);
  }
}

TEST_CASE("a failing instance replays from its index") {
  set_spawn_fault(true);
  auto first = run_identity("engine-equivalence", 3, 500);
  REQUIRE_FALSE(first.pass);
  auto again = run_identity("engine-equivalence", 3, 1, static_cast<std::size_t>(first.failing_instance));
  set_spawn_fault(false);
  CHECK_FALSE(again.pass);
  CHECK(again.failing_instance == first.failing_instance);
  CHECK(again.detail == first.detail);
}

TEST_CASE("validation reports are reproducible and carry replay data") {
  ValidationReport a, b;
  a.seed = b.seed = 5;
  for (const auto& n : {"lemma-3-1", "queue-split"}) {
    a.identities.push_back(run_identity(n, 5, 40));
    b.identities.push_back(run_identity(n, 5, 40));
  }
  CHECK(a.to_json() == b.to_json());
  CHECK(a.pass());
  CHECK(a.first_failure() == nullptr);

  set_spawn_fault(true);
  ValidationReport bad;
  bad.seed = 5;
  bad.identities.push_back(run_identity("engine-equivalence", 5, 300));
  set_spawn_fault(false);
  REQUIRE_FALSE(bad.pass());
  auto j = bad.to_json();
  CHECK(j["identities"][0]["replay"]["identity"] == "engine-equivalence");
  CHECK(j["identities"][0]["replay"]["seed"] == 5);
}

TEST_CASE("unknown identity names are rejected") {
  REQUIRE_THROWS_AS(run_identity("no-such-identity", 1, 1), InvalidParameter);
  CHECK(instances_for(ValidationScale::quick) == 1000);
  CHECK(instances_for(ValidationScale::full) == 10000);
}

#include <catch_amalgamated.hpp>

#include <algorithm>

#include "hamlab/errors.hpp"
#include "hamlab/experiments.hpp"
#include "hamlab/replicas.hpp"

using namespace hamlab;

TEST_CASE("replica runner output does not depend on the thread count") {
  auto fn = [](const ReplicaContext& ctx) {
    Rng r = ctx.stream.rng();
    return std::vector<double>{r.uniform(), static_cast<double>(ctx.index)};
  };
  auto one = run_replicas("demo", 500, 9, 1, fn);
  auto four = run_replicas("demo", 500, 9, 4, fn);
  CHECK(one.values == four.values);
  CHECK(one.values[17][1] == 17.0);
}

TEST_CASE("uncertified replicas are retried once on a doubled window") {
  auto fn = [](const ReplicaContext& ctx) {
    if (ctx.index % 10 == 0 && ctx.attempt == 0) throw UncertifiedRegion("too small");
    return std::vector<double>{ctx.window_scale};
  };
  auto run = run_replicas("retry", 50, 1, 2, fn);
  CHECK(run.retries == 5);
  CHECK(run.values[10][0] == 2.0);
  CHECK(run.values[11][0] == 1.0);

  auto always = [](const ReplicaContext&) -> std::vector<double> { throw UncertifiedRegion("never"); };
  REQUIRE_THROWS_AS(run_replicas("fail", 3, 1, 1, always), CertificationFailure);
}

TEST_CASE("every named experiment has a valid default configuration") {
  auto names = experiment_names();
  CHECK(names.size() == 12);
  for (const auto& n : names) {
    auto cfg = default_config(n);
    CHECK(cfg.name == n);
    CHECK_NOTHROW(validate_config(cfg));
  }
  REQUIRE_THROWS_AS(default_config("thm-9-9"), InvalidParameter);
}

TEST_CASE("bad configurations are rejected") {
  auto cfg = default_config("thm-2-5");
  cfg.rho = cfg.lambda;
  REQUIRE_THROWS_AS(validate_config(cfg), InvalidParameter);
  cfg = default_config("thm-2-3");
  cfg.replicas = 0;
  REQUIRE_THROWS_AS(validate_config(cfg), InvalidParameter);
  cfg = default_config("cuberoot");
  cfg.t_grid.clear();
  REQUIRE_THROWS_AS(validate_config(cfg), InvalidParameter);
  cfg = default_config("thm-2-6");
  cfg.x_grid = {1.0};
  REQUIRE_THROWS_AS(run_experiment(cfg), InvalidParameter);
}

TEST_CASE("config files override defaults field by field") {
  auto base = default_config("thm-2-3");
  auto cfg = ExperimentConfig::from_json({{"lambda", 2.0}, {"replicas", 10}}, base);
  CHECK(cfg.lambda == 2.0);
  CHECK(cfg.replicas == 10);
  CHECK(cfg.t_grid == base.t_grid);
  REQUIRE_THROWS(ExperimentConfig::from_json({{"replicas", "many"}}, base));
  auto round = ExperimentConfig::from_json(cfg.to_json(), ExperimentConfig{});
  CHECK(round.to_json() == cfg.to_json());
}

TEST_CASE("experiments are pure functions of config and seed") {
  auto cfg = default_config("thm-2-1");
  cfg.replicas = 300;
  cfg.threads = 1;
  auto a = run_experiment(cfg);
  cfg.threads = 3;
  auto b = run_experiment(cfg);
  REQUIRE(a.rows.size() == 300);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    REQUIRE(a.rows[i].values == b.rows[i].values);
    REQUIRE(a.rows[i].param_json == b.rows[i].param_json);
  }
  CHECK(a.summary() == b.summary());
  cfg.seed = 2;
  auto c = run_experiment(cfg);
  bool differs = false;
  for (std::size_t i = 0; i < a.rows.size(); ++i) differs = differs || a.rows[i].values != c.rows[i].values;
  CHECK(differs);
}

TEST_CASE("exact-moment experiments pass at small scale") {
  auto cfg = default_config("thm-2-5");
  cfg.replicas = 2000;
  cfg.t_grid = {2.0, 4.0, 8.0};
  auto rep = run_experiment(cfg);
  for (const auto& c : rep.checks)
    if (c.params.value("check", "") == "mean") CHECK(c.pass);
}

TEST_CASE("summary schema") {
  auto cfg = default_config("thm-2-3");
  cfg.replicas = 100;
  auto s = run_experiment(cfg).summary();
  for (const char* k : {"experiment", "params", "estimate", "se", "target", "pass"}) CHECK(s.contains(k));
  CHECK_FALSE(s["params"].contains("threads"));
}

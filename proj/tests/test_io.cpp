#include <catch_amalgamated.hpp>

#include <sstream>

#include "hamlab/dynamics.hpp"
#include "hamlab/io.hpp"

using namespace hamlab;

TEST_CASE("event log round-trips through CSV and replays exactly") {
  const Interval w{-25.0, 10.0};
  auto init = ParticleConfig::from_line(sample_poisson_line(1.1, w, RngStream(1)));
  auto epochs = sample_planar_unit_poisson(Rect{w, 3.0}, RngStream(2));
  auto [state, log] = evolve(init, epochs, 3.0);

  std::stringstream ls, cs, ps;
  write_csv(ls, log);
  write_csv(cs, init);
  write_csv(ps, epochs);
  auto log2 = read_event_log_csv(ls);
  auto init2 = read_config_csv(cs, w);
  auto epochs2 = read_planar_csv(ps, Rect{w, 3.0});
  REQUIRE(log2 == log);
  REQUIRE(init2.positions == init.positions);
  REQUIRE(init2.ids == init.ids);
  REQUIRE(epochs2.points == epochs.points);
  REQUIRE(replay(init2, log2).positions == state.config.positions);
}

TEST_CASE("malformed CSV names the line and field") {
  std::stringstream bad("time,epoch_x,id,spawned,from,to\n0.5,1.0,3,0,2.0,1.0\n0.7,abc,4,0,3.0,2.0\n");
  try {
    read_event_log_csv(bad);
    FAIL("no error");
  } catch (const IoError& e) {
    const std::string what = e.what();
    CHECK(what.find("line 3") != std::string::npos);
    CHECK(what.find("epoch_x") != std::string::npos);
  }
  std::stringstream header("x,y\n1,2\n");
  REQUIRE_THROWS_AS(read_planar_csv(header, Rect{{0.0, 5.0}, 5.0}), IoError);
}

TEST_CASE("experiment CSV has the documented header") {
  ExperimentReport r;
  r.experiment = "demo";
  r.columns = {"a", "b"};
  r.rows.push_back({"{\"x\":1}", 0, {1.5, 2.0}});
  std::stringstream os;
  write_csv(os, r);
  std::string first;
  std::getline(os, first);
  CHECK(first == "experiment,param_json,replica,value,value2");
  std::string row;
  std::getline(os, row);
  CHECK(row == "demo,\"{\"\"x\"\":1}\",0,1.5,2");
}

TEST_CASE("file helpers report failures") {
  REQUIRE_THROWS_AS(read_file("/nonexistent/hamlab/file"), IoError);
  REQUIRE_THROWS_AS(write_file("/nonexistent/hamlab/file", "x"), IoError);
}

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "hamlab/dynamics.hpp"
#include "hamlab/experiments.hpp"
#include "hamlab/lpp.hpp"
#include "hamlab/particles.hpp"
#include "hamlab/point_process.hpp"
#include "hamlab/validate.hpp"

namespace hamlab {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// CSV writers emit a header row and round-trip doubles (17 significant digits).
void write_csv(std::ostream& os, const LinePointSet& points);     // x
void write_csv(std::ostream& os, const PlanarPointSet& points);   // x,t
void write_csv(std::ostream& os, const ParticleConfig& config);   // x,class,id
void write_csv(std::ostream& os, const EventLog& log);            // time,epoch_x,id,spawned,from,to
void write_csv(std::ostream& os, const TrajectoryRecord& trajectory);  // t,x
void write_csv(std::ostream& os, const ExperimentReport& report);  // experiment,param_json,replica,value...

// Readers throw IoError naming the line and field on malformed input.
EventLog read_event_log_csv(std::istream& is);
ParticleConfig read_config_csv(std::istream& is, Interval window);
PlanarPointSet read_planar_csv(std::istream& is, Rect window);

nlohmann::json to_json(const LinePointSet& points);
nlohmann::json to_json(const PlanarPointSet& points);
nlohmann::json to_json(const ParticleConfig& config);
nlohmann::json to_json(const EventLog& log);
nlohmann::json to_json(const TrajectoryRecord& trajectory);
nlohmann::json to_json(const FluxResult& flux);

// Writes `content` to `path`, throwing IoError on failure.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace hamlab

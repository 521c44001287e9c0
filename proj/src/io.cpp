#include "hamlab/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

#include "hamlab/errors.hpp"

namespace hamlab {

namespace {

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream o;
  o << std::setprecision(17) << v;
  return o.str();
}

// RFC 4180 quoting.
std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line, const char* field) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("line " + std::to_string(line) + ", field '" + field + "': not a number: '" + s + "'");
  }
}

std::int64_t parse_int(const std::string& s, std::size_t line, const char* field) {
  try {
    std::size_t used = 0;
    auto v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw IoError("line " + std::to_string(line) + ", field '" + field + "': not an integer: '" + s + "'");
  }
}

// Reads rows after checking the header; calls fn(fields, line_number).
template <class Fn>
void read_rows(std::istream& is, const std::string& header, Fn&& fn) {
  std::string line;
  if (!std::getline(is, line)) throw IoError("empty input, expected header '" + header + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw IoError("line 1: expected header '" + header + "', got '" + line + "'");
  const std::size_t width = split(header).size();
  std::size_t n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != width)
      throw IoError("line " + std::to_string(n) + ": expected " + std::to_string(width) + " fields, got " +
                    std::to_string(f.size()));
    fn(f, n);
  }
}

const char* class_name(ParticleClass c) { return c == ParticleClass::first ? "first" : "second"; }

}  // namespace

void write_csv(std::ostream& os, const LinePointSet& points) {
  os << "x\n";
  for (double x : points.positions) os << num(x) << '\n';
}

void write_csv(std::ostream& os, const PlanarPointSet& points) {
  os << "x,t\n";
  for (const auto& p : points.points) os << num(p.x) << ',' << num(p.t) << '\n';
}

void write_csv(std::ostream& os, const ParticleConfig& config) {
  os << "x,class,id\n";
  for (std::size_t i = 0; i < config.size(); ++i)
    os << num(config.positions[i]) << ',' << class_name(config.classes[i]) << ',' << config.ids[i] << '\n';
}

void write_csv(std::ostream& os, const EventLog& log) {
  os << "time,epoch_x,id,spawned,from,to\n";
  for (const auto& r : log)
    os << num(r.time) << ',' << num(r.epoch_x) << ',' << r.id << ',' << (r.spawned ? 1 : 0) << ',' << num(r.from)
       << ',' << num(r.to) << '\n';
}

void write_csv(std::ostream& os, const TrajectoryRecord& tr) {
  os << "t,x\n";
  os << "0," << num(tr.initial_position) << '\n';
  for (const auto& [t, x] : tr.jumps) os << num(t) << ',' << num(x) << '\n';
}

void write_csv(std::ostream& os, const ExperimentReport& report) {
  os << "experiment,param_json,replica";
  for (std::size_t k = 0; k < report.columns.size(); ++k) os << ",value" << (k == 0 ? "" : std::to_string(k + 1));
  os << '\n';
  for (const auto& row : report.rows) {
    os << quoted(report.experiment) << ',' << quoted(row.param_json) << ',' << row.replica;
    for (double v : row.values) os << ',' << num(v);
    os << '\n';
  }
}

EventLog read_event_log_csv(std::istream& is) {
  EventLog log;
  read_rows(is, "time,epoch_x,id,spawned,from,to", [&](const std::vector<std::string>& f, std::size_t n) {
    EventRecord r;
    r.time = parse_double(f[0], n, "time");
    r.epoch_x = parse_double(f[1], n, "epoch_x");
    r.id = parse_int(f[2], n, "id");
    const auto sp = parse_int(f[3], n, "spawned");
    if (sp != 0 && sp != 1) throw IoError("line " + std::to_string(n) + ", field 'spawned': expected 0 or 1");
    r.spawned = sp == 1;
    r.from = parse_double(f[4], n, "from");
    r.to = parse_double(f[5], n, "to");
    log.push_back(r);
  });
  return log;
}

ParticleConfig read_config_csv(std::istream& is, Interval window) {
  ParticleConfig c;
  c.window = window;
  read_rows(is, "x,class,id", [&](const std::vector<std::string>& f, std::size_t n) {
    c.positions.push_back(parse_double(f[0], n, "x"));
    if (f[1] == "first")
      c.classes.push_back(ParticleClass::first);
    else if (f[1] == "second")
      c.classes.push_back(ParticleClass::second);
    else
      throw IoError("line " + std::to_string(n) + ", field 'class': expected first or second");
    c.ids.push_back(parse_int(f[2], n, "id"));
  });
  try {
    c.validate();
  } catch (const InvalidParameter& e) {
    throw IoError(std::string("configuration: ") + e.what());
  }
  return c;
}

PlanarPointSet read_planar_csv(std::istream& is, Rect window) {
  PlanarPointSet p;
  p.window = window;
  read_rows(is, "x,t", [&](const std::vector<std::string>& f, std::size_t n) {
    p.points.push_back({parse_double(f[0], n, "x"), parse_double(f[1], n, "t")});
  });
  return p;
}

nlohmann::json to_json(const LinePointSet& points) {
  return {{"rate", points.rate}, {"window", {points.window.lo, points.window.hi}}, {"positions", points.positions}};
}

nlohmann::json to_json(const PlanarPointSet& points) {
  auto arr = nlohmann::json::array();
  for (const auto& p : points.points) arr.push_back({p.x, p.t});
  return {{"window", {points.window.x.lo, points.window.x.hi, points.window.t_max}}, {"points", arr}};
}

nlohmann::json to_json(const ParticleConfig& config) {
  std::vector<std::string> cls;
  for (auto c : config.classes) cls.emplace_back(class_name(c));
  return {{"window", {config.window.lo, config.window.hi}},
          {"positions", config.positions},
          {"classes", cls},
          {"ids", config.ids}};
}

nlohmann::json to_json(const EventLog& log) {
  auto arr = nlohmann::json::array();
  for (const auto& r : log)
    arr.push_back({{"time", r.time},
                   {"epoch_x", r.epoch_x},
                   {"id", r.id},
                   {"spawned", r.spawned},
                   {"from", std::isinf(r.from) ? nlohmann::json(nullptr) : nlohmann::json(r.from)},
                   {"to", r.to}});
  return arr;
}

nlohmann::json to_json(const TrajectoryRecord& tr) {
  auto jumps = nlohmann::json::array();
  for (const auto& [t, x] : tr.jumps) jumps.push_back({t, x});
  return {{"id", tr.id},
          {"initial_position", tr.initial_position},
          {"jumps", jumps},
          {"certified", tr.certified},
          {"violation_time", std::isinf(tr.violation_time) ? nlohmann::json(nullptr) : nlohmann::json(tr.violation_time)}};
}

nlohmann::json to_json(const FluxResult& f) {
  return {{"value", f.value}, {"y_sup", f.y_sup}, {"y_inf", f.y_inf}, {"certified", f.certified}};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << content;
  if (!os) throw IoError("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace hamlab

// hamlab command-line runner.
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hamlab/dynamics.hpp"
#include "hamlab/errors.hpp"
#include "hamlab/experiments.hpp"
#include "hamlab/io.hpp"
#include "hamlab/point_process.hpp"
#include "hamlab/validate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hamlab;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInvalid = 2, kCertification = 3, kIo = 4 };

struct Flags {
  std::string name;
  double lambda = 0, rho = 0, t = 0, x = 0;
  std::vector<double> t_grid, x_grid, u_grid;
  std::int64_t replicas = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::string window, out = ".", format = "csv", scale = "quick", config;
  bool trace = false, print_config = false, mutate_spawn = false;
  std::vector<std::string> inputs;
};

// Comma-separated reals, e.g. "10,20,40".
std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InvalidParameter("not a number in list: '" + item + "'");
    }
    if (used != item.size()) throw InvalidParameter("not a number in list: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidParameter("empty list");
  return out;
}

json load_config_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw InvalidParameter(path + ": line " + std::to_string(line) + ": " + e.what());
  }
}

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--lambda", f.lambda, "Density lambda");
  app->add_option("--rho", f.rho, "Density rho (< lambda)");
  app->add_option("--t", f.t, "Time");
  app->add_option("--x", f.x, "Position");
  app->add_option("--seed", f.seed, "Master seed");
  app->add_option("--threads", f.threads, "Worker threads");
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--config", f.config, "JSON config file");
  app->add_flag("--print-config", f.print_config, "Print the resolved configuration and exit");
}

bool given(const CLI::App* app, const char* flag) { return app->count(flag) > 0; }

// CLI flags over config file over defaults.
ExperimentConfig resolve_experiment(const CLI::App* app, const Flags& f) {
  ExperimentConfig cfg = default_config(f.name);
  if (!f.config.empty()) {
    cfg = ExperimentConfig::from_json(load_config_file(f.config), cfg);
    if (cfg.name != f.name) throw InvalidParameter("config file names experiment '" + cfg.name + "'");
  }
  if (given(app, "--lambda")) cfg.lambda = f.lambda;
  if (given(app, "--rho")) cfg.rho = f.rho;
  if (given(app, "--t")) cfg.t_grid = {f.t};
  if (given(app, "--t-grid")) cfg.t_grid = f.t_grid;
  if (given(app, "--x")) cfg.x_grid = {f.x};
  if (given(app, "--x-grid")) cfg.x_grid = f.x_grid;
  if (given(app, "--u-grid")) cfg.u_grid = f.u_grid;
  if (given(app, "--replicas")) cfg.replicas = f.replicas;
  if (given(app, "--seed")) cfg.seed = f.seed;
  if (given(app, "--threads")) cfg.threads = f.threads;
  if (given(app, "--window")) {
    auto v = parse_list(f.window);
    if (v.size() != 1) throw InvalidParameter("--window for experiments is a single margin scale");
    cfg.window_scale = v[0];
  }
  validate_config(cfg);
  return cfg;
}

Interval parse_window(const std::string& s, Interval fallback) {
  if (s.empty()) return fallback;
  auto v = parse_list(s);
  if (v.size() != 2 || !(v[0] < v[1])) throw InvalidParameter("--window must be lo,hi with lo < hi");
  return {v[0], v[1]};
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

template <class T>
void emit(const std::string& dir, const std::string& stem, const std::string& format, const T& obj) {
  std::ostringstream os;
  if (format == "json")
    os << to_json(obj).dump(1) << '\n';
  else
    write_csv(os, obj);
  write_file((fs::path(dir) / (stem + "." + format)).string(), os.str());
}

int cmd_sample(const CLI::App* app, const Flags& f, bool run_dynamics) {
  const double lambda = given(app, "--lambda") ? f.lambda : 1.0;
  const double t = given(app, "--t") ? f.t : 0.0;
  const Interval w = parse_window(f.window, {-20.0, 20.0});
  json resolved{{"command", run_dynamics ? "evolve" : "sample"}, {"lambda", lambda}, {"t", t},
                {"window", {w.lo, w.hi}}, {"seed", f.seed}, {"format", f.format}, {"trace", f.trace}};
  if (f.print_config) {
    std::cout << resolved.dump(2) << '\n';
    return kOk;
  }
  if (!(lambda > 0.0) || !(t >= 0.0)) throw InvalidParameter("need lambda > 0 and t >= 0");
  ensure_dir(f.out);
  RngStream root(f.seed, {{"cli", 0}});
  auto line = sample_poisson_line(lambda, w, root.child("initial"));
  emit(f.out, "initial", f.format, line);
  if (t <= 0.0) return kOk;
  auto epochs = sample_planar_unit_poisson(Rect{w, t}, root.child("epochs"));
  emit(f.out, "epochs", f.format, epochs);
  if (!run_dynamics) return kOk;
  auto initial = ParticleConfig::from_line(line);
  emit(f.out, "initial_config", f.format, initial);
  auto [state, log] = evolve(initial, epochs, t);
  emit(f.out, "final", f.format, state.config);
  if (f.trace) emit(f.out, "events", f.format, log);
  json meta = resolved;
  meta["contamination_frontier"] = std::isinf(state.contamination_frontier) ? json(nullptr) : json(state.contamination_frontier);
  meta["particles"] = state.config.size();
  meta["events"] = log.size();
  write_file((fs::path(f.out) / "evolve.json").string(), meta.dump(2) + "\n");
  std::cout << meta.dump() << '\n';
  return kOk;
}

int cmd_experiment(const CLI::App* app, const Flags& f) {
  auto cfg = resolve_experiment(app, f);
  if (f.print_config) {
    std::cout << cfg.to_json().dump(2) << '\n';
    return kOk;
  }
  ensure_dir(f.out);
  auto rep = run_experiment(cfg);
  std::ostringstream rows;
  if (f.format == "json") {
    json arr = json::array();
    for (const auto& r : rep.rows) arr.push_back({{"replica", r.replica}, {"values", r.values}});
    rows << json{{"experiment", rep.experiment}, {"params", rep.params}, {"columns", rep.columns}, {"rows", arr}}.dump()
         << '\n';
  } else {
    write_csv(rows, rep);
  }
  write_file((fs::path(f.out) / (cfg.name + "." + f.format)).string(), rows.str());
  const auto summary = rep.summary();
  write_file((fs::path(f.out) / (cfg.name + ".summary.json")).string(), summary.dump(2) + "\n");
  for (const auto& c : rep.checks)
    std::cout << (c.informational ? "info" : (c.pass ? "PASS" : "FAIL")) << "  " << c.params.dump()
              << "  estimate=" << c.estimate << " se=" << c.se << " target=" << c.target << '\n';
  std::cout << cfg.name << ": " << (rep.pass() ? "PASS" : "FAIL") << " (retries " << rep.retries << ")\n";
  return rep.pass() ? kOk : kFailed;
}

int cmd_validate(const CLI::App* app, const Flags& f) {
  if (f.scale != "quick" && f.scale != "full") throw InvalidParameter("--scale must be quick or full");
  const auto scale = f.scale == "quick" ? ValidationScale::quick : ValidationScale::full;
  if (f.print_config) {
    std::cout << json{{"command", "validate"}, {"seed", f.seed}, {"scale", f.scale}, {"threads", f.threads}}.dump(2)
              << '\n';
    return kOk;
  }
  set_spawn_fault(f.mutate_spawn);
  auto rep = run_validation(f.seed, scale, f.threads);
  for (const auto& o : rep.identities)
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << o.name << "  instances=" << o.instances
              << " comparisons=" << o.comparisons << " skipped=" << o.skipped << '\n';
  if (given(app, "--out")) {
    ensure_dir(f.out);
    write_file((fs::path(f.out) / "validate.json").string(), rep.to_json().dump(2) + "\n");
  }
  if (const auto* bad = rep.first_failure()) {
    std::cout << "first failing identity: " << bad->name << " (seed " << f.seed << ", instance "
              << bad->failing_instance << "): " << bad->detail << '\n';
    return kFailed;
  }
  return kOk;
}

int cmd_report(const Flags& f) {
  if (f.inputs.empty()) throw InvalidParameter("report needs summary JSON files");
  bool all = true;
  for (const auto& path : f.inputs) {
    auto j = load_config_file(path);
    const bool pass = j.value("pass", false);
    all = all && pass;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << j.value("experiment", path) << '\n';
    for (const auto& c : j.value("checks", json::array()))
      std::cout << "    " << (c.value("informational", false) ? "info" : (c.value("pass", false) ? "ok  " : "FAIL"))
                << ' ' << c["params"].dump() << " estimate=" << c.value("estimate", 0.0)
                << " target=" << c.value("target", 0.0) << '\n';
  }
  return all ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hammersley process simulation lab"};
  app.require_subcommand(1);
  Flags f;

  auto* sample = app.add_subcommand("sample", "Sample an initial configuration and epochs");
  auto* evolve_cmd = app.add_subcommand("evolve", "Sample and evolve a configuration");
  for (auto* sc : {sample, evolve_cmd}) {
    add_common(sc, f);
    sc->add_option("--window", f.window, "lo,hi");
  }
  evolve_cmd->add_flag("--trace", f.trace, "Write the event log");

  auto* exp = app.add_subcommand("experiment", "Run a named experiment");
  exp->add_option("name", f.name, "Experiment name")->required();
  add_common(exp, f);
  exp->add_option("--t-grid", f.t_grid, "Times")->delimiter(',');
  exp->add_option("--x-grid", f.x_grid, "Positions")->delimiter(',');
  exp->add_option("--u-grid", f.u_grid, "Standardized abscissas")->delimiter(',');
  exp->add_option("--replicas", f.replicas, "Replica count");
  exp->add_option("--window", f.window, "Window margin scale");

  auto* val = app.add_subcommand("validate", "Run the exact pathwise identity suite");
  add_common(val, f);
  val->add_option("--scale", f.scale, "quick or full");
  // fault injection for the mutation test; hidden from --help
  val->add_flag("--mutate-spawn", f.mutate_spawn, "Corrupt the spawn rule")->group("");

  auto* rep = app.add_subcommand("report", "Summarize experiment summary files");
  rep->add_option("files", f.inputs, "Summary JSON files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*sample) return cmd_sample(sample, f, false);
    if (*evolve_cmd) return cmd_sample(evolve_cmd, f, true);
    if (*exp) return cmd_experiment(exp, f);
    if (*val) return cmd_validate(val, f);
    if (*rep) return cmd_report(f);
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n\n";
    if (*exp) {
      std::cerr << exp->help() << "\nexperiments:";
      for (const auto& n : experiment_names()) std::cerr << ' ' << n;
      std::cerr << '\n';
    } else {
      std::cerr << app.help();
    }
    return kInvalid;
  } catch (const CertificationFailure& e) {
    std::cerr << "certification failure: " << e.what() << '\n';
    return kCertification;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIo;
  }
  return kInvalid;
}

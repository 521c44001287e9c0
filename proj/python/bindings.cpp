// Thin Python layer over hamlab_core. Structured results cross as JSON text
// and are decoded in hamlab/__init__.py.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hamlab/dynamics.hpp"
#include "hamlab/errors.hpp"
#include "hamlab/experiments.hpp"
#include "hamlab/io.hpp"
#include "hamlab/lpp.hpp"
#include "hamlab/point_process.hpp"
#include "hamlab/stats.hpp"
#include "hamlab/validate.hpp"

namespace py = pybind11;
using namespace hamlab;

namespace {

using Points = std::vector<std::pair<double, double>>;

PlanarPointSet planar(const Points& pts, double lo, double hi, double t_max) {
  PlanarPointSet out;
  out.window = Rect{Interval{lo, hi}, t_max};
  for (const auto& [x, t] : pts) out.points.push_back({x, t});
  std::sort(out.points.begin(), out.points.end(), [](auto& a, auto& b) { return a.t < b.t; });
  return out;
}

Points to_pairs(const PlanarPointSet& p) {
  Points out;
  for (const auto& q : p.points) out.emplace_back(q.x, q.t);
  return out;
}

ParticleConfig config(std::vector<double> positions, double lo, double hi, double left_density) {
  std::sort(positions.begin(), positions.end());
  auto c = ParticleConfig::from_positions(std::move(positions), Interval{lo, hi});
  c.left_density = left_density;
  c.validate();
  return c;
}

}  // namespace

PYBIND11_MODULE(_hamlab, m) {
  m.doc() = "Hammersley process simulation lab";

  py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<CertificationFailure>(m, "CertificationFailure", PyExc_RuntimeError);
  py::register_exception<UncertifiedRegion>(m, "UncertifiedRegion", PyExc_RuntimeError);

  m.def(
      "sample_line",
      [](double rate, double lo, double hi, std::uint64_t seed) {
        return sample_poisson_line_tiled(rate, Interval{lo, hi}, RngStream(seed)).positions;
      },
      py::arg("rate"), py::arg("lo"), py::arg("hi"), py::arg("seed"));

  m.def(
      "sample_planar",
      [](double lo, double hi, double t_max, std::uint64_t seed) {
        return to_pairs(sample_planar_tiled(Rect{Interval{lo, hi}, t_max}, RngStream(seed)));
      },
      py::arg("lo"), py::arg("hi"), py::arg("t_max"), py::arg("seed"));

  m.def(
      "evolve_json",
      [](std::vector<double> positions, double lo, double hi, const Points& epochs, double t_end,
         double left_density) {
        auto init = config(std::move(positions), lo, hi, left_density);
        auto [state, log] = evolve(init, planar(epochs, lo, hi, t_end), t_end);
        nlohmann::json j;
        j["positions"] = state.config.positions;
        j["time"] = state.time;
        j["contamination_frontier"] = state.contamination_frontier;
        j["log"] = to_json(log);
        return j.dump();
      },
      py::arg("positions"), py::arg("lo"), py::arg("hi"), py::arg("epochs"), py::arg("t_end"),
      py::arg("left_density") = std::numeric_limits<double>::quiet_NaN());

  m.def(
      "flux_json",
      [](std::vector<double> positions, double lo, double hi, const Points& epochs, double x, double t,
         double left_density) {
        auto init = config(std::move(positions), lo, hi, left_density);
        return to_json(flux_variational(init, planar(epochs, lo, hi, t), x, t)).dump();
      },
      py::arg("positions"), py::arg("lo"), py::arg("hi"), py::arg("epochs"), py::arg("x"), py::arg("t"),
      py::arg("left_density") = std::numeric_limits<double>::quiet_NaN());

  m.def(
      "lis_length",
      [](const Points& pts) {
        auto p = planar(pts, 0.0, 0.0, 0.0);
        return lis_length(std::span<const SpaceTimePoint>(p.points));
      },
      py::arg("points"));

  m.def("skellam_tail", &skellam_tail_oracle, py::arg("a"), py::arg("b"));
  m.def("kolmogorov_sf", &kolmogorov_sf, py::arg("z"));
  m.def("certificate_margin", &certificate_margin, py::arg("density"), py::arg("t"));

  m.def("experiment_names", &experiment_names);
  m.def(
      "default_config_json", [](const std::string& name) { return default_config(name).to_json().dump(); },
      py::arg("name"));
  m.def(
      "run_experiment_json",
      [](const std::string& config_json) {
        const auto j = nlohmann::json::parse(config_json);
        auto cfg = ExperimentConfig::from_json(j, default_config(j.at("name").get<std::string>()));
        validate_config(cfg);
        ExperimentReport rep;
        {
          py::gil_scoped_release release;
          rep = run_experiment(cfg);
        }
        return rep.summary().dump();
      },
      py::arg("config_json"));

  m.def("identity_names", &identity_names);
  m.def(
      "run_identity_json",
      [](const std::string& name, std::uint64_t seed, std::size_t instances) {
        IdentityOutcome o;
        {
          py::gil_scoped_release release;
          o = run_identity(name, seed, instances);
        }
        nlohmann::json j{{"name", o.name},       {"instances", o.instances},
                         {"comparisons", o.comparisons}, {"skipped", o.skipped},
                         {"pass", o.pass},       {"failing_instance", o.failing_instance},
                         {"detail", o.detail}};
        return j.dump();
      },
      py::arg("name"), py::arg("seed"), py::arg("instances"));
}

#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hamlab/particles.hpp"
#include "hamlab/point_process.hpp"

namespace hamlab {

// certified: the windowed value beats every path entering through the left
// edge under the boundary envelope (see BoundaryEnvelope), so the value and
// both exit points equal their infinite-volume versions. Implies y_inf > A.
struct FluxResult {
  std::int64_t value = 0;
  double y_sup = 0.0;  // right end of the last maximizing interval
  double y_inf = 0.0;  // left end of the first maximizing interval
  bool certified = false;
  friend bool operator==(const FluxResult&, const FluxResult&) = default;
};

// Longest chain strictly increasing in both coordinates among the points in
// (z, x] x (0, t]. Patience sorting, O(n log n).
std::int64_t lis_length(const PlanarPointSet& points, double z, double x, double t);

// Same over a t-sorted span with no rectangle filter.
std::int64_t lis_length(std::span<const SpaceTimePoint> t_sorted);

// Variational flux: max over z in [A, x] of nu(z) + L((z,0),(x,t)), A being
// the left edge of the configuration window. Uses one descending-x sweep.
FluxResult flux_variational(const ParticleConfig& config, const PlanarPointSet& epochs, double x, double t);

// Reference implementation: a fresh LIS per breakpoint. Quadratic; tests only.
FluxResult flux_naive_oracle(const ParticleConfig& config, const PlanarPointSet& epochs, double x, double t);

// Answers many flux queries against one (configuration, epochs) pair,
// sorting the epochs by x once.
class FluxSolver {
 public:
  FluxSolver(const ParticleConfig& config, const PlanarPointSet& epochs);
  // left_density as in ParticleConfig::left_density.
  FluxSolver(const std::vector<double>& sorted_positions, Interval window, const PlanarPointSet& epochs,
             double left_density = std::numeric_limits<double>::quiet_NaN());

  FluxResult query(double x, double t) const;
  double left_edge() const { return window_.lo; }

 private:
  std::vector<double> positions_;
  Interval window_;
  Rect epoch_window_;
  std::vector<SpaceTimePoint> by_space_;
  double density_;
};

}  // namespace hamlab

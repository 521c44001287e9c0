#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hamlab/dynamics.hpp"
#include "hamlab/particles.hpp"
#include "hamlab/point_process.hpp"
#include "hamlab/rng.hpp"

namespace hamlab {

// Direction in which queue time runs along the line. The two-class
// construction uses `leftward`: the queue starts at the right window edge.
enum class QueueDirection : std::uint8_t { rightward, leftward };

struct QueueSample {
  LinePointSet arrivals;
  LinePointSet services;
  std::int64_t initial_len = 0;  // length at the edge where the sweep starts
  QueueDirection direction = QueueDirection::rightward;
  // (position, length just after the event) in sweep order
  std::vector<std::pair<double, std::int64_t>> length_path;
  LinePointSet departures;  // used services
  LinePointSet unused;

  // Length after processing every event up to and including x in sweep order.
  std::int64_t length_at(double x) const;
};

// Single-server queue. Arrivals and services must share a window; an arrival
// and a service at the same position are processed arrival first.
QueueSample mm1_path(const LinePointSet& arrivals, const LinePointSet& services, std::int64_t initial_len,
                     QueueDirection direction = QueueDirection::rightward, bool check_rates = true);

struct TwoClassSample {
  ParticleConfig first;   // departures
  ParticleConfig second;  // unused services
  QueueSample queue;
};

// Invariant two-class measure: leftward queue with arrivals Poisson(rho),
// services Poisson(lambda) and a Geometric(rho/lambda) length at the right
// edge. Ids are ranks among the services.
TwoClassSample stationary_two_class(double rho, double lambda, Interval window, const RngStream& stream);

// Builds (first, second) from a queue's departures and unused services.
TwoClassSample two_class_from_queue(QueueSample queue);

struct ConditionedSample {
  ParticleConfig first;   // departures left of 0, every service right of 0
  ParticleConfig second;  // unused services left of 0 plus the atom at 0
  std::int64_t k_plus_1 = 0;  // independent Geometric(rho/lambda)
  std::vector<double> left_unused;  // unused services left of 0, nearest to 0 first
  std::vector<double> left_departures;
  std::vector<double> right_services;
};

// Second-class particle at 0: the queue is empty just before it reaches 0
// (leftward), so the service at 0 is unused. Left of 0 the queue restarts
// from empty; right of 0 only the service positions matter to particles at
// or left of 0 and all of them are first class.
ConditionedSample condition_second_class_at_origin(double rho, double lambda, Interval window,
                                                   const RngStream& stream);

struct DualPointSet {
  PlanarPointSet points;  // window: certified strip [frontier(t_end), hi] x [0, t_end]
  std::size_t jump_count = 0;  // in-window non-spawn jumps, certified or not
};

// One dual point (from, time) per jump. Jumps of particles entering from
// beyond the right edge have their origin outside the window.
DualPointSet dual_points(const ParticleConfig& initial, const PlanarPointSet& epochs, double t_end);

struct TwoLineState {
  ConfigurationState line1;
  ConfigurationState line2;
  EventLog log1;
  EventLog log2;
};

// line2 = evolve(alpha2, epochs); line1 = evolve(alpha1, duals of line2).
// alpha2's window must be wide enough that every dual point inside alpha1's
// window is certified.
TwoLineState two_line_process(const LinePointSet& alpha1, const LinePointSet& alpha2, const PlanarPointSet& epochs,
                              double t_end);

struct ShockCouplingResult {
  TrajectoryRecord z_shock;  // shock measure with a second-class particle at 0
  TrajectoryRecord z_stat;   // conditioned stationary two-class process
  TrajectoryRecord z_lower;  // ghost particle started at left_unused[k_plus_1], the first service both queues leave unused
  std::int64_t k_plus_1 = 0;
  std::vector<std::pair<double, double>> j_samples;  // (t, z_stat(t) - z_lower(t))
  ConfigurationState stat_state;  // stationary union at t_end
  bool certified = true;
};

ShockCouplingResult shock_coupling_experiment(double rho, double lambda, double t_end, Interval window,
                                              const RngStream& stream, std::span<const double> sample_times = {});

}  // namespace hamlab

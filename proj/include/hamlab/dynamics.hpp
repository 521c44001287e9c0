#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "hamlab/particles.hpp"
#include "hamlab/point_process.hpp"

namespace hamlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ConfigurationState {
  ParticleConfig config;
  double time = 0.0;
  // Left of this position the windowed state may differ from the infinite
  // system; +inf when nothing is certified.
  double contamination_frontier = -kInf;
};

struct EventRecord {
  double time = 0.0;
  double epoch_x = 0.0;
  std::int64_t id = 0;
  bool spawned = false;
  double from = kInf;  // +inf for spawned particles
  double to = 0.0;
  friend bool operator==(const EventRecord&, const EventRecord&) = default;
};

using EventLog = std::vector<EventRecord>;

struct TrajectoryRecord {
  std::int64_t id = 0;
  double initial_position = 0.0;
  std::vector<std::pair<double, double>> jumps;  // (time, new position)
  bool certified = true;
  double violation_time = kInf;  // first time the path left the certified region

  double position_at(double t) const;
  double final_position() const { return jumps.empty() ? initial_position : jumps.back().second; }
};

enum class Certification : std::uint8_t { strict, lenient };

// Upper envelope for the flux through the left window edge A produced by
// unsimulated data left of A. For Poisson data of density d that flux is a
// rate-1/d Poisson process in time; the envelope b0 + floor(s/d), with
// b0 = ceil(5 sqrt(t_end/d) + 5), is exceeded before t_end with probability
// below 1e-5. Density 0 means no bound.
struct BoundaryEnvelope {
  double density = 0.0;
  double t_end = 0.0;
  std::int64_t b0 = 0;

  BoundaryEnvelope(double density_, double t_end_);
  bool unbounded() const { return !(density > 0.0); }
  // Jump times of floor(s/d) up to t_end.
  std::vector<double> sink_times() const;
};

// Distance a window must extend left of the characteristic exit point (t/d^2
// left of a query at time t) before the left-edge certificate holds with high
// probability for density-d data. Beyond the exit point the edge-entry term
// falls behind the data term by (sqrt(d u) - sqrt(t/d))^2 on average at
// distance u; the margin asks for b0 plus 2.5 standard deviations of the
// initial count and of the cube-root fluctuations. Rare misses are caught by
// the certificate and re-run on a doubled window.
double certificate_margin(double density, double t);

// Left-edge certificate. With boundary flux B(s) the infinite-volume flux is
//   max(W(y), nu(A) + sup_u [B(u) + L((A,u),(y,s))]),
// W being the windowed flux. Replacing B by the envelope, the second term is
// nu(A) + b0 + G(y) where G is an empty-start copy of the window driven by
// the same epochs whose leftmost particle leaves at each sink time. G stays
// inside W, and the windowed value is exact at y once at least
// K = b0 + #sinks particles of W \ G lie in (A, y]. The frontier is the
// position of the K-th such particle (+inf when there are fewer).
class FrontierTracker {
 public:
  FrontierTracker(const BoundaryEnvelope& envelope, std::size_t slots);

  // Applies sinks due at or before time s. Call before the epoch at s.
  void advance(double s);
  // Call after the windowed system moved `slot` (or spawned it).
  void moved(std::size_t slot, bool spawned);
  double frontier(std::span<const double> positions) const;

 private:
  void set_extra(std::size_t slot, bool on);
  std::size_t kth(const std::vector<std::int64_t>& tree, std::int64_t k) const;  // size() when absent

  std::vector<double> sinks_;
  std::size_t next_sink_ = 0;
  std::int64_t k_ = 0;
  bool unbounded_ = false;
  std::vector<char> extra_;                  // slot of W missing from G
  std::vector<std::int64_t> extra_tree_, clean_tree_;  // Fenwick trees over slots
  std::int64_t extra_count_ = 0;
};

// Hammersley system on a window, stored as a sorted array. Particles never
// overtake each other, so array slots are stable identities; spawned
// particles are appended at the right end.
class HammersleySystem {
 public:
  struct Move {
    std::size_t slot = 0;
    double from = kInf;
    bool spawned = false;
  };

  explicit HammersleySystem(const ParticleConfig& initial);

  Move apply(double x);
  std::size_t size() const { return positions_.size(); }
  std::span<const double> positions() const { return positions_; }
  std::int64_t id_of(std::size_t slot) const { return ids_[slot]; }
  ParticleConfig snapshot() const;

 private:
  std::vector<double> positions_;
  std::vector<std::int64_t> ids_;
  std::vector<ParticleClass> classes_;
  Interval window_;
  double left_density_;
  std::int64_t next_id_;
};

// Mutation-test hook for the validation suite: while set (process-wide),
// spawned particles are placed at the right window edge instead of at the
// epoch.
void set_spawn_fault(bool on);

// Checks that the epochs cover window x (0, t_end].
void require_epoch_cover(const PlanarPointSet& epochs, Interval window, double t_end);

std::pair<ConfigurationState, EventLog> evolve(const ParticleConfig& initial, const PlanarPointSet& epochs,
                                               double t_end);

// Applies the log records with time <= t to the initial configuration.
ParticleConfig replay(const ParticleConfig& initial, const EventLog& log, double t = kInf);

TrajectoryRecord tagged_trajectory(const ParticleConfig& initial, std::int64_t tagged_id,
                                   const PlanarPointSet& epochs, double t_end,
                                   Certification mode = Certification::strict);

// Runs base and base + (atom at 0) under the same epochs and follows the
// single discrepancy.
TrajectoryRecord coupled_discrepancy(const ParticleConfig& base, const PlanarPointSet& epochs, double t_end,
                                     Certification mode = Certification::lenient);

struct PriorityResult {
  ConfigurationState state;               // union, with current classes
  std::vector<TrajectoryRecord> second;   // one per initial second-class particle, in rank order
};

PriorityResult priority_dynamics(const ParticleConfig& first, const ParticleConfig& second,
                                 const PlanarPointSet& epochs, double t_end);

// Label-crossing flux through the segment from (0,0) to (x,t).
std::int64_t flux_from_dynamics(const EventLog& log, const ParticleConfig& initial, double x, double t,
                                ClassFilter filter = ClassFilter::all);

// Jump times of t -> L(x,t) + nu((x,0]) on [0, t_end].
std::vector<double> west_process(const ParticleConfig& initial, const PlanarPointSet& epochs, double x,
                                 double t_end);

// Smallest initial position among particles strictly right of x.
double chi_min(const ConfigurationState& state, const ParticleConfig& initial, double x);

// Largest initial second-class position among second-class particles at or
// left of x. `state` must come from priority_dynamics.
double chi_bar_max(const ConfigurationState& state, const ParticleConfig& initial_second, double x);

}  // namespace hamlab

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "hamlab/point_process.hpp"

namespace hamlab {

enum class ParticleClass : std::uint8_t { first, second };
enum class ClassFilter : std::uint8_t { all, first, second };

inline bool passes(ClassFilter f, ParticleClass c) {
  return f == ClassFilter::all || (f == ClassFilter::first) == (c == ParticleClass::first);
}

// Finite counting measure on a window. Positions are strictly increasing;
// classes and ids are aligned with positions.
struct ParticleConfig {
  std::vector<double> positions;
  std::vector<ParticleClass> classes;
  std::vector<std::int64_t> ids;
  Interval window;
  // Intensity of the unsimulated configuration left of the window. NaN when
  // unknown; certificates then estimate it from the leftmost particles.
  double left_density = std::numeric_limits<double>::quiet_NaN();

  std::size_t size() const { return positions.size(); }
  bool empty() const { return positions.empty(); }

  static ParticleConfig from_line(const LinePointSet& line, ParticleClass cls = ParticleClass::first,
                                  std::int64_t first_id = 0);
  static ParticleConfig from_positions(std::vector<double> positions, Interval window,
                                       ParticleClass cls = ParticleClass::first);

  // Throws InvalidParameter when any structural invariant is broken.
  void validate() const;
  std::vector<double> positions_of(ClassFilter filter) const;
  std::int64_t index_of_id(std::int64_t id) const;  // -1 when absent
  std::int64_t max_id() const;
};

// Union of two configurations on the same window (atoms must be disjoint).
// The left densities add.
ParticleConfig merge_configs(const ParticleConfig& a, const ParticleConfig& b);

ParticleConfig with_atom(const ParticleConfig& config, double position, ParticleClass cls, std::int64_t id);

// The selection's left density is unknown (NaN); set it when the law is known.
ParticleConfig select_class(const ParticleConfig& config, ParticleClass cls);

// Density used by the left-edge certificate: `known` when it is a positive
// number, else a conservative (low) estimate from the leftmost particles,
// 0 when there are none.
double boundary_density(std::span<const double> sorted_positions, Interval window, double known);

// Signed counting function: #(0,x] for x > 0, 0 at 0, -#(x,0] for x < 0.
std::int64_t profile_count(const ParticleConfig& config, double x, ClassFilter filter = ClassFilter::all);

// Same function on a bare sorted array.
std::int64_t signed_count(const std::vector<double>& sorted, double x);

}  // namespace hamlab

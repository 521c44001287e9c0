#pragma once

#include <span>
#include <utility>
#include <vector>

#include "hamlab/rng.hpp"

namespace hamlab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Space-time rectangle [x.lo, x.hi] x [0, t_max].
struct Rect {
  Interval x;
  double t_max = 0.0;

  double area() const { return x.length() * t_max; }
  bool contains(const Rect& o) const { return x.contains(o.x) && o.t_max <= t_max; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

struct LinePointSet {
  std::vector<double> positions;  // strictly increasing
  double rate = 1.0;
  Interval window;
};

struct SpaceTimePoint {
  double x = 0.0;
  double t = 0.0;
  friend bool operator==(const SpaceTimePoint&, const SpaceTimePoint&) = default;
};

struct PlanarPointSet {
  std::vector<SpaceTimePoint> points;  // strictly increasing in t
  Rect window;
};

LinePointSet sample_poisson_line(double rate, Interval window, const RngStream& stream);

PlanarPointSet sample_planar_unit_poisson(Rect window, const RngStream& stream);

// Independent Bernoulli(keep_prob) split; returns (kept, removed).
std::pair<LinePointSet, LinePointSet> thin_split(const LinePointSet& points, double keep_prob,
                                                 const RngStream& stream);

// Samples larger \ existing.window and merges; points of `existing` are kept
// verbatim.
PlanarPointSet extend_planar(const PlanarPointSet& existing, Rect larger, const RngStream& stream);

// Tiled variants: tile k covers [k w, (k+1) w) and draws from
// stream.child("tile", k), so the sample on a window is exactly the
// restriction of the sample on any larger window. Used where a replica may
// be re-run on an enlarged window.
LinePointSet sample_poisson_line_tiled(double rate, Interval window, const RngStream& stream, double tile = 16.0);
PlanarPointSet sample_planar_tiled(Rect window, const RngStream& stream, double tile = 16.0);

LinePointSet restrict_line(const LinePointSet& points, Interval window);
PlanarPointSet restrict_planar(const PlanarPointSet& points, Rect window);

// Copy of the points ordered by x (bucket sort; the input is usually near
// uniform in x).
std::vector<SpaceTimePoint> sorted_by_space(std::span<const SpaceTimePoint> points, Interval range);

}  // namespace hamlab

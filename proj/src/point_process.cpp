#include "hamlab/point_process.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "hamlab/errors.hpp"

namespace hamlab {

namespace {

void require_window(Interval w) {
  if (!(w.hi > w.lo) || !std::isfinite(w.lo) || !std::isfinite(w.hi))
    throw InvalidParameter("window must be a non-degenerate finite interval");
}

void require_rect(const Rect& r) {
  require_window(r.x);
  if (!(r.t_max > 0.0) || !std::isfinite(r.t_max))
    throw InvalidParameter("window must have positive finite time extent");
}

template <class T, class Key>
void bucket_sort(std::vector<T>& items, Key key, Interval range) {
  const std::size_t n = items.size();
  if (n < 2) return;
  const double scale = static_cast<double>(n) / range.length();
  auto bucket_of = [&](const T& v) {
    double b = (key(v) - range.lo) * scale;
    if (!(b > 0.0)) return std::size_t{0};
    return std::min(static_cast<std::size_t>(b), n - 1);
  };
  std::vector<std::uint32_t> start(n + 1, 0);
  for (const T& v : items) ++start[bucket_of(v) + 1];
  for (std::size_t i = 0; i < n; ++i) start[i + 1] += start[i];
  std::size_t widest = 0;
  for (std::size_t i = 0; i < n; ++i) widest = std::max<std::size_t>(widest, start[i + 1] - start[i]);
  std::vector<T> out(n);
  for (const T& v : items) out[start[bucket_of(v)]++] = v;
  // Buckets hold O(1) items on average; finish with insertion sort unless
  // the input was far from uniform.
  if (widest > 64) {
    std::sort(out.begin(), out.end(), [&](const T& a, const T& b) { return key(a) < key(b); });
    items.swap(out);
    return;
  }
  for (std::size_t i = 1; i < n; ++i) {
    T v = out[i];
    std::size_t j = i;
    while (j > 0 && key(out[j - 1]) > key(v)) {
      out[j] = out[j - 1];
      --j;
    }
    out[j] = v;
  }
  items.swap(out);
}

// Redraws x for any point whose x coincides with an earlier one.
void enforce_distinct_x(std::vector<SpaceTimePoint>& pts, Interval range, Rng& rng) {
  struct Keyed {
    double x;
    std::uint32_t index;
  };
  for (;;) {
    std::vector<Keyed> keyed(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) keyed[i] = {pts[i].x, static_cast<std::uint32_t>(i)};
    bucket_sort(keyed, [](const Keyed& k) { return k.x; }, range);
    bool clean = true;
    for (std::size_t i = 1; i < keyed.size(); ++i) {
      if (keyed[i].x == keyed[i - 1].x) {
        pts[std::max(keyed[i].index, keyed[i - 1].index)].x = rng.uniform(range.lo, range.hi);
        clean = false;
      }
    }
    if (clean) return;
  }
}

}  // namespace

LinePointSet sample_poisson_line(double rate, Interval window, const RngStream& stream) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidParameter("rate must be positive");
  require_window(window);
  LinePointSet out{{}, rate, window};
  out.positions.reserve(static_cast<std::size_t>(rate * window.length() * 1.1) + 16);
  Rng rng = stream.rng();
  double x = window.lo;
  for (;;) {
    double next = x + rng.exponential(rate);
    if (next > window.hi) break;
    if (next <= x) continue;  // gap below one ulp
    x = next;
    out.positions.push_back(x);
  }
  return out;
}

PlanarPointSet sample_planar_unit_poisson(Rect window, const RngStream& stream) {
  require_rect(window);
  PlanarPointSet out{{}, window};
  const double width = window.x.length();
  out.points.reserve(static_cast<std::size_t>(window.area() * 1.05) + 16);
  Rng rng = stream.rng();
  double t = 0.0;
  for (;;) {
    double next = t + rng.exponential(width);
    if (next > window.t_max) break;
    if (next <= t) continue;
    t = next;
    out.points.push_back({rng.uniform(window.x.lo, window.x.hi), t});
  }
  enforce_distinct_x(out.points, window.x, rng);
  return out;
}

std::pair<LinePointSet, LinePointSet> thin_split(const LinePointSet& points, double keep_prob,
                                                 const RngStream& stream) {
  if (!(keep_prob >= 0.0 && keep_prob <= 1.0)) throw InvalidParameter("keep_prob must lie in [0, 1]");
  LinePointSet kept{{}, points.rate * keep_prob, points.window};
  LinePointSet removed{{}, points.rate * (1.0 - keep_prob), points.window};
  Rng rng = stream.rng();
  for (double x : points.positions) (rng.bernoulli(keep_prob) ? kept : removed).positions.push_back(x);
  return {std::move(kept), std::move(removed)};
}

PlanarPointSet extend_planar(const PlanarPointSet& existing, Rect larger, const RngStream& stream) {
  const Rect& old = existing.window;
  if (!larger.contains(old)) throw InvalidParameter("extension must contain the existing window");
  if (larger == old) return existing;

  auto in_old = [&](const SpaceTimePoint& p) { return old.x.contains(p.x) && p.t <= old.t_max; };
  auto by_time = [](const SpaceTimePoint& a, const SpaceTimePoint& b) { return a.t < b.t; };

  // New region = left and right strips (full height) plus the strip above the
  // old window; each piece has its own stream.
  std::vector<SpaceTimePoint> fresh;
  auto add_piece = [&](Interval xs, double t_lo, double t_hi, std::string_view name) {
    if (!(xs.hi > xs.lo) || !(t_hi > t_lo)) return;
    RngStream piece_stream = stream.child(name);
    PlanarPointSet piece = sample_planar_unit_poisson({xs, t_hi - t_lo}, piece_stream);
    Rng fix = piece_stream.child("boundary").rng();
    for (auto p : piece.points) {
      p.t += t_lo;
      // Only the shared boundary can overlap the old window.
      while (in_old(p)) p = {fix.uniform(xs.lo, xs.hi), fix.uniform(t_lo, t_hi)};
      fresh.push_back(p);
    }
  };
  add_piece({larger.x.lo, old.x.lo}, 0.0, larger.t_max, "extend-left");
  add_piece({old.x.hi, larger.x.hi}, 0.0, larger.t_max, "extend-right");
  add_piece(old.x, old.t_max, larger.t_max, "extend-top");
  std::sort(fresh.begin(), fresh.end(), by_time);

  PlanarPointSet out{{}, larger};
  out.points.reserve(existing.points.size() + fresh.size());
  std::merge(existing.points.begin(), existing.points.end(), fresh.begin(), fresh.end(),
             std::back_inserter(out.points), by_time);

  // Coordinate ties between old and fresh points have probability zero but
  // are still resolved by nudging the fresh point.
  for (bool dirty = true; dirty;) {
    dirty = false;
    for (std::size_t i = 1; i < out.points.size(); ++i) {
      if (out.points[i].t != out.points[i - 1].t) continue;
      std::size_t j = in_old(out.points[i]) ? i - 1 : i;
      out.points[j].t = std::nextafter(out.points[j].t, larger.t_max + 1.0);
      dirty = true;
    }
    if (dirty) std::stable_sort(out.points.begin(), out.points.end(), by_time);
  }
  std::vector<SpaceTimePoint> xs = sorted_by_space(out.points, larger.x);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i].x != xs[i - 1].x) continue;
    SpaceTimePoint victim = in_old(xs[i]) ? xs[i - 1] : xs[i];
    auto it = std::find(out.points.begin(), out.points.end(), victim);
    it->x = std::nextafter(it->x, it->x < old.x.lo ? larger.x.lo - 1.0 : larger.x.hi + 1.0);
  }
  return out;
}

namespace {

template <class Fn>
void for_each_tile(Interval window, double tile, Fn&& fn) {
  if (!(tile > 0.0)) throw InvalidParameter("tile width must be positive");
  const auto first = static_cast<std::int64_t>(std::floor(window.lo / tile));
  const auto last = static_cast<std::int64_t>(std::floor(window.hi / tile));
  for (std::int64_t k = first; k <= last; ++k)
    fn(k, Interval{static_cast<double>(k) * tile, static_cast<double>(k + 1) * tile});
}

}  // namespace

LinePointSet sample_poisson_line_tiled(double rate, Interval window, const RngStream& stream, double tile) {
  require_window(window);
  LinePointSet out{{}, rate, window};
  for_each_tile(window, tile, [&](std::int64_t k, Interval cell) {
    auto piece = sample_poisson_line(rate, cell, stream.child("tile", k));
    for (double x : piece.positions)
      if (x < cell.hi && window.contains(x)) out.positions.push_back(x);
  });
  return out;
}

PlanarPointSet sample_planar_tiled(Rect window, const RngStream& stream, double tile) {
  require_rect(window);
  PlanarPointSet out{{}, window};
  for_each_tile(window.x, tile, [&](std::int64_t k, Interval cell) {
    auto piece = sample_planar_unit_poisson({cell, window.t_max}, stream.child("tile", k));
    for (const auto& p : piece.points)
      if (p.x < cell.hi && window.x.contains(p.x)) out.points.push_back(p);
  });
  bucket_sort(out.points, [](const SpaceTimePoint& p) { return p.t; }, Interval{0.0, window.t_max});
  // Tiles are independent, so equal times across tiles are possible in
  // finite precision; nudge the later copy upwards.
  for (std::size_t i = 1; i < out.points.size(); ++i)
    if (!(out.points[i].t > out.points[i - 1].t)) out.points[i].t = std::nextafter(out.points[i - 1].t, INFINITY);
  return out;
}

LinePointSet restrict_line(const LinePointSet& points, Interval window) {
  LinePointSet out{{}, points.rate, window};
  auto first = std::lower_bound(points.positions.begin(), points.positions.end(), window.lo);
  auto last = std::upper_bound(points.positions.begin(), points.positions.end(), window.hi);
  out.positions.assign(first, last);
  return out;
}

PlanarPointSet restrict_planar(const PlanarPointSet& points, Rect window) {
  PlanarPointSet out{{}, window};
  for (const auto& p : points.points) {
    if (p.t > window.t_max) break;
    if (window.x.contains(p.x)) out.points.push_back(p);
  }
  return out;
}

std::vector<SpaceTimePoint> sorted_by_space(std::span<const SpaceTimePoint> points, Interval range) {
  std::vector<SpaceTimePoint> out(points.begin(), points.end());
  if (range.length() > 0.0)
    bucket_sort(out, [](const SpaceTimePoint& p) { return p.x; }, range);
  else
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  return out;
}

}  // namespace hamlab

#include "hamlab/lpp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hamlab/dynamics.hpp"
#include "hamlab/errors.hpp"

namespace hamlab {

namespace {

void require_query(Interval config_window, const Rect& epochs, double x, double t) {
  if (!(t >= 0.0) || t > epochs.t_max) throw UncertifiedRegion("query time outside the sampled window");
  if (x < config_window.lo || x > config_window.hi) throw UncertifiedRegion("query position outside the configuration window");
  if (epochs.x.lo > config_window.lo || x > epochs.x.hi)
    throw UncertifiedRegion("epochs do not cover the query rectangle");
}

}  // namespace

std::int64_t lis_length(std::span<const SpaceTimePoint> t_sorted) {
  std::vector<double> tails;
  for (const auto& p : t_sorted) {
    auto it = std::lower_bound(tails.begin(), tails.end(), p.x);
    if (it == tails.end())
      tails.push_back(p.x);
    else
      *it = p.x;
  }
  return static_cast<std::int64_t>(tails.size());
}

std::int64_t lis_length(const PlanarPointSet& points, double z, double x, double t) {
  const Rect& w = points.window;
  if (z < w.x.lo || x > w.x.hi || t > w.t_max) throw UncertifiedRegion("rectangle exceeds the sampled window");
  if (!(x > z) || !(t > 0.0)) return 0;
  std::vector<double> tails;
  for (const auto& p : points.points) {
    if (p.t > t) break;
    if (p.x <= z || p.x > x) continue;
    auto it = std::lower_bound(tails.begin(), tails.end(), p.x);
    if (it == tails.end())
      tails.push_back(p.x);
    else
      *it = p.x;
  }
  return static_cast<std::int64_t>(tails.size());
}

FluxSolver::FluxSolver(const ParticleConfig& config, const PlanarPointSet& epochs)
    : FluxSolver(config.positions, config.window, epochs, config.left_density) {}

FluxSolver::FluxSolver(const std::vector<double>& sorted_positions, Interval window, const PlanarPointSet& epochs,
                       double left_density)
    : positions_(sorted_positions),
      window_(window),
      epoch_window_(epochs.window),
      by_space_(sorted_by_space(epochs.points, epochs.window.x)),
      density_(boundary_density(sorted_positions, window, left_density)) {}

FluxResult FluxSolver::query(double x, double t) const {
  require_query(window_, epoch_window_, x, t);
  const double left = window_.lo;
  const std::int64_t nu_x = signed_count(positions_, x);

  // Epochs in (left, x] and particles in (left, x], walked right to left.
  auto e_end = std::upper_bound(by_space_.begin(), by_space_.end(), x,
                                [](double v, const SpaceTimePoint& p) { return v < p.x; });
  auto e_begin = std::upper_bound(by_space_.begin(), e_end, left,
                                  [](double v, const SpaceTimePoint& p) { return v < p.x; });
  auto p_end = std::upper_bound(positions_.begin(), positions_.end(), x);
  auto p_begin = std::upper_bound(positions_.begin(), p_end, left);

  // Piles of decreasing-time chains, stored as -t so that they increase.
  std::vector<double> piles;
  auto add_epoch = [&](const SpaceTimePoint& e) {
    if (e.t > t) return;
    auto it = std::lower_bound(piles.begin(), piles.end(), -e.t);
    if (it == piles.end())
      piles.push_back(-e.t);
    else
      *it = -e.t;
  };

  FluxResult out;
  out.value = std::numeric_limits<std::int64_t>::min();
  std::int64_t particles_right = 0;
  double right_end = x;
  auto visit = [&](double b) {
    std::int64_t g = nu_x - particles_right + static_cast<std::int64_t>(piles.size());
    if (g > out.value) {
      out.value = g;
      out.y_sup = right_end;
      out.y_inf = b;
    } else if (g == out.value) {
      out.y_inf = b;
    }
    right_end = b;
  };

  auto e = e_end;
  auto p = p_end;
  while (e != e_begin || p != p_begin) {
    double b = -std::numeric_limits<double>::infinity();
    if (e != e_begin) b = std::max(b, std::prev(e)->x);
    if (p != p_begin) b = std::max(b, *std::prev(p));
    visit(b);
    while (e != e_begin && std::prev(e)->x == b) add_epoch(*--e);
    while (p != p_begin && *std::prev(p) == b) {
      --p;
      ++particles_right;
    }
  }
  visit(left);
  // Paths entering through the left edge collect the envelope's b0 + floor(s/d)
  // boundary points before time s; they sit just left of A, in time order.
  const BoundaryEnvelope env(density_, t);
  if (!env.unbounded()) {
    const std::int64_t g_left = nu_x - particles_right;
    const auto k_max = static_cast<std::int64_t>(std::floor(t / env.density));
    for (std::int64_t k = k_max; k >= 1; --k) add_epoch({left, static_cast<double>(k) * env.density});
    const std::int64_t entering = g_left + env.b0 + static_cast<std::int64_t>(piles.size());
    out.certified = out.value > entering;
  }
  return out;
}

FluxResult flux_variational(const ParticleConfig& config, const PlanarPointSet& epochs, double x, double t) {
  return FluxSolver(config, epochs).query(x, t);
}

FluxResult flux_naive_oracle(const ParticleConfig& config, const PlanarPointSet& epochs, double x, double t) {
  require_query(config.window, epochs.window, x, t);
  const double left = config.window.lo;
  std::vector<double> breaks{left};
  for (double p : config.positions)
    if (p > left && p <= x) breaks.push_back(p);
  for (const auto& e : epochs.points)
    if (e.t <= t && e.x > left && e.x <= x) breaks.push_back(e.x);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  std::vector<std::int64_t> g(breaks.size());
  for (std::size_t i = 0; i < breaks.size(); ++i)
    g[i] = profile_count(config, breaks[i]) + lis_length(epochs, breaks[i], x, t);

  FluxResult out;
  out.value = *std::max_element(g.begin(), g.end());
  const auto first = static_cast<std::size_t>(std::find(g.begin(), g.end(), out.value) - g.begin());
  const auto last = g.size() - 1 - static_cast<std::size_t>(std::find(g.rbegin(), g.rend(), out.value) - g.rbegin());
  out.y_inf = breaks[first];
  out.y_sup = last + 1 < breaks.size() ? breaks[last + 1] : x;

  const BoundaryEnvelope env(boundary_density(config.positions, config.window, config.left_density), t);
  if (!env.unbounded()) {
    // Boundary points on a slanted line just left of A, so they chain with
    // each other and with every epoch right of A that comes later.
    std::vector<SpaceTimePoint> pts;
    const auto k_max = static_cast<std::int64_t>(std::floor(t / env.density));
    for (std::int64_t k = 1; k <= k_max; ++k)
      pts.push_back({left - 1e-9 * static_cast<double>(k_max + 1 - k), static_cast<double>(k) * env.density});
    for (const auto& e : epochs.points)
      if (e.t <= t && e.x > left && e.x <= x) pts.push_back(e);
    std::sort(pts.begin(), pts.end(), [](const SpaceTimePoint& a, const SpaceTimePoint& b) { return a.t < b.t; });
    const std::int64_t entering = profile_count(config, left) + env.b0 + lis_length(pts);
    out.certified = out.value > entering;
  }
  return out;
}

}  // namespace hamlab

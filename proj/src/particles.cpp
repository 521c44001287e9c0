#include "hamlab/particles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "hamlab/errors.hpp"

namespace hamlab {

ParticleConfig ParticleConfig::from_line(const LinePointSet& line, ParticleClass cls, std::int64_t first_id) {
  ParticleConfig out;
  out.positions = line.positions;
  out.classes.assign(line.positions.size(), cls);
  out.ids.resize(line.positions.size());
  std::iota(out.ids.begin(), out.ids.end(), first_id);
  out.window = line.window;
  out.left_density = line.rate;
  return out;
}

ParticleConfig ParticleConfig::from_positions(std::vector<double> positions, Interval window, ParticleClass cls) {
  std::sort(positions.begin(), positions.end());
  LinePointSet line{std::move(positions), 1.0, window};
  ParticleConfig out = from_line(line, cls);
  out.left_density = std::numeric_limits<double>::quiet_NaN();
  out.validate();
  return out;
}

void ParticleConfig::validate() const {
  if (classes.size() != positions.size() || ids.size() != positions.size())
    throw InvalidParameter("classes and ids must align with positions");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!std::isfinite(positions[i]) || !window.contains(positions[i]))
      throw InvalidParameter("particle outside window");
    if (i > 0 && !(positions[i - 1] < positions[i])) throw InvalidParameter("positions must be strictly increasing");
  }
  std::unordered_set<std::int64_t> seen(ids.begin(), ids.end());
  if (seen.size() != ids.size()) throw InvalidParameter("particle ids must be unique");
}

std::vector<double> ParticleConfig::positions_of(ClassFilter filter) const {
  std::vector<double> out;
  out.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (passes(filter, classes[i])) out.push_back(positions[i]);
  return out;
}

std::int64_t ParticleConfig::index_of_id(std::int64_t id) const {
  auto it = std::find(ids.begin(), ids.end(), id);
  return it == ids.end() ? -1 : static_cast<std::int64_t>(it - ids.begin());
}

std::int64_t ParticleConfig::max_id() const {
  return ids.empty() ? -1 : *std::max_element(ids.begin(), ids.end());
}

ParticleConfig merge_configs(const ParticleConfig& a, const ParticleConfig& b) {
  if (!(a.window == b.window)) throw InvalidParameter("configurations live on different windows");
  ParticleConfig out;
  out.window = a.window;
  out.left_density = a.left_density + b.left_density;
  const std::size_t n = a.size() + b.size();
  out.positions.reserve(n);
  out.classes.reserve(n);
  out.ids.reserve(n);
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    bool take_a = j == b.size() || (i < a.size() && a.positions[i] < b.positions[j]);
    if (i < a.size() && j < b.size() && a.positions[i] == b.positions[j])
      throw InvalidParameter("configurations share an atom");
    const ParticleConfig& src = take_a ? a : b;
    std::size_t& k = take_a ? i : j;
    out.positions.push_back(src.positions[k]);
    out.classes.push_back(src.classes[k]);
    out.ids.push_back(src.ids[k]);
    ++k;
  }
  return out;
}

ParticleConfig with_atom(const ParticleConfig& config, double position, ParticleClass cls, std::int64_t id) {
  ParticleConfig atom;
  atom.window = config.window;
  atom.positions = {position};
  atom.classes = {cls};
  atom.ids = {id};
  if (!config.window.contains(position)) throw InvalidParameter("atom outside window");
  atom.left_density = 0.0;
  return merge_configs(config, atom);
}

ParticleConfig select_class(const ParticleConfig& config, ParticleClass cls) {
  ParticleConfig out;
  out.window = config.window;
  for (std::size_t i = 0; i < config.size(); ++i) {
    if (config.classes[i] != cls) continue;
    out.positions.push_back(config.positions[i]);
    out.classes.push_back(cls);
    out.ids.push_back(config.ids[i]);
  }
  return out;
}

double boundary_density(std::span<const double> sorted, Interval window, double known) {
  if (known > 0.0 && std::isfinite(known)) return known;
  const std::size_t m = std::min<std::size_t>(sorted.size(), 64);
  if (m == 0) return 0.0;
  const double span = sorted[m - 1] - window.lo;
  if (!(span > 0.0)) return 0.0;
  // Lower confidence side of m / span, so the boundary envelope errs wide.
  const double est = static_cast<double>(m) / span;
  return est * std::max(0.25, 1.0 - 3.0 / std::sqrt(static_cast<double>(m)));
}

std::int64_t signed_count(const std::vector<double>& sorted, double x) {
  auto origin = std::upper_bound(sorted.begin(), sorted.end(), 0.0);
  auto at = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<std::int64_t>(at - origin);
}

std::int64_t profile_count(const ParticleConfig& config, double x, ClassFilter filter) {
  if (!config.window.contains(x)) throw UncertifiedRegion("profile query outside the sampled window");
  if (filter == ClassFilter::all) return signed_count(config.positions, x);
  return signed_count(config.positions_of(filter), x);
}

}  // namespace hamlab

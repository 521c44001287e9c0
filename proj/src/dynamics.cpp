#include "hamlab/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <unordered_map>

#include "hamlab/errors.hpp"

namespace hamlab {

double TrajectoryRecord::position_at(double t) const {
  auto it = std::upper_bound(jumps.begin(), jumps.end(), t,
                             [](double v, const std::pair<double, double>& j) { return v < j.first; });
  return it == jumps.begin() ? initial_position : std::prev(it)->second;
}

BoundaryEnvelope::BoundaryEnvelope(double density_, double t_end_) : density(density_), t_end(t_end_) {
  if (!unbounded()) b0 = static_cast<std::int64_t>(std::ceil(5.0 * std::sqrt(t_end / density) + 5.0));
}

std::vector<double> BoundaryEnvelope::sink_times() const {
  std::vector<double> out;
  if (unbounded()) return out;
  for (std::int64_t k = 1; static_cast<double>(k) * density <= t_end; ++k) out.push_back(static_cast<double>(k) * density);
  return out;
}

double certificate_margin(double density, double t) {
  const BoundaryEnvelope env(density, t);
  if (env.unbounded()) throw InvalidParameter("certificate_margin needs a positive density");
  const double a = std::sqrt(t / density);
  const auto deficit = [&](double delta) {
    const double lead = std::sqrt(a * a + density * delta) - a;
    return lead * lead - static_cast<double>(env.b0) - 2.5 * std::sqrt(2.0 * density * delta) -
           2.5 * std::cbrt(t) - 4.0;
  };
  double hi = 1.0 / density;
  while (deficit(hi) < 0.0) hi *= 2.0;
  double lo = hi / 2.0;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    (deficit(mid) < 0.0 ? lo : hi) = mid;
  }
  return hi;
}

namespace {

void fenwick_add(std::vector<std::int64_t>& tree, std::size_t i, std::int64_t v) {
  for (++i; i <= tree.size(); i += i & (~i + 1)) tree[i - 1] += v;
}

std::int64_t fenwick_prefix(const std::vector<std::int64_t>& tree, std::size_t i) {  // sum over [0, i]
  std::int64_t out = 0;
  for (++i; i > 0; i -= i & (~i + 1)) out += tree[i - 1];
  return out;
}

}  // namespace

FrontierTracker::FrontierTracker(const BoundaryEnvelope& envelope, std::size_t slots)
    : sinks_(envelope.sink_times()),
      k_(envelope.b0),
      unbounded_(envelope.unbounded()),
      extra_(slots, 1),
      extra_tree_(std::max<std::size_t>(slots, 16), 0),
      clean_tree_(extra_tree_.size(), 0) {
  // G starts empty, so every initial particle is extra.
  for (std::size_t i = 0; i < slots; ++i) fenwick_add(extra_tree_, i, 1);
  extra_count_ = static_cast<std::int64_t>(slots);
}

std::size_t FrontierTracker::kth(const std::vector<std::int64_t>& tree, std::int64_t k) const {
  if (k <= 0) return extra_.size();
  std::size_t pos = 0, step = 1;
  while (step * 2 <= tree.size()) step *= 2;
  for (; step > 0; step /= 2)
    if (pos + step <= tree.size() && tree[pos + step - 1] < k) {
      pos += step;
      k -= tree[pos - 1];
    }
  return pos < extra_.size() ? pos : extra_.size();
}

void FrontierTracker::set_extra(std::size_t slot, bool on) {
  if (static_cast<bool>(extra_[slot]) == on) return;
  extra_[slot] = on ? 1 : 0;
  fenwick_add(extra_tree_, slot, on ? 1 : -1);
  fenwick_add(clean_tree_, slot, on ? -1 : 1);
  extra_count_ += on ? 1 : -1;
}

void FrontierTracker::advance(double s) {
  while (next_sink_ < sinks_.size() && sinks_[next_sink_] <= s) {
    ++next_sink_;
    ++k_;
    // G loses its leftmost particle, which W keeps.
    const std::size_t g = kth(clean_tree_, 1);
    if (g < extra_.size()) set_extra(g, true);
  }
}

void FrontierTracker::moved(std::size_t slot, bool spawned) {
  if (spawned) {
    // Both systems spawn at the epoch.
    extra_.push_back(0);
    if (extra_.size() > extra_tree_.size()) {
      extra_tree_.assign(extra_tree_.size() * 2, 0);
      clean_tree_.assign(extra_tree_.size(), 0);
      for (std::size_t i = 0; i < extra_.size(); ++i) fenwick_add(extra_[i] ? extra_tree_ : clean_tree_, i, 1);
    } else {
      fenwick_add(clean_tree_, extra_.size() - 1, 1);
    }
    return;
  }
  if (!extra_[slot]) return;
  // G moved its next particle right of the slot instead (or spawned when
  // there is none); that particle is now the extra one.
  set_extra(slot, false);
  const std::size_t next = kth(clean_tree_, fenwick_prefix(clean_tree_, slot) + 1);
  if (next < extra_.size()) set_extra(next, true);
}

double FrontierTracker::frontier(std::span<const double> positions) const {
  if (unbounded_ || k_ > extra_count_) return kInf;
  if (k_ == 0) return -kInf;
  return positions[kth(extra_tree_, k_)];
}

namespace {
std::atomic<bool> spawn_fault{false};
}

void set_spawn_fault(bool on) { spawn_fault = on; }

HammersleySystem::HammersleySystem(const ParticleConfig& initial)
    : positions_(initial.positions),
      ids_(initial.ids),
      classes_(initial.classes),
      window_(initial.window),
      left_density_(initial.left_density),
      next_id_(initial.max_id() + 1) {}

HammersleySystem::Move HammersleySystem::apply(double x) {
  auto it = std::upper_bound(positions_.begin(), positions_.end(), x);
  if (it == positions_.end()) {
    positions_.push_back(spawn_fault.load(std::memory_order_relaxed) ? std::max(x, window_.hi) : x);
    ids_.push_back(next_id_++);
    classes_.push_back(ParticleClass::first);
    return {positions_.size() - 1, kInf, true};
  }
  Move m{static_cast<std::size_t>(it - positions_.begin()), *it, false};
  *it = x;
  return m;
}

ParticleConfig HammersleySystem::snapshot() const {
  ParticleConfig c;
  c.positions = positions_;
  c.ids = ids_;
  c.classes = classes_;
  c.window = window_;
  c.left_density = left_density_;
  return c;
}

void require_epoch_cover(const PlanarPointSet& epochs, Interval window, double t_end) {
  if (!epochs.window.x.contains(window) || epochs.window.t_max < t_end)
    throw InvalidParameter("epochs do not cover the configuration window up to t_end");
}

namespace {

// Visits epochs inside `window` with time <= t_end, asserting strict time order.
template <class Fn>
void for_each_epoch(const PlanarPointSet& epochs, Interval window, double t_end, Fn&& fn) {
  double prev = -kInf;
  for (const auto& e : epochs.points) {
    if (e.t > t_end) break;
    if (!(e.t > prev)) throw InvalidParameter("epoch times must be strictly increasing");
    prev = e.t;
    if (window.contains(e.x)) fn(e);
  }
}

FrontierTracker make_tracker(const ParticleConfig& c, double t_end) {
  return FrontierTracker(BoundaryEnvelope(boundary_density(c.positions, c.window, c.left_density), t_end), c.size());
}

void mark_violation(TrajectoryRecord& rec, double time) {
  if (!rec.certified) return;
  rec.certified = false;
  rec.violation_time = time;
}

}  // namespace

std::pair<ConfigurationState, EventLog> evolve(const ParticleConfig& initial, const PlanarPointSet& epochs,
                                               double t_end) {
  initial.validate();
  require_epoch_cover(epochs, initial.window, t_end);
  HammersleySystem sys(initial);
  auto tracker = make_tracker(initial, t_end);
  EventLog log;
  for_each_epoch(epochs, initial.window, t_end, [&](const SpaceTimePoint& e) {
    tracker.advance(e.t);
    auto m = sys.apply(e.x);
    tracker.moved(m.slot, m.spawned);
    log.push_back({e.t, e.x, sys.id_of(m.slot), m.spawned, m.from, e.x});
  });
  tracker.advance(t_end);
  ConfigurationState state{sys.snapshot(), t_end, tracker.frontier(sys.positions())};
  return {std::move(state), std::move(log)};
}

ParticleConfig replay(const ParticleConfig& initial, const EventLog& log, double t) {
  ParticleConfig out = initial;
  std::unordered_map<std::int64_t, std::size_t> slot;
  for (std::size_t i = 0; i < out.size(); ++i) slot[out.ids[i]] = i;
  for (const auto& r : log) {
    if (r.time > t) break;
    if (r.spawned) {
      if (!out.empty() && !(out.positions.back() < r.to)) throw InvalidParameter("spawn record not at the right end");
      slot[r.id] = out.size();
      out.positions.push_back(r.to);
      out.ids.push_back(r.id);
      out.classes.push_back(ParticleClass::first);
      continue;
    }
    auto it = slot.find(r.id);
    if (it == slot.end() || out.positions[it->second] != r.from) throw InvalidParameter("log does not match configuration");
    out.positions[it->second] = r.to;
  }
  return out;
}

TrajectoryRecord tagged_trajectory(const ParticleConfig& initial, std::int64_t tagged_id,
                                   const PlanarPointSet& epochs, double t_end, Certification mode) {
  initial.validate();
  require_epoch_cover(epochs, initial.window, t_end);
  const std::int64_t idx = initial.index_of_id(tagged_id);
  if (idx < 0) throw InvalidParameter("tagged id not present");
  const auto tagged = static_cast<std::size_t>(idx);

  TrajectoryRecord rec{tagged_id, initial.positions[tagged], {}, true, kInf};
  HammersleySystem sys(initial);
  auto tracker = make_tracker(initial, t_end);
  double position = initial.positions[tagged];
  tracker.advance(0.0);
  if (tracker.frontier(sys.positions()) >= position) mark_violation(rec, 0.0);
  for_each_epoch(epochs, initial.window, t_end, [&](const SpaceTimePoint& e) {
    if (!rec.certified) return;
    tracker.advance(e.t);
    if (tracker.frontier(sys.positions()) >= position) return mark_violation(rec, e.t);
    auto m = sys.apply(e.x);
    if (m.slot == tagged) {
      position = e.x;
      rec.jumps.emplace_back(e.t, position);
    }
    tracker.moved(m.slot, m.spawned);
    if (tracker.frontier(sys.positions()) >= position) mark_violation(rec, e.t);
  });
  tracker.advance(t_end);
  if (tracker.frontier(sys.positions()) >= position) mark_violation(rec, t_end);
  if (!rec.certified && mode == Certification::strict)
    throw UncertifiedTrajectory("tagged particle reached the contamination frontier", rec.violation_time);
  return rec;
}

TrajectoryRecord coupled_discrepancy(const ParticleConfig& base, const PlanarPointSet& epochs, double t_end,
                                     Certification mode) {
  base.validate();
  require_epoch_cover(epochs, base.window, t_end);
  if (!base.window.contains(0.0)) throw InvalidParameter("window must contain the origin");
  if (std::binary_search(base.positions.begin(), base.positions.end(), 0.0))
    throw InvalidParameter("base already has an atom at the origin");

  const std::int64_t z_id = base.max_id() + 1;
  ParticleConfig augmented = with_atom(base, 0.0, ParticleClass::second, z_id);
  std::size_t rank = static_cast<std::size_t>(augmented.index_of_id(z_id));
  TrajectoryRecord rec{z_id, 0.0, {}, true, kInf};

  HammersleySystem sys(augmented);
  auto tracker = make_tracker(augmented, t_end);
  double z = 0.0;
  tracker.advance(0.0);
  if (tracker.frontier(sys.positions()) >= z) mark_violation(rec, 0.0);
  for_each_epoch(epochs, base.window, t_end, [&](const SpaceTimePoint& e) {
    if (!rec.certified) return;
    tracker.advance(e.t);
    if (tracker.frontier(sys.positions()) >= z) return mark_violation(rec, e.t);
    auto m = sys.apply(e.x);
    if (m.slot == rank) {
      // The augmented system moved the discrepancy; the base system moved
      // the next particle instead, which becomes the new discrepancy.
      if (rank + 1 >= sys.positions().size()) {
        mark_violation(rec, e.t);
        return;
      }
      ++rank;
      z = sys.positions()[rank];
      rec.jumps.emplace_back(e.t, z);
    }
    tracker.moved(m.slot, m.spawned);
    if (tracker.frontier(sys.positions()) >= z) mark_violation(rec, e.t);
  });
  tracker.advance(t_end);
  if (tracker.frontier(sys.positions()) >= z) mark_violation(rec, t_end);
  if (!rec.certified && mode == Certification::strict)
    throw UncertifiedTrajectory("discrepancy left the certified region", rec.violation_time);
  return rec;
}

PriorityResult priority_dynamics(const ParticleConfig& first, const ParticleConfig& second,
                                 const PlanarPointSet& epochs, double t_end) {
  first.validate();
  second.validate();
  if (!(first.window == second.window)) throw InvalidParameter("first and second configurations use different windows");
  require_epoch_cover(epochs, first.window, t_end);
  {
    // Disjointness check (throws on a shared atom).
    (void)merge_configs(first, second);
  }

  HammersleySystem lead(first);
  auto tracker = make_tracker(first, t_end);
  std::vector<double> sec = second.positions;
  PriorityResult out;
  out.second.reserve(sec.size());
  for (std::size_t i = 0; i < sec.size(); ++i) out.second.push_back({second.ids[i], sec[i], {}, true, kInf});

  std::size_t contaminated = 0;
  auto sweep_contamination = [&](double time) {
    const double d = tracker.frontier(lead.positions());
    while (contaminated < sec.size() && sec[contaminated] <= d) mark_violation(out.second[contaminated++], time);
  };
  tracker.advance(0.0);
  sweep_contamination(0.0);

  for_each_epoch(epochs, first.window, t_end, [&](const SpaceTimePoint& e) {
    tracker.advance(e.t);
    sweep_contamination(e.t);
    auto m = lead.apply(e.x);
    const double y = m.from;
    auto lo = static_cast<std::size_t>(std::upper_bound(sec.begin(), sec.end(), e.x) - sec.begin());
    auto hi = static_cast<std::size_t>(std::lower_bound(sec.begin() + lo, sec.end(), y) - sec.begin());
    if (lo < hi) {
      // Second-class particles in (x, y) each take the place of the next one;
      // the last lands on y.
      for (std::size_t i = lo; i + 1 < hi; ++i) {
        sec[i] = sec[i + 1];
        out.second[i].jumps.emplace_back(e.t, sec[i]);
      }
      if (y < kInf) {
        sec[hi - 1] = y;
        out.second[hi - 1].jumps.emplace_back(e.t, y);
      } else {
        // Its target lies beyond the window.
        mark_violation(out.second[hi - 1], e.t);
        sec.pop_back();
        contaminated = std::min(contaminated, sec.size());
      }
    }
    tracker.moved(m.slot, m.spawned);
    sweep_contamination(e.t);
  });
  tracker.advance(t_end);
  sweep_contamination(t_end);

  ParticleConfig sec_config;
  sec_config.window = second.window;
  sec_config.positions = sec;
  sec_config.classes.assign(sec.size(), ParticleClass::second);
  sec_config.ids.assign(second.ids.begin(), second.ids.begin() + static_cast<std::ptrdiff_t>(sec.size()));
  ParticleConfig lead_config = lead.snapshot();
  // Spawned first-class ids must not collide with second-class ids.
  const std::int64_t offset = std::max(first.max_id(), second.max_id()) + 1;
  for (std::size_t i = first.size(); i < lead_config.size(); ++i) lead_config.ids[i] = offset + static_cast<std::int64_t>(i - first.size());
  sec_config.left_density = second.left_density;
  out.state = {merge_configs(lead_config, sec_config), t_end, tracker.frontier(lead.positions())};
  return out;
}

namespace {

// Label-crossing count for a class whose members keep their order and can
// only be lost at the right end (or gained there, with label +inf).
std::int64_t crossing_count(const std::vector<double>& labels, const std::vector<double>& current, double x) {
  std::int64_t count = 0;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const bool left_of_x = k < current.size() && current[k] <= x;
    if (labels[k] > 0.0 && left_of_x) ++count;
    if (labels[k] <= 0.0 && !left_of_x) --count;
  }
  for (std::size_t k = labels.size(); k < current.size(); ++k)
    if (current[k] <= x) ++count;  // entered from beyond the window: label > 0
  return count;
}

}  // namespace

std::int64_t flux_from_dynamics(const EventLog& log, const ParticleConfig& initial, double x, double t,
                                ClassFilter filter) {
  initial.validate();
  if (!initial.window.contains(x) || !initial.window.contains(0.0))
    throw UncertifiedRegion("flux query outside the window");

  // Replay the union by slot and carry classes along with the priority rule.
  std::vector<double> pos = initial.positions;
  std::vector<ParticleClass> cls = initial.classes;
  std::vector<double> id_label = initial.positions;
  std::unordered_map<std::int64_t, std::size_t> slot;
  for (std::size_t i = 0; i < pos.size(); ++i) slot[initial.ids[i]] = i;

  const ParticleConfig lead_initial = select_class(initial, ParticleClass::first);
  HammersleySystem lead(lead_initial);
  auto union_tracker = make_tracker(initial, t);
  auto lead_tracker = make_tracker(lead_initial, t);
  union_tracker.advance(0.0);
  lead_tracker.advance(0.0);
  double prev = -kInf;
  for (const auto& r : log) {
    if (r.time > t) break;
    if (!(r.time > prev)) throw InvalidParameter("log times must be strictly increasing");
    prev = r.time;
    union_tracker.advance(r.time);
    lead_tracker.advance(r.time);
    std::size_t moved_slot = pos.size();
    if (r.spawned) {
      slot[r.id] = pos.size();
      pos.push_back(r.to);
      cls.push_back(ParticleClass::first);
      id_label.push_back(kInf);
    } else {
      const std::size_t j = slot.at(r.id);
      moved_slot = j;
      pos[j] = r.to;
      if (cls[j] == ParticleClass::second) {
        std::size_t m = j + 1;
        while (m < pos.size() && cls[m] != ParticleClass::first) ++m;
        cls[j] = ParticleClass::first;
        if (m < pos.size()) cls[m] = ParticleClass::second;
      }
    }
    union_tracker.moved(moved_slot, r.spawned);
    auto m = lead.apply(r.epoch_x);
    lead_tracker.moved(m.slot, m.spawned);
  }
  union_tracker.advance(t);
  lead_tracker.advance(t);

  const double frontier = filter == ClassFilter::all ? union_tracker.frontier(pos) : lead_tracker.frontier(lead.positions());
  if (!(x >= frontier)) throw UncertifiedRegion("flux query left of the contamination frontier");

  if (filter == ClassFilter::all) {
    std::int64_t count = 0;
    for (std::size_t k = 0; k < pos.size(); ++k) {
      if (id_label[k] > 0.0 && pos[k] <= x) ++count;
      if (id_label[k] <= 0.0 && pos[k] > x) --count;
    }
    return count;
  }
  const ParticleClass want = filter == ClassFilter::first ? ParticleClass::first : ParticleClass::second;
  std::vector<double> labels, current;
  for (std::size_t k = 0; k < initial.size(); ++k)
    if (initial.classes[k] == want) labels.push_back(initial.positions[k]);
  for (std::size_t k = 0; k < pos.size(); ++k)
    if (cls[k] == want) current.push_back(pos[k]);
  return crossing_count(labels, current, x);
}

std::vector<double> west_process(const ParticleConfig& initial, const PlanarPointSet& epochs, double x,
                                 double t_end) {
  initial.validate();
  require_epoch_cover(epochs, initial.window, t_end);
  if (!(x < 0.0) || !initial.window.contains(x)) throw InvalidParameter("west process needs x < 0 inside the window");
  HammersleySystem sys(initial);
  auto tracker = make_tracker(initial, t_end);
  std::vector<double> jumps;
  for_each_epoch(epochs, initial.window, t_end, [&](const SpaceTimePoint& e) {
    tracker.advance(e.t);
    auto m = sys.apply(e.x);
    if (e.x <= x && m.from > x) jumps.push_back(e.t);
    tracker.moved(m.slot, m.spawned);
  });
  tracker.advance(t_end);
  if (!(x >= tracker.frontier(sys.positions()))) throw UncertifiedRegion("west process position left of the contamination frontier");
  return jumps;
}

double chi_min(const ConfigurationState& state, const ParticleConfig& initial, double x) {
  if (!(x >= state.contamination_frontier)) throw UncertifiedRegion("chi query left of the contamination frontier");
  const auto& c = state.config;
  auto it = std::upper_bound(c.positions.begin(), c.positions.end(), x);
  if (it == c.positions.end()) throw UncertifiedRegion("no particle right of x inside the window");
  const std::int64_t idx = initial.index_of_id(c.ids[static_cast<std::size_t>(it - c.positions.begin())]);
  if (idx < 0) throw UncertifiedRegion("particle right of x entered from beyond the window");
  return initial.positions[static_cast<std::size_t>(idx)];
}

double chi_bar_max(const ConfigurationState& state, const ParticleConfig& initial_second, double x) {
  if (!(x >= state.contamination_frontier)) throw UncertifiedRegion("chi query left of the contamination frontier");
  std::size_t k = 0;
  const auto& c = state.config;
  for (std::size_t i = 0; i < c.size() && c.positions[i] <= x; ++i)
    if (c.classes[i] == ParticleClass::second) ++k;
  if (k == 0) throw UncertifiedRegion("no second-class particle at or left of x inside the window");
  if (k > initial_second.size()) throw InvalidParameter("state has more second-class particles than the initial data");
  return initial_second.positions[k - 1];
}

}  // namespace hamlab

#include "hamlab/queueing.hpp"

#include <algorithm>
#include <stdexcept>

#include "hamlab/errors.hpp"

namespace hamlab {

std::int64_t QueueSample::length_at(double x) const {
  // length_path is sorted along the sweep; find the last event not past x.
  auto not_past = [&](double pos) { return direction == QueueDirection::rightward ? pos <= x : pos >= x; };
  auto it = std::partition_point(length_path.begin(), length_path.end(),
                                 [&](const std::pair<double, std::int64_t>& e) { return not_past(e.first); });
  return it == length_path.begin() ? initial_len : std::prev(it)->second;
}

QueueSample mm1_path(const LinePointSet& arrivals, const LinePointSet& services, std::int64_t initial_len,
                     QueueDirection direction, bool check_rates) {
  if (check_rates && !(arrivals.rate < services.rate)) throw InvalidParameter("arrival rate must be below service rate");
  if (!(arrivals.window == services.window)) throw InvalidParameter("arrivals and services use different windows");
  if (initial_len < 0) throw InvalidParameter("initial queue length must be non-negative");

  QueueSample q;
  q.arrivals = arrivals;
  q.services = services;
  q.initial_len = initial_len;
  q.direction = direction;
  // Burke: departures carry the arrival rate, unused services the rest.
  q.departures = {{}, arrivals.rate, services.window};
  q.unused = {{}, services.rate - arrivals.rate, services.window};
  q.length_path.reserve(arrivals.positions.size() + services.positions.size());

  const auto& a = arrivals.positions;
  const auto& s = services.positions;
  const bool right = direction == QueueDirection::rightward;
  // Walk both arrays in sweep order.
  std::ptrdiff_t na = static_cast<std::ptrdiff_t>(a.size()), ns = static_cast<std::ptrdiff_t>(s.size());
  std::ptrdiff_t i = right ? 0 : na - 1, j = right ? 0 : ns - 1;
  const std::ptrdiff_t step = right ? 1 : -1;
  auto in_a = [&] { return i >= 0 && i < na; };
  auto in_s = [&] { return j >= 0 && j < ns; };
  auto before = [&](double p, double r) { return right ? p <= r : p >= r; };

  std::int64_t len = initial_len;
  while (in_a() || in_s()) {
    if (in_a() && (!in_s() || before(a[i], s[j]))) {
      ++len;
      q.length_path.emplace_back(a[i], len);
      i += step;
      continue;
    }
    if (len > 0) {
      --len;
      q.departures.positions.push_back(s[j]);
    } else {
      q.unused.positions.push_back(s[j]);
    }
    q.length_path.emplace_back(s[j], len);
    j += step;
  }
  if (!right) {
    std::reverse(q.departures.positions.begin(), q.departures.positions.end());
    std::reverse(q.unused.positions.begin(), q.unused.positions.end());
  }
  return q;
}

namespace {

void require_rates(double rho, double lambda) {
  if (!(rho > 0.0) || !(rho < lambda)) throw InvalidParameter("need 0 < rho < lambda");
}

ParticleConfig config_of(const std::vector<double>& sorted, const std::vector<std::int64_t>& ids, Interval window,
                         ParticleClass cls, double left_density) {
  ParticleConfig c;
  c.left_density = left_density;
  c.positions = sorted;
  c.ids = ids;
  c.classes.assign(sorted.size(), cls);
  c.window = window;
  return c;
}

// Ids follow rank in the merged sorted order of all given positions.
std::vector<std::int64_t> ranks_in(const std::vector<double>& subset, const std::vector<double>& all_sorted) {
  std::vector<std::int64_t> ids;
  ids.reserve(subset.size());
  for (double p : subset)
    ids.push_back(static_cast<std::int64_t>(std::lower_bound(all_sorted.begin(), all_sorted.end(), p) - all_sorted.begin()));
  return ids;
}

}  // namespace

TwoClassSample two_class_from_queue(QueueSample queue) {
  const auto& all = queue.services.positions;
  const Interval w = queue.services.window;
  TwoClassSample out;
  out.first = config_of(queue.departures.positions, ranks_in(queue.departures.positions, all), w, ParticleClass::first,
                        queue.departures.rate);
  out.second = config_of(queue.unused.positions, ranks_in(queue.unused.positions, all), w, ParticleClass::second,
                         queue.unused.rate);
  out.queue = std::move(queue);
  return out;
}

TwoClassSample stationary_two_class(double rho, double lambda, Interval window, const RngStream& stream) {
  require_rates(rho, lambda);
  auto arrivals = sample_poisson_line(rho, window, stream.child("arrivals"));
  auto services = sample_poisson_line(lambda, window, stream.child("services"));
  Rng rng = stream.child("initial-length").rng();
  const std::int64_t len = rng.geometric(rho / lambda);
  return two_class_from_queue(mm1_path(arrivals, services, len, QueueDirection::leftward));
}

ConditionedSample condition_second_class_at_origin(double rho, double lambda, Interval window,
                                                   const RngStream& stream) {
  require_rates(rho, lambda);
  if (!(window.lo < 0.0 && 0.0 < window.hi)) throw InvalidParameter("origin must be interior to the window");
  const Interval left{window.lo, 0.0};
  // Tiled draws: enlarging the window leaves the sample near the origin unchanged.
  auto arrivals = sample_poisson_line_tiled(rho, left, stream.child("left-arrivals"));
  auto services = sample_poisson_line_tiled(lambda, left, stream.child("left-services"));
  // A draw landing exactly on 0 would collide with the conditioned atom.
  auto drop_origin = [](LinePointSet& l) { std::erase(l.positions, 0.0); };
  drop_origin(arrivals);
  drop_origin(services);
  auto queue = mm1_path(arrivals, services, 0, QueueDirection::leftward);
  auto right = sample_poisson_line_tiled(lambda, Interval{0.0, window.hi}, stream.child("right-services"));
  drop_origin(right);

  ConditionedSample out;
  out.left_departures = queue.departures.positions;
  out.left_unused.assign(queue.unused.positions.rbegin(), queue.unused.positions.rend());
  out.right_services = right.positions;
  out.k_plus_1 = stream.child("shock-length").rng().geometric(rho / lambda);

  std::vector<double> first_pos = out.left_departures;
  first_pos.insert(first_pos.end(), right.positions.begin(), right.positions.end());
  std::vector<double> second_pos = queue.unused.positions;
  second_pos.push_back(0.0);
  std::vector<double> all;
  std::merge(first_pos.begin(), first_pos.end(), second_pos.begin(), second_pos.end(), std::back_inserter(all));
  out.first = config_of(first_pos, ranks_in(first_pos, all), window, ParticleClass::first, rho);
  out.second = config_of(second_pos, ranks_in(second_pos, all), window, ParticleClass::second, lambda - rho);
  return out;
}

DualPointSet dual_points(const ParticleConfig& initial, const PlanarPointSet& epochs, double t_end) {
  auto [state, log] = evolve(initial, epochs, t_end);
  DualPointSet out;
  const double lo = std::max(state.contamination_frontier, initial.window.lo);
  out.points.window = Rect{Interval{std::min(lo, initial.window.hi), initial.window.hi}, t_end};
  for (const auto& r : log) {
    if (r.spawned) continue;
    ++out.jump_count;
    // The frontier particle itself is not certified, only positions right of it.
    if (r.from > state.contamination_frontier) out.points.points.push_back({r.from, r.time});
  }
  return out;
}

TwoLineState two_line_process(const LinePointSet& alpha1, const LinePointSet& alpha2, const PlanarPointSet& epochs,
                              double t_end) {
  if (!alpha2.window.contains(alpha1.window) || alpha1.window.hi != alpha2.window.hi)
    throw InvalidParameter("alpha1 window must sit inside alpha2's and share its right edge");
  TwoLineState out;
  auto line2 = ParticleConfig::from_line(alpha2);
  auto evolved2 = evolve(line2, epochs, t_end);
  out.line2 = std::move(evolved2.first);
  out.log2 = std::move(evolved2.second);

  const double frontier2 = out.line2.contamination_frontier;
  if (!(alpha1.window.lo >= frontier2))
    throw UncertifiedRegion("second line is contaminated inside the first line's window");
  PlanarPointSet duals;
  duals.window = Rect{alpha1.window, t_end};
  for (const auto& r : out.log2)
    if (!r.spawned && r.from > frontier2 && alpha1.window.contains(r.from)) duals.points.push_back({r.from, r.time});

  auto evolved1 = evolve(ParticleConfig::from_line(alpha1), duals, t_end);
  out.line1 = std::move(evolved1.first);
  out.log1 = std::move(evolved1.second);
  return out;
}

namespace {

bool same_path(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  return a.initial_position == b.initial_position && a.jumps == b.jumps;
}

}  // namespace

ShockCouplingResult shock_coupling_experiment(double rho, double lambda, double t_end, Interval window,
                                              const RngStream& stream, std::span<const double> sample_times) {
  auto cond = condition_second_class_at_origin(rho, lambda, window, stream.child("condition"));
  auto epochs = sample_planar_tiled(Rect{window, t_end}, stream.child("epochs"));

  ShockCouplingResult out;
  out.k_plus_1 = cond.k_plus_1;
  const std::size_t n_left = cond.left_unused.size();
  const auto k1 = static_cast<std::size_t>(cond.k_plus_1);
  if (k1 >= n_left) throw UncertifiedRegion("window holds too few unused services left of the origin");

  auto stat = priority_dynamics(cond.first, cond.second, epochs, t_end);
  // second-class rank order: unused services ascending, then the origin
  out.z_stat = stat.second[n_left];
  out.stat_state = std::move(stat.state);

  // The longer queue holds k+1 customers right of the origin and does not
  // serve at the origin itself (the second-class atom), so left of 0 it is a
  // stationary queue and its departures are exactly Poisson(rho). Its k+1
  // extra customers take the unused services nearest the origin; the next
  // unused service is the first one both queues leave unused and hosts the
  // ghost.
  std::vector<double> first_pos = cond.left_departures;
  for (std::size_t j = 0; j < k1; ++j) first_pos.push_back(cond.left_unused[j]);
  std::sort(first_pos.begin(), first_pos.end());
  first_pos.insert(first_pos.end(), cond.right_services.begin(), cond.right_services.end());
  const double ghost = cond.left_unused[k1];

  ParticleConfig first = config_of(first_pos, {}, window, ParticleClass::first, rho);
  first.ids.resize(first_pos.size());
  for (std::size_t i = 0; i < first_pos.size(); ++i) first.ids[i] = static_cast<std::int64_t>(i);
  const auto base = static_cast<std::int64_t>(first_pos.size());
  ParticleConfig second = config_of({ghost, 0.0}, {base, base + 1}, window, ParticleClass::second, lambda - rho);

  auto shock = priority_dynamics(first, second, epochs, t_end);
  out.z_lower = shock.second[0];
  out.z_shock = shock.second[1];

  // The ghost sits left of the shock particle and must not move it.
  auto alone = coupled_discrepancy(first, epochs, t_end, Certification::lenient);
  if (alone.certified && out.z_shock.certified && !same_path(alone, out.z_shock))
    throw std::logic_error("ghost particle altered the shock trajectory");
  const auto& partner = stat.second[n_left - 1 - k1];
  if (partner.certified && out.z_lower.certified && !same_path(partner, out.z_lower))
    throw std::logic_error("ghost particle does not follow its stationary partner");
  if (k1 == 0 && out.z_stat.certified && out.z_shock.certified && !same_path(out.z_stat, out.z_shock))
    throw std::logic_error("equal queues gave different shock and stationary paths");
  out.certified = out.z_shock.certified && out.z_stat.certified && out.z_lower.certified;
  for (double t : sample_times) out.j_samples.emplace_back(t, out.z_stat.position_at(t) - out.z_lower.position_at(t));
  return out;
}

}  // namespace hamlab

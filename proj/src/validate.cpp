#include "hamlab/validate.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <sstream>
#include <thread>

#include "hamlab/dynamics.hpp"
#include "hamlab/errors.hpp"
#include "hamlab/lpp.hpp"
#include "hamlab/particles.hpp"
#include "hamlab/point_process.hpp"

namespace hamlab {

namespace {

struct Mismatch {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Mismatch{what};
}

template <class T>
std::string str(const T& v) {
  std::ostringstream o;
  o.precision(17);
  o << v;
  return o.str();
}

struct Instance {
  double lambda = 1.0;
  double rho = 0.5;
  double t = 1.0;
  Interval w;
  LinePointSet nrho;
  LinePointSet nlam;
  ParticleConfig lam;     // nu_lambda, all first class
  ParticleConfig uni;     // nu_lambda with nu_rho first class, the rest second class
  ParticleConfig first;   // nu_rho
  ParticleConfig second;  // nu_lambda - nu_rho
  PlanarPointSet epochs;
};

Instance make_instance(const RngStream& s) {
  Rng r = s.child("params").rng();
  Instance in;
  in.lambda = r.uniform(0.8, 2.0);
  in.rho = in.lambda * r.uniform(0.3, 0.8);
  in.t = r.uniform(0.5, 4.0);
  // Left margin: roughly where the boundary envelope of the sparser line
  // stops reaching, with a random slack so some queries stay uncertified.
  const BoundaryEnvelope env(in.rho, in.t);
  const double reach = static_cast<double>(env.b0) / in.rho + 2.0 * in.t / (in.rho * in.rho);
  in.w = Interval{-reach * r.uniform(0.6, 1.4), r.uniform(5.0, 20.0)};
  in.nrho = sample_poisson_line(in.rho, in.w, s.child("rho"));
  auto bar = sample_poisson_line(in.lambda - in.rho, in.w, s.child("bar"));
  in.nlam.window = in.w;
  in.nlam.rate = in.lambda;
  std::merge(in.nrho.positions.begin(), in.nrho.positions.end(), bar.positions.begin(), bar.positions.end(),
             std::back_inserter(in.nlam.positions));
  in.nlam.positions.erase(std::unique(in.nlam.positions.begin(), in.nlam.positions.end()), in.nlam.positions.end());
  in.lam = ParticleConfig::from_line(in.nlam);
  in.uni = in.lam;
  for (std::size_t i = 0; i < in.uni.size(); ++i)
    in.uni.classes[i] = std::binary_search(in.nrho.positions.begin(), in.nrho.positions.end(), in.uni.positions[i])
                            ? ParticleClass::first
                            : ParticleClass::second;
  in.first = select_class(in.uni, ParticleClass::first);
  in.second = select_class(in.uni, ParticleClass::second);
  in.first.left_density = in.rho;
  in.second.left_density = in.lambda - in.rho;
  in.epochs = sample_planar_unit_poisson(Rect{in.w, in.t}, s.child("epochs"));
  return in;
}

// Query abscissas: the window's particles and epochs plus random points.
std::vector<double> query_points(const Instance& in, const RngStream& s, double from) {
  Rng r = s.child("queries").rng();
  std::vector<double> xs;
  for (int k = 0; k < 8; ++k) xs.push_back(r.uniform(std::max(from, in.w.lo), in.w.hi));
  for (std::size_t k = 0; k < 4 && !in.nlam.positions.empty(); ++k)
    xs.push_back(in.nlam.positions[static_cast<std::size_t>(r.bits() % in.nlam.positions.size())]);
  for (std::size_t k = 0; k < 4 && !in.epochs.points.empty(); ++k)
    xs.push_back(in.epochs.points[static_cast<std::size_t>(r.bits() % in.epochs.points.size())].x);
  xs.push_back(in.w.hi);
  std::erase_if(xs, [&](double x) { return !(x >= from) || !in.w.contains(x); });
  return xs;
}

std::int64_t count_in(const std::vector<double>& sorted, double a, double b) {
  return static_cast<std::int64_t>(std::upper_bound(sorted.begin(), sorted.end(), b) -
                                   std::upper_bound(sorted.begin(), sorted.end(), a));
}

struct Counter {
  std::size_t comparisons = 0;
};

using Family = std::function<void(const RngStream&, Counter&)>;

// Three-case relation between the flux and the configuration around the
// particle that starts at or left of the origin.
void fam_flux_identity(const RngStream& s, Counter& c) {
  auto in = make_instance(s);
  auto [state, log] = evolve(in.lam, in.epochs, in.t);
  auto it = std::upper_bound(in.lam.positions.begin(), in.lam.positions.end(), 0.0);
  if (it == in.lam.positions.begin()) return;
  const auto id = in.lam.ids[static_cast<std::size_t>(it - in.lam.positions.begin()) - 1];
  const auto idx = state.config.index_of_id(id);
  const double X = state.config.positions[static_cast<std::size_t>(idx)];
  if (!(X > state.contamination_frontier)) return;
  FluxSolver solver(in.lam, in.epochs);
  auto xs = query_points(in, s, state.contamination_frontier);
  xs.push_back(X);
  const auto& now = state.config.positions;
  for (double x : xs) {
    auto f = solver.query(x, in.t);
    if (!f.certified) continue;
    std::int64_t rhs = 0;
    if (x < X) rhs = -count_in(now, x, X);
    if (x > X) rhs = count_in(now, X, x);
    expect(f.value == rhs, "L(" + str(x) + ") = " + str(f.value) + " but configuration count gives " + str(rhs));
    ++c.comparisons;
  }
}

void fam_lemma31(const RngStream& s, Counter& c) {
  auto in = make_instance(s);
  auto [state, log] = evolve(in.lam, in.epochs, in.t);
  FluxSolver solver(in.lam, in.epochs);
  for (double x : query_points(in, s, state.contamination_frontier)) {
    auto f = solver.query(x, in.t);
    if (!f.certified) continue;
    double chi = 0.0;
    try {
      chi = chi_min(state, in.lam, x);
    } catch (const UncertifiedRegion&) {
      continue;
    }
    const auto lhs = signed_count(in.nlam.positions, chi);
    expect(lhs == f.value + 1, "nu(chi(" + str(x) + ")) = " + str(lhs) + " but L + 1 = " + str(f.value + 1));
    ++c.comparisons;
  }
}

void fam_lemma33(const RngStream& s, Counter& c) {
  auto in = make_instance(s);
  auto pr = priority_dynamics(in.first, in.second, in.epochs, in.t);
  FluxSolver sl(in.lam, in.epochs), sr(in.nrho.positions, in.w, in.epochs, in.rho);
  for (double x : query_points(in, s, pr.state.contamination_frontier)) {
    auto a = sl.query(x, in.t), b = sr.query(x, in.t);
    if (!a.certified || !b.certified) continue;
    double chi = 0.0;
    try {
      chi = chi_bar_max(pr.state, in.second, x);
    } catch (const UncertifiedRegion&) {
      continue;
    }
    const auto rhs = signed_count(in.second.positions, chi);
    expect(a.value - b.value == rhs,
           "Lbar(" + str(x) + ") = " + str(a.value - b.value) + " but nubar(chibar) = " + str(rhs));
    ++c.comparisons;
  }
}

std::vector<SpaceTimePoint> random_points(Rng& r, std::size_t n) {
  std::vector<SpaceTimePoint> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({r.uniform(0.0, 1.0), r.uniform(0.0, 1.0)});
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.t < b.t; });
  return pts;
}

void fam_engine(const RngStream& s, Counter& c) {
  auto in = make_instance(s);
  auto [state, log] = evolve(in.lam, in.epochs, in.t);
  {
    auto rp = replay(in.lam, log);
    expect(rp.positions == state.config.positions && rp.ids == state.config.ids,
           "replayed log differs from the evolved state");
  }
  FluxSolver solver(in.lam, in.epochs);
  FluxSolver solver_rho(in.nrho.positions, in.w, in.epochs, in.rho);
  auto [ustate, ulog] = evolve(in.uni, in.epochs, in.t);
  Rng r = s.child("times").rng();
  for (double x : query_points(in, s, in.w.lo)) {
    const double t = r.uniform(0.0, 1.0) < 0.5 ? in.t : r.uniform(0.0, in.t);
    auto v = solver.query(x, t);
    if (!v.certified) continue;
    std::int64_t d = 0;
    try {
      d = flux_from_dynamics(log, in.lam, x, t);
    } catch (const UncertifiedRegion&) {
      continue;
    }
    auto naive = flux_naive_oracle(in.lam, in.epochs, x, t);
    expect(d == v.value, "dynamics flux " + str(d) + " vs variational " + str(v.value) + " at (" + str(x) + "," +
                             str(t) + ")");
    expect(naive == v, "naive oracle disagrees with the variational sweep at (" + str(x) + "," + str(t) + ")");
    c.comparisons += 2;
    auto vr = solver_rho.query(x, t);
    if (!vr.certified) continue;
    try {
      const auto d1 = flux_from_dynamics(ulog, in.uni, x, t, ClassFilter::first);
      const auto dall = flux_from_dynamics(ulog, in.uni, x, t, ClassFilter::all);
      const auto d2 = flux_from_dynamics(ulog, in.uni, x, t, ClassFilter::second);
      expect(d1 == vr.value, "first-class flux " + str(d1) + " vs variational " + str(vr.value));
      expect(dall == v.value, "union flux " + str(dall) + " vs variational " + str(v.value));
      expect(d1 + d2 == dall, "class fluxes do not add up");
      c.comparisons += 3;
    } catch (const UncertifiedRegion&) {
    }
  }
  Rng lr = s.child("lis").rng();
  auto pts = random_points(lr, 1 + static_cast<std::size_t>(lr.bits() % 60));
  const auto fast = lis_length(pts), slow = lis_quadratic(pts);
  expect(fast == slow, "lis_length " + str(fast) + " vs quadratic " + str(slow));
  ++c.comparisons;
}

void fam_attractivity(const RngStream& s, Counter& c) {
  auto in = make_instance(s);
  auto pr = priority_dynamics(in.first, in.second, in.epochs, in.t);
  auto [ustate, ulog] = evolve(in.uni, in.epochs, in.t);
  auto [fstate, flog] = evolve(in.first, in.epochs, in.t);
  expect(pr.state.config.positions == ustate.config.positions, "two-class union differs from the evolved union");
  const auto lead = pr.state.config.positions_of(ClassFilter::first);
  expect(lead == fstate.config.positions, "first-class particles differ from the evolved lower configuration");
  // The lower configuration stays inside the upper one.
  for (double p : fstate.config.positions)
    expect(std::binary_search(ustate.config.positions.begin(), ustate.config.positions.end(), p),
           "lower configuration escaped the upper one at " + str(p));
  c.comparisons += 2 + fstate.config.size();
}

void fam_no_crossing(const RngStream& s, Counter& c) {
  auto in = make_instance(s);
  auto [state, log] = evolve(in.lam, in.epochs, in.t);
  Rng r = s.child("times").rng();
  for (int k = 0; k < 5; ++k) {
    auto conf = replay(in.lam, log, r.uniform(0.0, in.t));
    for (std::size_t i = 1; i < conf.size(); ++i) {
      expect(conf.positions[i - 1] < conf.positions[i], "positions out of order");
      expect(conf.ids[i - 1] < conf.ids[i], "particles exchanged order");
    }
    ++c.comparisons;
  }
}

ParticleConfig without_origin(const Instance& in) {
  auto p = in.nlam.positions;
  std::erase(p, 0.0);
  auto out = ParticleConfig::from_positions(p, in.w);
  out.left_density = in.lambda;
  return out;
}

bool same_path(const TrajectoryRecord& a, const TrajectoryRecord& b) {
  return a.initial_position == b.initial_position && a.jumps == b.jumps;
}

void fam_z_monotone(const RngStream& s, Counter& c) {
  auto in = make_instance(s);
  auto z = coupled_discrepancy(without_origin(in), in.epochs, in.t);
  double prev = z.initial_position, prev_t = 0.0;
  for (const auto& [t, x] : z.jumps) {
    expect(x > prev, "second-class particle moved left at t = " + str(t));
    expect(t > prev_t, "jump times not increasing");
    prev = x;
    prev_t = t;
    ++c.comparisons;
  }
}

void fam_discrepancy_priority(const RngStream& s, Counter& c) {
  auto in = make_instance(s);
  auto base = without_origin(in);
  auto z = coupled_discrepancy(base, in.epochs, in.t);
  ParticleConfig sec;
  sec.window = in.w;
  sec.positions = {0.0};
  sec.classes = {ParticleClass::second};
  sec.ids = {base.max_id() + 1};
  auto pr = priority_dynamics(base, sec, in.epochs, in.t);
  const auto& p = pr.second.front();
  if (z.certified && p.certified) {
    expect(same_path(z, p), "coupled discrepancy and priority dynamics disagree");
    ++c.comparisons;
  } else {
    // Both certify the same prefix of the path.
    const double upto = std::min(z.violation_time, p.violation_time);
    for (const auto& j : z.jumps)
      if (j.first < upto) {
        expect(p.position_at(j.first) == j.second, "paths differ before the violation time");
        ++c.comparisons;
      }
  }
}

void fam_sandwich(const RngStream& s, Counter& c) {
  Rng r = s.child("params").rng();
  const double lambda = r.uniform(0.8, 2.5), rho = lambda * r.uniform(0.2, 0.7), t = r.uniform(0.5, 5.0);
  const Interval w{-r.uniform(25.0, 40.0), r.uniform(10.0, 20.0)};
  ShockCouplingResult res;
  try {
    res = shock_coupling_experiment(rho, lambda, t, w, s.child("shock"));
  } catch (const UncertifiedRegion&) {
    return;
  }
  const double upto = std::min({res.z_lower.violation_time, res.z_shock.violation_time, res.z_stat.violation_time});
  std::vector<double> times{0.0};
  for (const auto* tr : {&res.z_lower, &res.z_shock, &res.z_stat})
    for (const auto& j : tr->jumps) times.push_back(j.first);
  for (double u : times) {
    if (!(u < upto)) continue;
    const double lo = res.z_lower.position_at(u), mid = res.z_shock.position_at(u), hi = res.z_stat.position_at(u);
    expect(lo <= mid && mid <= hi, "sandwich broken at t = " + str(u));
    ++c.comparisons;
  }
}

// Certified results must not move when the window grows, for both engines.
void fam_window(const RngStream& s, Counter& c) {
  Rng r = s.child("params").rng();
  const double lambda = r.uniform(0.5, 2.0), t = r.uniform(0.5, 6.0);
  const Interval w{-r.uniform(5.0, 40.0), r.uniform(5.0, 15.0)};
  const Interval wide{w.lo - 40.0 - 4.0 * t / (lambda * lambda), w.hi + 10.0};
  auto line = sample_poisson_line_tiled(lambda, wide, s.child("line"));
  auto epochs = sample_planar_tiled(Rect{wide, t}, s.child("epochs"));
  auto small_line = restrict_line(line, w);
  auto small_epochs = restrict_planar(epochs, Rect{w, t});

  FluxSolver small(small_line.positions, w, small_epochs, lambda), big(line.positions, wide, epochs, lambda);
  Rng q = s.child("queries").rng();
  for (int k = 0; k < 12; ++k) {
    const double x = q.uniform(w.lo, w.hi), u = q.uniform(0.0, t);
    auto a = small.query(x, u);
    if (!a.certified) continue;
    auto b = big.query(x, u);
    expect(a.value == b.value && a.y_sup == b.y_sup && a.y_inf == b.y_inf,
           "certified flux at (" + str(x) + "," + str(u) + ") changed with a wider window");
    ++c.comparisons;
  }

  auto [ss, slog] = evolve(ParticleConfig::from_line(small_line), small_epochs, t);
  auto [bs, blog] = evolve(ParticleConfig::from_line(line), epochs, t);
  std::vector<double> a, b;
  for (double p : ss.config.positions)
    if (p > ss.contamination_frontier) a.push_back(p);
  for (double p : bs.config.positions)
    if (p > ss.contamination_frontier && p <= w.hi) b.push_back(p);
  expect(a == b, "configuration right of the frontier changed with a wider window");
  c.comparisons += a.size();
}

void check_split(const QueueSample& q) {
  std::vector<double> both;
  std::merge(q.departures.positions.begin(), q.departures.positions.end(), q.unused.positions.begin(),
             q.unused.positions.end(), std::back_inserter(both));
  expect(both == q.services.positions, "departures and unused services do not partition the services");
  for (const auto& [x, len] : q.length_path) expect(len >= 0, "negative queue length at " + str(x));
}

void fam_queue_split(const RngStream& s, Counter& c) {
  Rng r = s.child("params").rng();
  const double lambda = r.uniform(0.5, 3.0), rho = lambda * r.uniform(0.1, 0.9);
  const Interval w{0.0, r.uniform(5.0, 60.0)};
  auto a = sample_poisson_line(rho, w, s.child("a"));
  auto sv = sample_poisson_line(lambda, w, s.child("s"));
  const auto len = static_cast<std::int64_t>(r.bits() % 5);
  for (auto dir : {QueueDirection::rightward, QueueDirection::leftward}) {
    auto q = mm1_path(a, sv, len, dir);
    check_split(q);
    // Every arrival is either served or still waiting at the far edge.
    const auto served = static_cast<std::int64_t>(q.departures.positions.size());
    const std::int64_t end_len = q.length_path.empty() ? len : q.length_path.back().second;
    expect(len + static_cast<std::int64_t>(a.positions.size()) - served == end_len, "queue length bookkeeping");
    c.comparisons += 2;
  }
  auto tc = stationary_two_class(rho, lambda, w, s.child("stationary"));
  check_split(tc.queue);
  auto all = merge_configs(tc.first, tc.second);
  expect(all.positions == tc.queue.services.positions, "two-class sample is not the service set");
  c.comparisons += 2;
}

void fam_queue_direction(const RngStream& s, Counter& c) {
  std::size_t compared = 0, bad = 0;
  try {
    bad = queue_direction_mismatches(QueueDirection::leftward, s, &compared);
  } catch (const UncertifiedRegion&) {
    return;
  }
  expect(bad == 0, str(bad) + " particles differ between the two-line queue and the two-class dynamics");
  c.comparisons += compared;
}

const std::map<std::string, Family>& families() {
  static const std::map<std::string, Family> f{
      {"engine-equivalence", fam_engine},
      {"flux-identity", fam_flux_identity},
      {"lemma-3-1", fam_lemma31},
      {"lemma-3-3", fam_lemma33},
      {"attractivity", fam_attractivity},
      {"no-crossing", fam_no_crossing},
      {"z-monotone", fam_z_monotone},
      {"discrepancy-priority", fam_discrepancy_priority},
      {"sandwich", fam_sandwich},
      {"queue-split", fam_queue_split},
      {"queue-direction", fam_queue_direction},
      {"window-soundness", fam_window}};
  return f;
}

}  // namespace

std::vector<std::string> identity_names() {
  // Engine equivalence first: most other identities lean on it.
  return {"engine-equivalence", "flux-identity", "lemma-3-1", "lemma-3-3",   "attractivity",    "no-crossing",
          "z-monotone",         "discrepancy-priority", "sandwich", "queue-split", "queue-direction", "window-soundness"};
}

std::size_t instances_for(ValidationScale scale) { return scale == ValidationScale::quick ? 1000 : 10000; }

std::int64_t lis_quadratic(const std::vector<SpaceTimePoint>& points) {
  std::vector<std::int64_t> best(points.size(), 1);
  std::int64_t out = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j)
      if (points[j].x < points[i].x && points[j].t < points[i].t) best[i] = std::max(best[i], best[j] + 1);
    out = std::max(out, best[i]);
  }
  return out;
}

std::size_t queue_direction_mismatches(QueueDirection direction, const RngStream& s, std::size_t* compared) {
  Rng r = s.child("params").rng();
  const double lambda = r.uniform(0.8, 2.5), rho = lambda * r.uniform(0.2, 0.7), t = r.uniform(0.3, 2.5);
  // The right margin leaves room for the two boundary queue lengths to meet.
  const double hi = r.uniform(10.0, 20.0) + 60.0 / (lambda - rho), lo1 = -r.uniform(10.0, 20.0);
  const BoundaryEnvelope env(rho, t);
  const double reach = static_cast<double>(env.b0) / rho + 2.0 * t / (rho * rho);
  const Interval w1{lo1, hi}, w2{lo1 - 2.0 * reach, hi};
  // Everything is evolved on the wide window w2; comparisons stay right of
  // lo1, so influence from beyond w2 would have to cross the buffer first.
  auto alpha1 = sample_poisson_line(rho, w2, s.child("alpha1"));
  auto alpha2 = sample_poisson_line(lambda, w2, s.child("alpha2"));
  auto epochs = sample_planar_unit_poisson(Rect{w2, t}, s.child("epochs"));

  const Interval w_mid{0.5 * (w1.lo + w2.lo), hi};
  auto lines = two_line_process(restrict_line(alpha1, w_mid), alpha2, epochs, t);
  auto tc = two_class_from_queue(mm1_path(alpha1, alpha2, 0, direction));
  auto pr = priority_dynamics(tc.first, tc.second, epochs, t);

  LinePointSet arr{lines.line1.config.positions, rho, w1};
  LinePointSet srv;
  srv.rate = lambda;
  srv.window = w1;
  for (double p : lines.line2.config.positions)
    if (w1.contains(p)) srv.positions.push_back(p);
  auto q_empty = mm1_path(arr, srv, 0, direction, false);
  auto q_full = mm1_path(arr, srv, 40, direction, false);
  // Events after which both boundary lengths give the same queue.
  double agree_from = direction == QueueDirection::leftward ? -kInf : kInf;
  for (std::size_t k = 0; k < q_empty.length_path.size(); ++k)
    if (q_empty.length_path[k].second == q_full.length_path[k].second) {
      agree_from = q_empty.length_path[k].first;
      break;
    }
  const double left = std::max({pr.state.contamination_frontier, lines.line1.contamination_frontier,
                                lines.line2.contamination_frontier, w1.lo});
  auto inside = [&](double p) {
    const bool settled = direction == QueueDirection::leftward ? p < agree_from : p > agree_from;
    return p > left && settled;
  };
  std::vector<double> d_queue, u_queue, d_dyn, u_dyn;
  for (double p : q_empty.departures.positions)
    if (inside(p)) d_queue.push_back(p);
  for (double p : q_empty.unused.positions)
    if (inside(p)) u_queue.push_back(p);
  const auto& conf = pr.state.config;
  for (std::size_t i = 0; i < conf.size(); ++i) {
    if (!inside(conf.positions[i])) continue;
    (conf.classes[i] == ParticleClass::first ? d_dyn : u_dyn).push_back(conf.positions[i]);
  }
  std::size_t bad = 0;
  auto diff = [&](const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> sym;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(sym));
    bad += sym.size();
  };
  diff(d_queue, d_dyn);
  diff(u_queue, u_dyn);
  if (compared) *compared = d_dyn.size() + u_dyn.size();
  return bad;
}

IdentityOutcome run_identity(const std::string& name, std::uint64_t seed, std::size_t instances,
                             std::size_t first_instance) {
  auto it = families().find(name);
  if (it == families().end()) throw InvalidParameter("unknown identity '" + name + "'");
  IdentityOutcome out;
  out.name = name;
  for (std::size_t i = first_instance; i < first_instance + instances; ++i) {
    const auto idx = static_cast<std::int64_t>(i);
    RngStream s(seed, {{"validate", 0}, {name, idx}});
    Counter c;
    std::string failure;
    try {
      it->second(s, c);
    } catch (const Mismatch& m) {
      failure = m.what;
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    ++out.instances;
    out.comparisons += c.comparisons;
    if (c.comparisons == 0) ++out.skipped;
    if (!failure.empty()) {
      out.pass = false;
      out.failing_instance = idx;
      out.detail = failure;
      break;
    }
  }
  return out;
}

bool ValidationReport::pass() const {
  return std::all_of(identities.begin(), identities.end(), [](const IdentityOutcome& o) { return o.pass; });
}

const IdentityOutcome* ValidationReport::first_failure() const {
  for (const auto& o : identities)
    if (!o.pass) return &o;
  return nullptr;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["scale"] = scale == ValidationScale::quick ? "quick" : "full";
  j["pass"] = pass();
  auto arr = nlohmann::json::array();
  for (const auto& o : identities) {
    nlohmann::json e{{"name", o.name},         {"instances", o.instances}, {"comparisons", o.comparisons},
                     {"skipped", o.skipped},   {"pass", o.pass}};
    if (!o.pass) {
      e["failing_instance"] = o.failing_instance;
      e["detail"] = o.detail;
      e["replay"] = {{"identity", o.name}, {"seed", seed}, {"instance", o.failing_instance}};
    }
    arr.push_back(e);
  }
  j["identities"] = arr;
  return j;
}

ValidationReport run_validation(std::uint64_t seed, ValidationScale scale, unsigned threads) {
  ValidationReport rep;
  rep.seed = seed;
  rep.scale = scale;
  const auto names = identity_names();
  rep.identities.resize(names.size());
  const std::size_t n = instances_for(scale);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < names.size();) rep.identities[k] = run_identity(names[k], seed, n);
  };
  const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(names.size())));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rep;
}

}  // namespace hamlab

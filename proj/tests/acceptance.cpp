// Acceptance run: one PASS/FAIL line per criterion 1-14.
//
// --budget ctest scales the Monte Carlo replica counts down so the whole run
// fits a single-machine ctest; --budget full uses the stated counts. Each
// line prints the replica count used next to the stated one. The exit code
// reports whether the run completed, not the verdicts (use --strict for
// that): some criteria are expected to fail and must be visible as FAIL.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <map>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "hamlab/experiments.hpp"
#include "hamlab/validate.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Line {
  int id;
  bool pass;
  std::string what;
  std::string n_used;
  double seconds;
  double limit;
  std::vector<std::string> notes;
};

// Writes to stdout and, when set, to the --report file (ctest hides the
// output of passing tests).
FILE* report_file = nullptr;

template <typename... A>
void out(const char* fmt, A... a) {
  std::printf(fmt, a...);
  std::fflush(stdout);
  if (report_file) {
    std::fprintf(report_file, fmt, a...);
    std::fflush(report_file);
  }
}

void print(const Line& l) {
  out("criterion %-2d %s  %-40s %-28s %7.1f s%s\n", l.id, l.pass ? "PASS" : "FAIL", l.what.c_str(), l.n_used.c_str(),
      l.seconds, l.seconds > l.limit ? "  (over time limit)" : "");
  for (const auto& n : l.notes) out("    %s\n", n.c_str());
}

Line exact_criterion(int id, const std::vector<std::string>& names, std::uint64_t seed) {
  Line l{id, true, "", "", 0.0, 60.0, {}};
  const auto t0 = Clock::now();
  const std::size_t n = hamlab::instances_for(hamlab::ValidationScale::quick);
  for (const auto& name : names) {
    if (!l.what.empty()) l.what += " ";
    l.what += name;
    try {
      const auto out = hamlab::run_identity(name, seed, n);
      if (!out.pass) {
        l.pass = false;
        l.notes.push_back(name + " failed at instance " + std::to_string(out.failing_instance) + ": " + out.detail);
      } else if (out.comparisons == 0) {
        l.pass = false;
        l.notes.push_back(name + ": nothing certified to compare");
      }
    } catch (const std::exception& e) {
      l.pass = false;
      l.notes.push_back(name + " raised: " + e.what());
    }
  }
  l.n_used = "instances=" + std::to_string(n) + "/1000";
  l.seconds = seconds_since(t0);
  return l;
}

struct Run {
  std::string experiment;
  std::int64_t ctest_n;
};

Line mc_criterion(int id, const std::vector<Run>& runs, bool full, unsigned threads, std::uint64_t seed) {
  Line l{id, true, "", "", 0.0, 600.0, {}};
  const auto t0 = Clock::now();
  for (const auto& r : runs) {
    auto cfg = hamlab::default_config(r.experiment);
    const auto stated = cfg.replicas;
    if (!full) cfg.replicas = std::min(stated, r.ctest_n);
    cfg.threads = threads;
    cfg.seed = seed;
    if (!l.what.empty()) {
      l.what += " ";
      l.n_used += " ";
    }
    l.what += r.experiment;
    l.n_used += "n=" + std::to_string(cfg.replicas) + "/" + std::to_string(stated);
    try {
      const auto rep = hamlab::run_experiment(cfg);
      if (!rep.pass()) l.pass = false;
      for (const auto& c : rep.checks) {
        if (c.informational || c.pass) continue;
        char buf[160];
        std::snprintf(buf, sizeof buf, "  estimate=%g se=%g target=%g", c.estimate, c.se, c.target);
        l.notes.push_back(r.experiment + " " + c.params.dump() + buf);
      }
      if (rep.retries) l.notes.push_back(r.experiment + ": " + std::to_string(rep.retries) + " window retries");
    } catch (const std::exception& e) {
      l.pass = false;
      l.notes.push_back(r.experiment + " raised: " + e.what());
    }
  }
  l.seconds = seconds_since(t0);
  return l;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria 1-14"};
  std::string budget = "ctest";
  unsigned threads = 0;
  std::uint64_t seed = 20240611;
  bool strict = false;
  std::vector<int> only;
  std::string report;
  app.add_option("--budget", budget, "ctest or full")->check(CLI::IsMember({"ctest", "full"}));
  app.add_option("--threads", threads, "Worker threads (0 = hardware)");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--only", only, "Criteria to run")->check(CLI::Range(1, 14));
  app.add_flag("--strict", strict, "Exit 1 when any criterion fails");
  app.add_option("--report", report, "Also write the lines to this file");
  CLI11_PARSE(app, argc, argv);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const bool full = budget == "full";
  const std::set<int> want(only.begin(), only.end());
  auto selected = [&](int id) { return want.empty() || want.count(id); };

  // ctest replica counts, chosen from single-core timings so each criterion
  // stays near or under its 10 minute limit on one core.
  const std::map<int, std::vector<Run>> mc = {
      {5, {{"thm-2-1", 50000}}},
      {6, {{"thm-2-3", 20000}}},
      {7, {{"thm-2-5", 2000}}},
      {8, {{"thm-2-4", 1500}, {"cor-2-9", 2000}}},
      {9, {{"cuberoot", 300}}},
      {10, {{"lemma-3-2", 100000}}},
      {11, {{"thm-2-6", 10000}}},
      {12, {{"flux-approx", 20000}}},
      {13, {{"burke", 200}}},
      {14, {{"thm-2-8", 10000}, {"shock-profile", 10000}}},
  };
  const std::map<int, std::vector<std::string>> exact = {
      {1, {"flux-identity"}},
      {2, {"lemma-3-1", "lemma-3-3"}},
      {3, {"engine-equivalence", "window-soundness"}},
      {4, {"attractivity", "no-crossing", "z-monotone", "discrepancy-priority", "sandwich", "queue-split",
           "queue-direction"}},
  };

  if (!report.empty() && !(report_file = std::fopen(report.c_str(), "w"))) {
    std::fprintf(stderr, "cannot write %s\n", report.c_str());
    return 4;
  }
  out("budget=%s threads=%u seed=%llu\n", budget.c_str(), threads, static_cast<unsigned long long>(seed));
  std::vector<Line> lines;
  for (int id = 1; id <= 14; ++id) {
    if (!selected(id)) continue;
    lines.push_back(id <= 4 ? exact_criterion(id, exact.at(id), seed)
                            : mc_criterion(id, mc.at(id), full, threads, seed));
    print(lines.back());
  }
  int passed = 0;
  std::string failed;
  for (const auto& l : lines) {
    if (l.pass)
      ++passed;
    else
      failed += " " + std::to_string(l.id);
  }
  out("summary: %d/%zu criteria passed%s%s\n", passed, lines.size(), failed.empty() ? "" : "; failed:",
      failed.c_str());
  if (report_file) std::fclose(report_file);
  return strict && passed != static_cast<int>(lines.size()) ? 1 : 0;
}

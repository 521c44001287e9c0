#include "hamlab/replicas.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "hamlab/errors.hpp"

namespace hamlab {

ReplicaRun run_replicas(const std::string& experiment, std::int64_t n, std::uint64_t seed, unsigned threads,
                        const ReplicaFn& fn) {
  if (n < 1) throw InvalidParameter("replica count must be at least 1");
  const auto count = static_cast<std::size_t>(n);
  ReplicaRun out;
  out.values.resize(count);
  std::vector<char> retried(count, 0);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> abort{false};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || abort.load()) return;
      const auto idx = static_cast<std::int64_t>(i);
      ReplicaContext ctx{idx, RngStream(seed, {{experiment, idx}}), 0, 1.0};
      try {
        try {
          out.values[i] = fn(ctx);
        } catch (const UncertifiedRegion& first_failure) {
          retried[i] = 1;
          ctx.attempt = 1;
          ctx.window_scale = 2.0;
          try {
            out.values[i] = fn(ctx);
          } catch (const UncertifiedRegion& second_failure) {
            std::ostringstream msg;
            msg << experiment << ": replica " << idx << " (seed " << seed
                << ") failed certification twice: " << first_failure.what() << " / " << second_failure.what();
            throw CertificationFailure(msg.str());
          }
        }
      } catch (...) {
        errors[i] = std::current_exception();
        abort.store(true);
      }
    }
  };

  const unsigned t = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (unsigned k = 0; k < t; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  // Report the lowest failing index so diagnostics do not depend on scheduling.
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  out.retries = static_cast<std::size_t>(std::count(retried.begin(), retried.end(), 1));
  return out;
}

}  // namespace hamlab

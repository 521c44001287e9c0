#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hamlab/rng.hpp"

namespace hamlab {

struct ReplicaContext {
  std::int64_t index = 0;
  RngStream stream{0};
  int attempt = 0;            // 0, or 1 for the enlarged-window retry
  double window_scale = 1.0;  // multiply every window margin by this
};

using ReplicaFn = std::function<std::vector<double>(const ReplicaContext&)>;

struct ReplicaRun {
  std::vector<std::vector<double>> values;  // by replica index
  std::size_t retries = 0;
};

// Replica i draws from RngStream(seed, {(experiment, i)}). A replica throwing
// UncertifiedRegion is re-run once with window_scale 2; a second failure
// raises CertificationFailure. Output depends only on (experiment, n, seed).
ReplicaRun run_replicas(const std::string& experiment, std::int64_t n, std::uint64_t seed, unsigned threads,
                        const ReplicaFn& fn);

}  // namespace hamlab

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hamlab {

// Uniform and derived draws on top of std::mt19937_64. The conversions are
// written out by hand because std distributions are implementation-defined
// and would break cross-platform reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  // Open interval (0, 1).
  double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double exponential(double rate);
  bool bernoulli(double p) { return uniform() < p; }
  // P(k) = (1 - q) q^k, k >= 0.
  std::int64_t geometric(double q);

 private:
  std::mt19937_64 engine_;
};

// Keyed stream identity: a master seed plus a label path. Children are
// derived by hashing, so the sample drawn for a label path does not depend
// on which other streams were used or in what order.
class RngStream {
 public:
  using Label = std::pair<std::string, std::int64_t>;

  explicit RngStream(std::uint64_t master_seed) : master_seed_(master_seed) {}
  RngStream(std::uint64_t master_seed, std::vector<Label> labels);

  RngStream child(std::string_view name, std::int64_t index = 0) const;
  std::uint64_t master_seed() const { return master_seed_; }
  const std::vector<Label>& labels() const { return labels_; }
  std::uint64_t key() const { return key_; }
  Rng rng() const { return Rng(key_); }

 private:
  std::uint64_t master_seed_;
  std::vector<Label> labels_;
  std::uint64_t key_ = derive_root(master_seed_);

  static std::uint64_t derive_root(std::uint64_t seed);
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace hamlab

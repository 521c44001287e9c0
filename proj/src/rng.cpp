#include "hamlab/rng.hpp"

#include <cmath>

namespace hamlab {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t mix_label(std::uint64_t key, std::string_view name, std::int64_t index) {
  key = splitmix64(key ^ fnv1a(name));
  return splitmix64(key ^ static_cast<std::uint64_t>(index));
}

}  // namespace

double Rng::exponential(double rate) { return -std::log(uniform()) / rate; }

std::int64_t Rng::geometric(double q) {
  if (q <= 0.0) return 0;
  return static_cast<std::int64_t>(std::floor(std::log(uniform()) / std::log(q)));
}

std::uint64_t RngStream::derive_root(std::uint64_t seed) { return splitmix64(seed ^ 0x68616d6c6162ULL); }

RngStream::RngStream(std::uint64_t master_seed, std::vector<Label> labels)
    : master_seed_(master_seed), labels_(std::move(labels)) {
  for (const auto& [name, index] : labels_) key_ = mix_label(key_, name, index);
}

RngStream RngStream::child(std::string_view name, std::int64_t index) const {
  RngStream out = *this;
  out.labels_.emplace_back(std::string(name), index);
  out.key_ = mix_label(key_, name, index);
  return out;
}

}  // namespace hamlab

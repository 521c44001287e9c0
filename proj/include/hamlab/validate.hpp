#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hamlab/queueing.hpp"
#include "hamlab/rng.hpp"

namespace hamlab {

enum class ValidationScale : std::uint8_t { quick, full };

struct IdentityOutcome {
  std::string name;
  std::size_t instances = 0;
  std::size_t comparisons = 0;  // exact equalities checked
  std::size_t skipped = 0;      // instances with nothing certified to compare
  bool pass = true;
  std::int64_t failing_instance = -1;
  std::string detail;
};

struct ValidationReport {
  std::uint64_t seed = 0;
  ValidationScale scale = ValidationScale::quick;
  std::vector<IdentityOutcome> identities;

  bool pass() const;
  const IdentityOutcome* first_failure() const;
  nlohmann::json to_json() const;
};

std::vector<std::string> identity_names();
std::size_t instances_for(ValidationScale scale);

// Instance i of identity `name` draws from RngStream(seed, {("validate", 0), (name, i)}),
// so a failure replays with (name, seed, i).
IdentityOutcome run_identity(const std::string& name, std::uint64_t seed, std::size_t instances,
                             std::size_t first_instance = 0);
ValidationReport run_validation(std::uint64_t seed, ValidationScale scale, unsigned threads = 1);

// Pathwise check of the queue orientation: the queue of the evolved two-line
// state must reproduce the evolved two-class configuration wherever both are
// determined. Returns the number of mismatching particles; `compared` gets
// the number of particles compared.
std::size_t queue_direction_mismatches(QueueDirection direction, const RngStream& stream,
                                       std::size_t* compared = nullptr);

// O(n^2) longest increasing chain, the reference for lis_length.
std::int64_t lis_quadratic(const std::vector<SpaceTimePoint>& points);

}  // namespace hamlab

#pragma once

#include <stdexcept>
#include <string>

namespace hamlab {

class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A query or trajectory left the region where the windowed computation is
// known to match the infinite system.
class UncertifiedRegion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UncertifiedTrajectory : public UncertifiedRegion {
 public:
  UncertifiedTrajectory(const std::string& what, double violation_time)
      : UncertifiedRegion(what), violation_time_(violation_time) {}
  double violation_time() const noexcept { return violation_time_; }

 private:
  double violation_time_;
};

// Raised by the replica runner when a replica fails certification twice.
class CertificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hamlab

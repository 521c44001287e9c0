#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hamlab {

struct ExperimentConfig {
  std::string name;
  double lambda = 1.0;
  double rho = 0.5;
  double lambda_first = 1.0;  // first-class case of thm-2-4
  std::vector<double> t_grid;
  std::vector<double> x_grid;
  std::vector<double> u_grid;
  std::vector<double> y_grid;
  std::int64_t replicas = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  double window_scale = 1.0;  // multiplies every default window margin
  double k_se = 3.0;

  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j, ExperimentConfig base);
};

struct CheckResult {
  std::string experiment;
  nlohmann::json params;
  double estimate = 0.0;
  double se = 0.0;
  double target = 0.0;
  bool pass = false;
  bool informational = false;  // reported, not part of the verdict
};

struct CsvRow {
  std::string param_json;
  std::int64_t replica = 0;
  std::vector<double> values;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json params;
  std::vector<std::string> columns;  // names of the CSV value columns
  std::vector<CsvRow> rows;
  std::vector<CheckResult> checks;
  std::size_t retries = 0;

  bool pass() const;
  nlohmann::json summary() const;
};

std::vector<std::string> experiment_names();
// Desk-scale defaults; throws InvalidParameter for unknown names.
ExperimentConfig default_config(const std::string& name);
// Throws InvalidParameter when the configuration is unusable.
void validate_config(const ExperimentConfig& cfg);
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace hamlab

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "starflow/states.hpp"

namespace starflow {

// Validation failure with the path of the offending field ("params.beta").
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error("config error at " + field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct StateSpec {
  std::string variant = "deformed-delta";  // delta | deformed-delta | kms
  double q0 = 0.0;
  double p0 = 0.0;
};

// One batch scenario: physical parameters, numerical knobs, the observable,
// the time grid, and output selection. All fields have defaults; a config
// file overrides defaults and command-line flags override the file.
struct ScenarioConfig {
  double m = 1.0;
  double nu = 1.0;
  double kappa = 1.5;
  double beta = 1.0;
  int truncation_order = 6;
  std::string scalar_backend = "float64";  // float64 | exact-rational
  StateSpec state;
  std::string observable = "qS";
  std::vector<double> times = {0.0, 0.3, 1.1, 2.7};
  std::uint64_t seed = 42;
  std::string format = "csv";  // csv | json

  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  // Throws ConfigError naming the field on the first violated invariant.
  void validate() const;

  Backend backend() const;
  Parameters parameters() const;  // float backend (time grids need it)
  BathState make_state() const;
};

ScenarioConfig load_scenario(const std::string& path);

// Compact state syntax for the command line:
//   "kms:beta=1"  "deformed-delta:q0=0.3,p0=-0.2"  "delta"
void apply_state_spec(const std::string& spec, ScenarioConfig& cfg);

}  // namespace starflow

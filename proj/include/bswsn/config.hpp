#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bswsn/game.hpp"
#include "bswsn/model.hpp"

namespace bswsn {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RandomTagSpec {
  double radius_m = 5.0;      // disk radius around the H-AP
  double min_radius_m = 0.5;  // keep tags off the antenna
  std::uint64_t seed = 1;
};

// Human-unit mirror of SystemParams plus geometry and run controls. Absent
// keys take the default numeric scenario below; unknown keys are rejected.
struct ScenarioConfig {
  int n_tags = 3;
  int n_channels = 14;
  double eta = 0.5;
  double block_time_s = 1.0;
  double gamma0 = 1.0;
  double gamma1 = -1.0;
  double noise_dbm = -90.0;
  double cost_interferer = 1.0;
  double cost_wsn = 1.0;
  double sinr_threshold_db = 10.0;
  double backscatter_power_threshold_dbm = -18.0;
  double harvest_power_threshold_dbm = -22.0;
  double p_t_max_dbm = 20.0;
  double p_i_max_dbm = 30.0;
  double gain_hap_tx_dbi = 6.0;
  double gain_tag_dbi = 1.8;
  double gain_interferer_dbi = 6.0;
  double carrier_hap_ghz = 2.4;
  double carrier_interferer_ghz = 2.4;
  double leakage_fraction = 0.0;
  StepSizes step_sizes;
  std::vector<double> tag_distances_m;  // empty: default layout or random_tags
  std::optional<RandomTagSpec> random_tags;
  double interferer_distance_m = 10.0;
  GameMode mode = GameMode::stackelberg;
  int max_rounds = 40;
  double rho_min = 1e-3;
  int max_inner_iterations = 500;
  double convergence_tol = 1e-6;
  std::uint64_t seed = 1;

  SystemParams to_params() const;              // linear SI conversion + validation
  std::vector<double> resolved_tag_distances() const;
  Scenario to_scenario() const;
};

// Parse + validate. Unknown keys, type mismatches and invariant violations
// raise ConfigError naming the offending field.
ScenarioConfig config_from_json(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

// Write-back of the parsed config; parsing the output reproduces the same
// effective linear parameters.
std::string config_to_json(const ScenarioConfig& cfg);

}  // namespace bswsn

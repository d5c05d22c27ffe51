#include "bswsn/config.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "bswsn/units.hpp"

namespace bswsn {

using nlohmann::json;

namespace {

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return j.get<int>();
}

std::uint64_t get_u64(const json& j, const std::string& key) {
  if (!j.is_number_unsigned() && !j.is_number_integer())
    throw ConfigError("config key '" + key + "' must be a nonnegative integer");
  const auto v = j.get<std::int64_t>();
  if (v < 0) throw ConfigError("config key '" + key + "' must be a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

}  // namespace

SystemParams ScenarioConfig::to_params() const {
  SystemParams p;
  p.eta = eta;
  p.block_time = block_time_s;
  p.n_tags = n_tags;
  p.n_channels = n_channels;
  p.gamma0 = gamma0;
  p.gamma1 = gamma1;
  p.noise_power = units::dbm_to_watts(noise_dbm);
  p.cost_interferer = cost_interferer;
  p.cost_wsn = cost_wsn;
  p.sinr_threshold = units::db_to_linear(sinr_threshold_db);
  p.backscatter_power_threshold = units::dbm_to_watts(backscatter_power_threshold_dbm);
  p.harvest_power_threshold = units::dbm_to_watts(harvest_power_threshold_dbm);
  p.p_t_max = units::dbm_to_watts(p_t_max_dbm);
  p.p_i_max = units::dbm_to_watts(p_i_max_dbm);
  p.gain_hap_tx = units::db_to_linear(gain_hap_tx_dbi);
  p.gain_tag = units::db_to_linear(gain_tag_dbi);
  p.gain_interferer = units::db_to_linear(gain_interferer_dbi);
  p.wavelength_hap = units::wavelength_m(carrier_hap_ghz * 1e9);
  p.wavelength_interferer = units::wavelength_m(carrier_interferer_ghz * 1e9);
  p.step = step_sizes;
  p.leakage_fraction = leakage_fraction;
  p.rho_min = rho_min;
  p.max_inner_iterations = max_inner_iterations;
  try {
    p.validate();
  } catch (const ModelError& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  return p;
}

std::vector<double> ScenarioConfig::resolved_tag_distances() const {
  if (!tag_distances_m.empty()) return tag_distances_m;
  if (random_tags) {
    std::mt19937_64 gen(random_tags->seed);
    std::vector<double> r(static_cast<size_t>(n_tags));
    const double r0 = random_tags->min_radius_m;
    const double r1 = random_tags->radius_m;
    for (auto& v : r) {
      // uniform over the disk annulus [r0, r1]
      const double u = uniform01(gen);
      v = std::sqrt(r0 * r0 + u * (r1 * r1 - r0 * r0));
    }
    return r;
  }
  // Default office layout: a single tag sits mid-coverage, several tags form
  // a short ring between 2.3 m and 2.7 m.
  std::vector<double> r(static_cast<size_t>(n_tags));
  if (n_tags == 1) {
    r[0] = 1.5;
  } else {
    for (int n = 0; n < n_tags; ++n)
      r[static_cast<size_t>(n)] = 2.3 + 0.4 * n / (n_tags - 1.0);
  }
  return r;
}

Scenario ScenarioConfig::to_scenario() const {
  const SystemParams p = to_params();
  const auto dist = resolved_tag_distances();
  if (static_cast<int>(dist.size()) != n_tags)
    throw ConfigError("tag_distances_m size must equal n_tags");
  std::vector<TagGeometry> tags;
  tags.reserve(dist.size());
  for (double r : dist) {
    if (!(r > 0.0)) throw ConfigError("tag distances must be > 0");
    tags.push_back({r, interferer_distance_m, 1.0 / n_tags});
  }
  try {
    return Scenario::make(p, std::move(tags));
  } catch (const ModelError& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

ScenarioConfig config_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");

  ScenarioConfig cfg;
  bool n_tags_set = false, distances_set = false;

  for (const auto& [key, value] : j.items()) {
    if (key == "n_tags") {
      cfg.n_tags = get_int(value, key);
      n_tags_set = true;
    } else if (key == "n_channels") {
      cfg.n_channels = get_int(value, key);
    } else if (key == "eta") {
      cfg.eta = get_number(value, key);
    } else if (key == "block_time_s") {
      cfg.block_time_s = get_number(value, key);
    } else if (key == "gamma0") {
      cfg.gamma0 = get_number(value, key);
    } else if (key == "gamma1") {
      cfg.gamma1 = get_number(value, key);
    } else if (key == "noise_dbm") {
      cfg.noise_dbm = get_number(value, key);
    } else if (key == "cost_interferer") {
      cfg.cost_interferer = get_number(value, key);
    } else if (key == "cost_wsn") {
      cfg.cost_wsn = get_number(value, key);
    } else if (key == "sinr_threshold_db") {
      cfg.sinr_threshold_db = get_number(value, key);
    } else if (key == "backscatter_power_threshold_dbm") {
      cfg.backscatter_power_threshold_dbm = get_number(value, key);
    } else if (key == "harvest_power_threshold_dbm") {
      cfg.harvest_power_threshold_dbm = get_number(value, key);
    } else if (key == "p_t_max_dbm") {
      cfg.p_t_max_dbm = get_number(value, key);
    } else if (key == "p_i_max_dbm") {
      cfg.p_i_max_dbm = get_number(value, key);
    } else if (key == "gain_hap_tx_dbi") {
      cfg.gain_hap_tx_dbi = get_number(value, key);
    } else if (key == "gain_tag_dbi") {
      cfg.gain_tag_dbi = get_number(value, key);
    } else if (key == "gain_interferer_dbi") {
      cfg.gain_interferer_dbi = get_number(value, key);
    } else if (key == "carrier_hap_ghz") {
      cfg.carrier_hap_ghz = get_number(value, key);
    } else if (key == "carrier_interferer_ghz") {
      cfg.carrier_interferer_ghz = get_number(value, key);
    } else if (key == "leakage_fraction") {
      cfg.leakage_fraction = get_number(value, key);
    } else if (key == "step_sizes") {
      if (!value.is_object()) throw ConfigError("step_sizes must be an object");
      for (const auto& [sk, sv] : value.items()) {
        const double d = get_number(sv, "step_sizes." + sk);
        if (sk == "omega1")
          cfg.step_sizes.zeta = d;
        else if (sk == "omega2")
          cfg.step_sizes.sinr = d;
        else if (sk == "omega3")
          cfg.step_sizes.power_cap = d;
        else if (sk == "omega4")
          cfg.step_sizes.energy = d;
        else if (sk == "omega5")
          cfg.step_sizes.tau = d;
        else if (sk == "omega6")
          cfg.step_sizes.nu = d;
        else if (sk == "omega7")
          cfg.step_sizes.harvest = d;
        else
          throw ConfigError("unknown step_sizes key '" + sk + "'");
      }
    } else if (key == "tag_distances_m") {
      if (!value.is_array()) throw ConfigError("tag_distances_m must be an array");
      cfg.tag_distances_m.clear();
      for (const auto& e : value) cfg.tag_distances_m.push_back(get_number(e, key));
      distances_set = true;
    } else if (key == "random_tags") {
      if (!value.is_object()) throw ConfigError("random_tags must be an object");
      RandomTagSpec spec;
      for (const auto& [rk, rv] : value.items()) {
        if (rk == "radius_m")
          spec.radius_m = get_number(rv, "random_tags.radius_m");
        else if (rk == "min_radius_m")
          spec.min_radius_m = get_number(rv, "random_tags.min_radius_m");
        else if (rk == "seed")
          spec.seed = get_u64(rv, "random_tags.seed");
        else
          throw ConfigError("unknown random_tags key '" + rk + "'");
      }
      cfg.random_tags = spec;
    } else if (key == "interferer_distance_m") {
      cfg.interferer_distance_m = get_number(value, key);
    } else if (key == "mode") {
      if (!value.is_string()) throw ConfigError("mode must be a string");
      const std::string m = value.get<std::string>();
      if (m == "stackelberg")
        cfg.mode = GameMode::stackelberg;
      else if (m == "nash")
        cfg.mode = GameMode::nash;
      else
        throw ConfigError("mode must be 'stackelberg' or 'nash'");
    } else if (key == "max_rounds") {
      cfg.max_rounds = get_int(value, key);
    } else if (key == "rho_min") {
      cfg.rho_min = get_number(value, key);
    } else if (key == "max_inner_iterations") {
      cfg.max_inner_iterations = get_int(value, key);
    } else if (key == "convergence_tol") {
      cfg.convergence_tol = get_number(value, key);
    } else if (key == "seed") {
      cfg.seed = get_u64(value, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }

  if (distances_set) {
    if (n_tags_set && static_cast<int>(cfg.tag_distances_m.size()) != cfg.n_tags)
      throw ConfigError("tag_distances_m size conflicts with n_tags");
    cfg.n_tags = static_cast<int>(cfg.tag_distances_m.size());
  }
  if (distances_set && cfg.random_tags)
    throw ConfigError("give either tag_distances_m or random_tags, not both");
  if (cfg.max_rounds < 1) throw ConfigError("max_rounds must be >= 1");
  if (cfg.random_tags) {
    if (!(cfg.random_tags->radius_m > 0.0 &&
          cfg.random_tags->min_radius_m > 0.0 &&
          cfg.random_tags->min_radius_m < cfg.random_tags->radius_m))
      throw ConfigError("random_tags radii must satisfy 0 < min_radius_m < radius_m");
  }
  cfg.to_scenario();  // full validation now, so errors surface at load time
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["n_tags"] = cfg.n_tags;
  j["n_channels"] = cfg.n_channels;
  j["eta"] = cfg.eta;
  j["block_time_s"] = cfg.block_time_s;
  j["gamma0"] = cfg.gamma0;
  j["gamma1"] = cfg.gamma1;
  j["noise_dbm"] = cfg.noise_dbm;
  j["cost_interferer"] = cfg.cost_interferer;
  j["cost_wsn"] = cfg.cost_wsn;
  j["sinr_threshold_db"] = cfg.sinr_threshold_db;
  j["backscatter_power_threshold_dbm"] = cfg.backscatter_power_threshold_dbm;
  j["harvest_power_threshold_dbm"] = cfg.harvest_power_threshold_dbm;
  j["p_t_max_dbm"] = cfg.p_t_max_dbm;
  j["p_i_max_dbm"] = cfg.p_i_max_dbm;
  j["gain_hap_tx_dbi"] = cfg.gain_hap_tx_dbi;
  j["gain_tag_dbi"] = cfg.gain_tag_dbi;
  j["gain_interferer_dbi"] = cfg.gain_interferer_dbi;
  j["carrier_hap_ghz"] = cfg.carrier_hap_ghz;
  j["carrier_interferer_ghz"] = cfg.carrier_interferer_ghz;
  j["leakage_fraction"] = cfg.leakage_fraction;
  j["step_sizes"] = {{"omega1", cfg.step_sizes.zeta},     {"omega2", cfg.step_sizes.sinr},
                     {"omega3", cfg.step_sizes.power_cap}, {"omega4", cfg.step_sizes.energy},
                     {"omega5", cfg.step_sizes.tau},       {"omega6", cfg.step_sizes.nu},
                     {"omega7", cfg.step_sizes.harvest}};
  j["tag_distances_m"] = cfg.resolved_tag_distances();
  j["interferer_distance_m"] = cfg.interferer_distance_m;
  j["mode"] = cfg.mode == GameMode::stackelberg ? "stackelberg" : "nash";
  j["max_rounds"] = cfg.max_rounds;
  j["rho_min"] = cfg.rho_min;
  j["max_inner_iterations"] = cfg.max_inner_iterations;
  j["convergence_tol"] = cfg.convergence_tol;
  j["seed"] = cfg.seed;
  return j.dump(2);
}

}  // namespace bswsn

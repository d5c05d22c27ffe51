#include "bswsn/model.hpp"

#include <cmath>
#include <numbers>

namespace bswsn {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw ModelError(msg);
}

double friis(double gain_tx, double gain_rx, double wavelength, double r) {
  if (!(r > 0.0)) throw ModelError("invalid geometry: distance must be > 0");
  const double denom = 4.0 * std::numbers::pi * r;
  return gain_tx * gain_rx * wavelength * wavelength / (denom * denom);
}

}  // namespace

void SystemParams::validate() const {
  require(eta > 0.0 && eta <= 1.0, "eta must lie in (0,1]");
  require(block_time > 0.0, "block_time must be > 0");
  require(n_tags >= 1, "n_tags must be >= 1");
  require(n_channels >= 1, "n_channels must be >= 1");
  require(noise_power > 0.0, "noise_power must be > 0");
  require(reflection_gap_sq() > 0.0,
          "gamma0 == gamma1: backscatter power is identically zero (degenerate game)");
  require(cost_interferer > 0.0, "cost_interferer must be > 0");
  require(cost_wsn > 0.0, "cost_wsn must be > 0");
  require(sinr_threshold > 0.0, "sinr_threshold must be > 0");
  require(backscatter_power_threshold > 0.0, "backscatter_power_threshold must be > 0");
  require(harvest_power_threshold > 0.0, "harvest_power_threshold must be > 0");
  require(p_t_max > 0.0, "p_t_max must be > 0");
  require(p_i_max > 0.0, "p_i_max must be > 0");
  require(gain_hap_tx > 0.0 && gain_tag > 0.0 && gain_interferer > 0.0,
          "antenna gains must be > 0");
  require(wavelength_hap > 0.0 && wavelength_interferer > 0.0, "wavelengths must be > 0");
  require(step.zeta > 0.0 && step.sinr > 0.0 && step.power_cap > 0.0 && step.energy > 0.0 &&
              step.tau > 0.0 && step.nu > 0.0 && step.harvest > 0.0,
          "all step sizes must be > 0");
  require(leakage_fraction >= 0.0 && leakage_fraction < 1.0,
          "leakage_fraction must lie in [0,1)");
  require(rho_min > 0.0 && rho_min < 0.5, "rho_min must lie in (0,0.5)");
  require(rho_fix < 0.0 || (rho_fix > 0.0 && rho_fix < 1.0),
          "rho_fix must lie in (0,1) when set");
  require(max_inner_iterations >= 1, "max_inner_iterations must be >= 1");
  require(accept_tolerance > 0.0, "accept_tolerance must be > 0");
}

double channel_gain_hap(const SystemParams& params, double r) {
  return friis(params.gain_hap_tx, params.gain_tag, params.wavelength_hap, r);
}

double channel_gain_interferer(const SystemParams& params, double r) {
  // The receive gain on this link is the H-AP antenna gain, as modeled.
  return friis(params.gain_interferer, params.gain_hap_tx, params.wavelength_interferer, r);
}

double harvested_energy(const SystemParams& params, double rho, double h, double p_t) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ModelError("harvested_energy: rho must lie in [0,1]");
  if (!(h > 0.0)) throw ModelError("harvested_energy: h must be > 0");
  if (!(p_t >= 0.0)) throw ModelError("harvested_energy: p_t must be >= 0");
  return params.eta * (1.0 - rho) * params.block_time * h * p_t;
}

double backscatter_power(double e_n, double rho, const SystemParams& params, double t_n) {
  if (!(e_n >= 0.0)) throw ModelError("backscatter_power: energy must be >= 0");
  if (!(rho > 0.0 && rho <= 1.0))
    throw ModelError("backscatter_power: rho must lie in (0,1] (no backscatter time at rho=0)");
  if (!(t_n > 0.0)) throw ModelError("backscatter_power: time slot must be > 0");
  return e_n / (rho * params.block_time * t_n);
}

double sinr(int delta, double p_b, double h, const SystemParams& params, double p_i, double l) {
  if (!(p_b >= 0.0 && p_i >= 0.0)) throw ModelError("sinr: powers must be >= 0");
  if (!(h > 0.0 && l > 0.0)) throw ModelError("sinr: gains must be > 0");
  if (delta == 0) return 0.0;
  return p_b * h * params.reflection_gap_sq() / (p_i * l + params.noise_power);
}

double coefficient_a(int delta, const SystemParams& params, double h, double t_n) {
  if (delta == 0) return 0.0;
  return params.eta * h * h * params.reflection_gap_sq() / t_n;
}

Scenario Scenario::make(SystemParams params, std::vector<TagGeometry> tags) {
  params.validate();
  if (static_cast<int>(tags.size()) != params.n_tags)
    throw ModelError("geometry list size does not match n_tags");
  const double slot = 1.0 / params.n_tags;
  Scenario s;
  s.gains.reserve(tags.size());
  for (auto& tag : tags) {
    if (!(tag.r_hap > 0.0 && tag.r_interferer > 0.0))
      throw ModelError("invalid geometry: tag distances must be > 0");
    tag.time_slot = slot;  // equal TDMA share, by construction
    s.gains.push_back({channel_gain_hap(params, tag.r_hap),
                       channel_gain_interferer(params, tag.r_interferer)});
  }
  s.params = params;
  s.tags = std::move(tags);
  return s;
}

}  // namespace bswsn

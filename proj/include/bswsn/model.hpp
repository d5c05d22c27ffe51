#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bswsn {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a scenario's constraint set is empty; names the binding constraint.
struct InfeasibleError : std::runtime_error {
  std::string binding_constraint;
  InfeasibleError(const std::string& constraint, const std::string& msg)
      : std::runtime_error(msg), binding_constraint(constraint) {}
};

// Gradient step sizes omega_1..omega_7, one per multiplier family.
struct StepSizes {
  double zeta = 0.1;        // omega_1, interferer power cap
  double sinr = 1e-3;       // omega_2, SINR threshold
  double power_cap = 1.0;   // omega_3, H-AP power cap
  double energy = 1e6;      // omega_4, backscatter energy threshold
  double tau = 0.1;         // omega_5, rho >= 0
  double nu = 0.1;          // omega_6, rho <= 1
  double harvest = 1e6;     // omega_7, harvest threshold
};

// All scenario constants in linear SI units. dB/dBm/dBi only exist at the
// configuration boundary (see config.hpp).
struct SystemParams {
  double eta = 0.5;                 // energy-harvesting efficiency, (0,1]
  double block_time = 1.0;          // T, seconds
  int n_tags = 3;                   // N
  int n_channels = 14;              // K
  double gamma0 = 1.0;              // reflection coefficients
  double gamma1 = -1.0;
  double noise_power = 1e-12;       // N_B, watts
  double cost_interferer = 1.0;     // C_I, per unit power
  double cost_wsn = 1.0;            // C_B, per unit power
  double sinr_threshold = 10.0;     // linear
  double backscatter_power_threshold = 1.5848931924611134e-5;  // watts (-18 dBm)
  double harvest_power_threshold = 6.309573444801933e-6;       // watts (-22 dBm)
  double p_t_max = 0.1;             // watts (20 dBm)
  double p_i_max = 1.0;             // watts (30 dBm)
  double gain_hap_tx = 3.9810717055349722;   // G_t, linear (6 dBi)
  double gain_tag = 1.5135612484362082;      // G_r, linear (1.8 dBi)
  double gain_interferer = 3.9810717055349722;  // G_i, linear (6 dBi)
  double wavelength_hap = 0.12491352416666666;        // lambda_B, m (2.4 GHz)
  double wavelength_interferer = 0.12491352416666666; // lambda_j, m (2.4 GHz)
  StepSizes step;
  double leakage_fraction = 0.0;    // epsilon: fraction of P_I on non-attacked channels
  double rho_min = 1e-3;            // rho projection interval [rho_min, 1-rho_min]
  double rho_fix = -1.0;            // >0: hold rho at this value (rho sweeps)
  int max_inner_iterations = 500;   // per best-response call
  double accept_tolerance = 1e-9;   // relative utility-change stop

  double reflection_gap_sq() const {
    const double d = gamma0 - gamma1;
    return d * d;
  }

  // Throws ModelError on any invariant violation.
  void validate() const;
};

struct TagGeometry {
  double r_hap;         // r_n, meters
  double r_interferer;  // r_{j,n}, meters
  double time_slot;     // t_n, fraction (1/N for all tags)
};

// Per-tag link gains. h is always derived from geometry, never set directly.
struct ChannelState {
  double h;  // forward gain, H-AP -> tag
  double l;  // interference gain, interferer -> tag
};

// Friis gain of the H-AP -> tag link.
double channel_gain_hap(const SystemParams& params, double r);

// Friis gain of the interferer -> tag link.
double channel_gain_interferer(const SystemParams& params, double r);

// Energy harvested by a tag over the block, joules.
double harvested_energy(const SystemParams& params, double rho, double h, double p_t);

// Average tag transmit power during its backscatter slot, watts.
double backscatter_power(double e_n, double rho, const SystemParams& params, double t_n);

// Received SINR of a tag's backscatter link, linear ratio.
double sinr(int delta, double p_b, double h, const SystemParams& params, double p_i, double l);

// Composite coefficient A_{k,n} = delta * eta * h^2 * |gamma0-gamma1|^2 / t_n.
// The single definition every solver consumes.
double coefficient_a(int delta, const SystemParams& params, double h, double t_n);

// A fully constructed instance: params plus per-tag geometry and cached gains.
struct Scenario {
  SystemParams params;
  std::vector<TagGeometry> tags;
  std::vector<ChannelState> gains;

  int n_tags() const { return static_cast<int>(tags.size()); }

  // Validates params and geometry, computes the cached gains.
  static Scenario make(SystemParams params, std::vector<TagGeometry> tags);
};

// One interferer action: full power on the attacked channel, leakage elsewhere.
struct InterferenceProfile {
  double p_i = 0.0;
  int attacked_channel = -1;  // -1: interferer silent / not aimed

  double on_channel(int k, const SystemParams& params) const {
    if (attacked_channel < 0 || p_i <= 0.0) return 0.0;
    return k == attacked_channel ? p_i : params.leakage_fraction * p_i;
  }
};

}  // namespace bswsn

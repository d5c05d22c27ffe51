#pragma once

#include <span>
#include <string>
#include <vector>

#include "bswsn/kernels.hpp"
#include "bswsn/states.hpp"

namespace bswsn {

// anticipating: the Stackelberg leader optimizes the substituted objective
// (interferer's power response folded into each tag's denominator).
// myopic: the Nash-baseline leader optimizes the utility at the observed,
// fixed interference profile and never shifts sub-channels.
enum class LeaderMode { anticipating, myopic };

// Per-tag composites consumed by the closed forms and residual checks.
// Recomputed from the current state at every evaluation, never cached.
struct LeaderCoefficients {
  std::vector<double> a;  // A_n
  std::vector<double> b;  // B_n = l_n P_n A_n
  std::vector<double> c;  // C_n = C_I + zeta_n
  std::vector<double> d;  // collected P-gradient constant of L_B (costs, multipliers, alpha term)
  std::vector<double> e;  // per-tag rho-gradient constant (mu terms)
  std::vector<double> f;  // anticipated signal coefficient K_n = sqrt(P_n A_n C_n / l_n)
  std::vector<double> d_obs;  // observed per-tag denominator P_I,kn l_n + N_B
  double k2 = 0.0;        // aggregate rho-gradient constant nu - tau + sum mu terms
  double g = 0.0;         // root intermediate K2 / sqrt((sum f)^2 + K2^2)
};

LeaderCoefficients leader_coefficients(const LeaderState& state,
                                       const InterferenceProfile& observed, const Scenario& s,
                                       const std::vector<double>& zeta, LeaderMode mode);

// Realized utility at a given interference profile (leakage-aware).
double utility_wsn(const LeaderState& state, const InterferenceProfile& profile,
                   const Scenario& s);

// Substituted utility: each tag's denominator carries the interferer's
// clamped water-filling power response to this very action.
double anticipated_utility_wsn(const LeaderState& state, const Scenario& s,
                               const std::vector<double>& zeta);

// The mode's bare objective (no multiplier terms).
double leader_objective(const LeaderState& state, const InterferenceProfile& observed,
                        const Scenario& s, const std::vector<double>& zeta, LeaderMode mode);

// Full Lagrangian at an arbitrary primal point, with the state's multipliers.
// This single definition is what the closed forms differentiate and what the
// grid oracle maximizes.
double leader_lagrangian_at(std::span<const double> p_t, double rho,
                            const LeaderState& multipliers, const InterferenceProfile& observed,
                            const Scenario& s, const std::vector<double>& zeta, LeaderMode mode);

// Kernel argument assembly for one tag at fixed rho; shared by the scalar
// Lagrangian evaluation and the oracle's batched grids.
kernels::LeaderTagBatchArgs leader_tag_batch_args(int n, double rho,
                                                  const LeaderState& multipliers,
                                                  const InterferenceProfile& observed,
                                                  const Scenario& s,
                                                  const std::vector<double>& zeta,
                                                  LeaderMode mode);

// Sub-channel shifting: any tag whose required power on its current channel
// exceeds the cap moves to its highest-SINR channel (lowest index on ties).
LeaderState allocate_subchannel(LeaderState state, const InterferenceProfile& profile,
                                const Scenario& s);

// Closed-form transmit power per tag at fixed rho, positive part, clamped to
// [0, P_t,max]. Interior values zero the P-gradient of L_B.
std::vector<double> optimal_transmit_power(const LeaderCoefficients& coeffs, double rho,
                                           const Scenario& s, LeaderMode mode);

struct RhoStep {
  double rho;
  bool closed_form;  // false: numeric fallback path was used
};

// Closed-form time-switching ratio (alpha = 0 root of the rho-gradient),
// numeric maximization fallback otherwise; projected into
// [rho_min, 1 - rho_min].
RhoStep optimal_time_switching(const LeaderCoefficients& coeffs, const std::vector<double>& p_t,
                               const LeaderState& multipliers,
                               const InterferenceProfile& observed, const Scenario& s,
                               const std::vector<double>& zeta, LeaderMode mode);

// Signed slacks of the constraint set at the observed profile.
struct LeaderSlacks {
  std::vector<double> sinr;       // SINR_kn - SINR_TH
  std::vector<double> cap;        // P_t,max - P_n
  std::vector<double> energy;     // E_n - t_n rho T P_B,TH
  std::vector<double> harvest;    // eta h_n P_n - eta T P_EH,TH (multiplier-update form)
  std::vector<double> harvest_e;  // E_n - eta (1-rho) T P_EH,TH (constraint-set form)
  double rho_lo = 0.0;            // rho
  double rho_hi = 0.0;            // 1 - rho
  bool delta_valid = true;        // exactly one active channel per tag
};

LeaderSlacks leader_slacks(const LeaderState& state, const InterferenceProfile& observed,
                           const Scenario& s);

// Projected gradient updates of all six multiplier families.
LeaderState update_leader_multipliers(LeaderState state, const LeaderSlacks& slacks,
                                      const SystemParams& params);

// Threshold-forced lower bounds on P at a given rho (harvest + backscatter).
std::vector<double> transmit_floor(double rho, const Scenario& s);

// Largest rho at which every tag's backscatter threshold is satisfiable at
// P_t,max.
double backscatter_rho_edge(const Scenario& s);

// Table-I style inner loop: shift (anticipating mode only), then iterate
// closed-form primal steps, accept on objective improvement, update
// multipliers otherwise. Throws InfeasibleError when the constraint set is
// structurally empty.
LeaderState leader_best_response(const InterferenceProfile& observed, const Scenario& s,
                                 LeaderState state, const std::vector<double>& zeta,
                                 LeaderMode mode);

struct StationarityResidual {
  std::vector<double> d_p;        // dL_B/dP_n
  double d_rho = 0.0;             // dL_B/drho
  std::vector<double> p_scale;    // leading-term magnitude per tag
  double rho_scale = 0.0;         // leading-term magnitude of the rho gradient
  std::vector<double> p_floor;    // active lower bound (thresholds + SINR requirement)
  std::vector<bool> p_at_floor;   // P_n pinned at p_floor (or at 0)
  std::vector<bool> p_at_cap;     // P_n pinned at P_t,max
  std::vector<bool> p_boundary;   // any active bound on P_n
  bool rho_boundary = false;      // rho at rho_min / 1-rho_min / backscatter edge / pinned
  // One-sided derivatives along the floor-projected feasible manifold
  // (envelope form: d_rho + sum over pinned tags of d_p * dfloor/drho).
  // These vanish (sandwich zero) at a projected-interior optimum even when
  // threshold floors couple P to rho.
  double d_rho_proj_left = 0.0;
  double d_rho_proj_right = 0.0;
  bool rho_floor_coupled = false;  // some tag rides a rho-dependent floor
};

// Analytic first derivatives of the implemented Lagrangian at the state's
// primal point; validated against central finite differences in the tests.
StationarityResidual check_leader_stationarity(const LeaderState& state,
                                               const InterferenceProfile& observed,
                                               const Scenario& s,
                                               const std::vector<double>& zeta, LeaderMode mode);

struct FeasibilityReport {
  LeaderSlacks slacks;
  double worst_normalized = 0.0;  // min slack / scale
  std::string binding;            // constraint family of the worst slack
  bool feasible = true;           // worst_normalized >= -1e-6
};

FeasibilityReport check_leader_feasibility(const LeaderState& state,
                                           const InterferenceProfile& observed,
                                           const Scenario& s);

}  // namespace bswsn

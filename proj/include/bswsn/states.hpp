#pragma once

#include <vector>

#include "bswsn/model.hpp"

namespace bswsn {

// The WSN's decision variables and the six multiplier families. The N-by-K
// binary indicator matrix is stored as one active channel index per tag
// (exactly one delta per row, by construction); multipliers indexed (k,n)
// in the formulation live on the tag's active channel.
struct LeaderState {
  std::vector<double> p_t;      // per-tag H-AP transmit power, watts
  double rho = 0.5;             // time-switching ratio
  std::vector<int> channel;     // active sub-channel per tag, 0-based

  std::vector<double> alpha;    // SINR threshold multipliers
  std::vector<double> beta;     // power cap multipliers
  std::vector<double> mu;       // backscatter energy threshold multipliers
  std::vector<double> gamma;    // harvest threshold multipliers
  double nu = 0.0;              // rho <= 1
  double tau = 0.0;             // rho >= 0

  double utility = 0.0;         // last accepted objective value
  int iteration = 0;            // inner iterations spent in the last call
  int accepted_steps = 0;       // improving steps accepted in the last call
  int fallback_steps = 0;       // numeric rho steps among the accepted ones
  bool feasible = true;
  bool converged = true;

  int delta(int n, int k) const { return channel[static_cast<size_t>(n)] == k ? 1 : 0; }

  static LeaderState initial(const Scenario& s);
};

struct FollowerState {
  double p_i = 0.0;             // interference power, watts
  std::vector<double> zeta;     // per-tag multipliers
  int attacked_channel = -1;    // -1 until the interferer has aimed
  double utility = 0.0;
  int iteration = 0;
  bool converged = true;

  InterferenceProfile profile() const { return {p_i, attacked_channel}; }

  static FollowerState initial(const Scenario& s);
};

// A_n of the tag's active channel (delta = 1 there).
double coefficient_a_tag(const Scenario& s, int n);

// x_n = rho*(1-rho) * P_t,n * A_n: the duty-weighted signal strength each
// utility's per-tag numerator reduces to.
std::vector<double> duty_signal(const LeaderState& leader, const Scenario& s);

// Interference power each tag sees on its own channel under a profile.
std::vector<double> observed_interference(const LeaderState& leader,
                                          const InterferenceProfile& profile,
                                          const Scenario& s);

}  // namespace bswsn

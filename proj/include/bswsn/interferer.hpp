#pragma once

#include <vector>

#include "bswsn/states.hpp"

namespace bswsn {

// Sub-channel carrying the strongest observed backscatter signal (summed
// duty-weighted power); lowest index wins ties.
int strongest_signal_channel(const LeaderState& leader, const Scenario& s);

// U_I: negated SINR sum of the tags on the attacked channel minus the
// interference power cost. Tags the interference misses do not enter.
double utility_interferer(const LeaderState& leader, double p_i, int attacked_channel,
                          const Scenario& s);

// Interferer Lagrangian L_I = U_I + sum_n zeta_n (P_I,max - P_I).
double interferer_lagrangian(const LeaderState& leader, double p_i, int attacked_channel,
                             const Scenario& s, const std::vector<double>& zeta);

// Water-filling best response on the attacked channel, clamped to
// [0, P_I,max]. One active tag: closed form; several: bisection on the
// summed first-order condition.
double optimal_interference_power(const LeaderState& leader, int attacked_channel,
                                  const Scenario& s, const std::vector<double>& zeta);

// zeta_n <- [zeta_n - omega_1 (P_I,max - P_I*)]^+
std::vector<double> update_zeta(std::vector<double> zeta, double p_i_star,
                                const SystemParams& params);

// Full follower move: aim at the observed signal, iterate power + multiplier
// updates under the accept test, return the new state.
FollowerState interferer_best_response(const LeaderState& observed_leader, const Scenario& s,
                                       FollowerState state);

// dL_I/dP_I at the given point. ~0 at interior optima, < 0 at a P_I = 0
// boundary optimum.
double check_follower_stationarity(double p_i, const LeaderState& leader, int attacked_channel,
                                   const Scenario& s, const std::vector<double>& zeta);

// d^2 U_I / dP_I^2, closed form; strictly negative whenever signal is present.
double follower_second_derivative(double p_i, const LeaderState& leader, int attacked_channel,
                                  const Scenario& s);

}  // namespace bswsn

#include "bswsn/interferer.hpp"

#include <algorithm>
#include <cmath>

#include "bswsn/optim.hpp"

namespace bswsn {

namespace {

// Per-tag x_n = rho(1-rho) P_t,n A_n restricted to the attacked channel, with
// the matching interference gains.
struct AttackedSignals {
  std::vector<double> x, l;
  double zeta_all = 0.0;
  int active_tags = 0;
  int single_tag = -1;  // index when exactly one tag is active
};

AttackedSignals collect(const LeaderState& leader, int attacked_channel, const Scenario& s,
                        const std::vector<double>& zeta) {
  AttackedSignals out;
  const auto x_all = duty_signal(leader, s);
  for (size_t n = 0; n < x_all.size(); ++n) {
    out.zeta_all += zeta.empty() ? 0.0 : zeta[n];
    if (leader.channel[n] != attacked_channel) continue;
    out.x.push_back(x_all[n]);
    out.l.push_back(s.gains[n].l);
    out.single_tag = static_cast<int>(n);
    ++out.active_tags;
  }
  if (out.active_tags != 1) out.single_tag = -1;
  return out;
}

void check_rho(double rho) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw ModelError("utility: rho must lie in (0,1] (no backscatter time at rho=0)");
}

}  // namespace

int strongest_signal_channel(const LeaderState& leader, const Scenario& s) {
  const auto x = duty_signal(leader, s);
  std::vector<double> per_channel(static_cast<size_t>(s.params.n_channels), 0.0);
  for (size_t n = 0; n < x.size(); ++n) per_channel[static_cast<size_t>(leader.channel[n])] += x[n];
  int best = 0;
  for (int k = 1; k < s.params.n_channels; ++k)
    if (per_channel[static_cast<size_t>(k)] > per_channel[static_cast<size_t>(best)]) best = k;
  return best;
}

double utility_interferer(const LeaderState& leader, double p_i, int attacked_channel,
                          const Scenario& s) {
  check_rho(leader.rho);
  if (!(p_i >= 0.0)) throw ModelError("utility_interferer: p_i must be >= 0");
  double damage = 0.0;
  if (attacked_channel >= 0) {
    const auto sig = collect(leader, attacked_channel, s, {});
    for (size_t i = 0; i < sig.x.size(); ++i)
      damage += sig.x[i] / (p_i * sig.l[i] + s.params.noise_power);
  }
  return -damage - s.params.cost_interferer * p_i;
}

double interferer_lagrangian(const LeaderState& leader, double p_i, int attacked_channel,
                             const Scenario& s, const std::vector<double>& zeta) {
  double zsum = 0.0;
  for (double z : zeta) zsum += z;
  return utility_interferer(leader, p_i, attacked_channel, s) + zsum * (s.params.p_i_max - p_i);
}

double optimal_interference_power(const LeaderState& leader, int attacked_channel,
                                  const Scenario& s, const std::vector<double>& zeta) {
  check_rho(leader.rho);
  const auto sig = collect(leader, attacked_channel, s, zeta);
  if (sig.active_tags == 0)
    throw ModelError("optimal_interference_power: no active tag on the attacked sub-channel");
  const double nb = s.params.noise_power;
  const double price = s.params.cost_interferer + sig.zeta_all;

  double p_star;
  if (sig.single_tag >= 0) {
    // (sqrt(l * x / price) - N_B) / l, positive part
    const double q = std::sqrt(sig.l[0] * sig.x[0] / price);
    p_star = std::max(0.0, (q - nb) / sig.l[0]);
  } else {
    // summed FOC: sum_n l_n x_n / (P l_n + N_B)^2 = price; LHS strictly decreasing
    auto foc = [&](double p) {
      double lhs = 0.0;
      for (size_t i = 0; i < sig.x.size(); ++i) {
        const double den = p * sig.l[i] + nb;
        lhs += sig.l[i] * sig.x[i] / (den * den);
      }
      return lhs - price;
    };
    if (foc(0.0) <= 0.0)
      p_star = 0.0;
    else if (foc(s.params.p_i_max) >= 0.0)
      p_star = s.params.p_i_max;
    else
      p_star = optim::bisect_decreasing_root(foc, 0.0, s.params.p_i_max);
  }
  return std::clamp(p_star, 0.0, s.params.p_i_max);
}

std::vector<double> update_zeta(std::vector<double> zeta, double p_i_star,
                                const SystemParams& params) {
  const double grad = params.p_i_max - p_i_star;
  for (double& z : zeta) z = std::max(0.0, z - params.step.zeta * grad);
  return zeta;
}

FollowerState interferer_best_response(const LeaderState& observed_leader, const Scenario& s,
                                       FollowerState state) {
  state.attacked_channel = strongest_signal_channel(observed_leader, s);
  if (state.zeta.size() != observed_leader.p_t.size())
    state.zeta.assign(observed_leader.p_t.size(), 0.0);

  double best_u =
      utility_interferer(observed_leader, state.p_i, state.attacked_channel, s);
  double best_p = state.p_i;
  auto best_zeta = state.zeta;

  state.converged = false;
  int it = 0;
  for (; it < s.params.max_inner_iterations; ++it) {
    const double p_star =
        optimal_interference_power(observed_leader, state.attacked_channel, s, state.zeta);
    const double u = utility_interferer(observed_leader, p_star, state.attacked_channel, s);
    const bool improved = u > best_u + s.params.accept_tolerance * std::abs(best_u);
    if (improved) {
      best_u = u;
      best_p = p_star;
      best_zeta = state.zeta;
      state.p_i = p_star;
    } else {
      auto next_zeta = update_zeta(state.zeta, p_star, s.params);
      if (next_zeta == state.zeta) {  // accept test failed and dual is stationary
        state.converged = true;
        ++it;
        break;
      }
      state.zeta = std::move(next_zeta);
    }
  }
  state.p_i = best_p;
  state.zeta = std::move(best_zeta);
  state.utility = best_u;
  state.iteration = it;
  return state;
}

double check_follower_stationarity(double p_i, const LeaderState& leader, int attacked_channel,
                                   const Scenario& s, const std::vector<double>& zeta) {
  const auto sig = collect(leader, attacked_channel, s, zeta);
  const double nb = s.params.noise_power;
  double lhs = 0.0;
  for (size_t i = 0; i < sig.x.size(); ++i) {
    const double den = p_i * sig.l[i] + nb;
    lhs += sig.l[i] * sig.x[i] / (den * den);
  }
  return lhs - s.params.cost_interferer - sig.zeta_all;
}

double follower_second_derivative(double p_i, const LeaderState& leader, int attacked_channel,
                                  const Scenario& s) {
  const auto sig = collect(leader, attacked_channel, s, {});
  const double nb = s.params.noise_power;
  double d2 = 0.0;
  for (size_t i = 0; i < sig.x.size(); ++i) {
    const double den = p_i * sig.l[i] + nb;
    d2 -= 2.0 * sig.x[i] * sig.l[i] * sig.l[i] / (den * den * den);
  }
  return d2;
}

}  // namespace bswsn

#include "bswsn/wsn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bswsn/optim.hpp"

namespace bswsn {

namespace {

void check_rho_open(double rho) {
  if (!(rho > 0.0 && rho <= 1.0))
    throw ModelError("utility_wsn: rho must lie in (0,1] (division by zero at rho=0)");
}

double zeta_at(const std::vector<double>& zeta, size_t n) {
  return n < zeta.size() ? zeta[n] : 0.0;
}

// Substituted per-tag denominator: the interferer's clamped water-filling
// response to signal x on a link with gain l and price c.
double substituted_denominator(double x, double l, double c, const SystemParams& p) {
  const double q = std::sqrt(x * l / c);
  const double qcap = p.p_i_max * l + p.noise_power;
  if (q <= p.noise_power) return p.noise_power;
  if (q >= qcap) return qcap;
  return q;
}

constexpr double kMultiplierEps = 1e-12;

bool multipliers_stationary(const LeaderState& a, const LeaderState& b) {
  auto near_eq = [](double x, double y) {
    return std::abs(x - y) <= kMultiplierEps * (1.0 + std::abs(x));
  };
  for (size_t n = 0; n < a.alpha.size(); ++n) {
    if (!near_eq(a.alpha[n], b.alpha[n]) || !near_eq(a.beta[n], b.beta[n]) ||
        !near_eq(a.mu[n], b.mu[n]) || !near_eq(a.gamma[n], b.gamma[n]))
      return false;
  }
  return near_eq(a.nu, b.nu) && near_eq(a.tau, b.tau);
}

}  // namespace

double utility_wsn(const LeaderState& state, const InterferenceProfile& profile,
                   const Scenario& s) {
  check_rho_open(state.rho);
  const auto x = duty_signal(state, s);
  double signal = 0.0, spend = 0.0;
  for (size_t n = 0; n < x.size(); ++n) {
    const double p_i_k = profile.on_channel(state.channel[n], s.params);
    signal += x[n] / (p_i_k * s.gains[n].l + s.params.noise_power);
    spend += state.p_t[n];
  }
  return signal - s.params.cost_wsn * spend;
}

double anticipated_utility_wsn(const LeaderState& state, const Scenario& s,
                               const std::vector<double>& zeta) {
  check_rho_open(state.rho);
  const auto x = duty_signal(state, s);
  double signal = 0.0, spend = 0.0;
  for (size_t n = 0; n < x.size(); ++n) {
    const double c = s.params.cost_interferer + zeta_at(zeta, n);
    const double d = substituted_denominator(x[n], s.gains[n].l, c, s.params);
    signal += x[n] / d;
    spend += state.p_t[n];
  }
  return signal - s.params.cost_wsn * spend;
}

double leader_objective(const LeaderState& state, const InterferenceProfile& observed,
                        const Scenario& s, const std::vector<double>& zeta, LeaderMode mode) {
  return mode == LeaderMode::anticipating ? anticipated_utility_wsn(state, s, zeta)
                                          : utility_wsn(state, observed, s);
}

kernels::LeaderTagBatchArgs leader_tag_batch_args(int n, double rho,
                                                  const LeaderState& multipliers,
                                                  const InterferenceProfile& observed,
                                                  const Scenario& s,
                                                  const std::vector<double>& zeta,
                                                  LeaderMode mode) {
  const auto i = static_cast<size_t>(n);
  const SystemParams& p = s.params;
  const double a = coefficient_a_tag(s, n);
  const double h = s.gains[i].h;
  const double l = s.gains[i].l;
  const double t_n = s.tags[i].time_slot;
  const double c = p.cost_interferer + zeta_at(zeta, i);
  const double d_obs = observed.on_channel(multipliers.channel[i], p) * l + p.noise_power;

  kernels::LeaderTagBatchArgs args{};
  args.anticipated = (mode == LeaderMode::anticipating);
  args.sa = rho * (1.0 - rho) * a;
  args.lc = l / c;
  args.qcap = p.p_i_max * l + p.noise_power;
  args.d_obs = d_obs;
  args.nb = p.noise_power;

  const double alpha = multipliers.alpha[i];
  const double beta = multipliers.beta[i];
  const double mu = multipliers.mu[i];
  const double gamma = multipliers.gamma[i];
  args.lin = -p.cost_wsn - beta + gamma * p.eta * h +
             mu * p.eta * (1.0 - rho) * p.block_time * h +
             alpha * ((1.0 - rho) / rho) * a / d_obs;
  args.cst = -alpha * p.sinr_threshold - gamma * p.eta * p.block_time * p.harvest_power_threshold +
             beta * p.p_t_max - mu * t_n * rho * p.block_time * p.backscatter_power_threshold;
  return args;
}

double leader_lagrangian_at(std::span<const double> p_t, double rho,
                            const LeaderState& multipliers, const InterferenceProfile& observed,
                            const Scenario& s, const std::vector<double>& zeta, LeaderMode mode) {
  check_rho_open(rho);
  double total = multipliers.nu * (1.0 - rho) + multipliers.tau * rho;
  for (size_t n = 0; n < p_t.size(); ++n) {
    const auto args =
        leader_tag_batch_args(static_cast<int>(n), rho, multipliers, observed, s, zeta, mode);
    double out = 0.0;
    kernels::scalar::leader_tag_objective_batch({&p_t[n], 1}, {&out, 1}, args);
    total += out;
  }
  return total;
}

LeaderCoefficients leader_coefficients(const LeaderState& state,
                                       const InterferenceProfile& observed, const Scenario& s,
                                       const std::vector<double>& zeta, LeaderMode mode) {
  const SystemParams& p = s.params;
  const auto n_tags = state.p_t.size();
  LeaderCoefficients co;
  co.a.resize(n_tags);
  co.b.resize(n_tags);
  co.c.resize(n_tags);
  co.d.resize(n_tags);
  co.e.resize(n_tags);
  co.f.resize(n_tags);
  co.d_obs.resize(n_tags);
  double fsum = 0.0;
  co.k2 = state.nu - state.tau;
  for (size_t n = 0; n < n_tags; ++n) {
    const auto args = leader_tag_batch_args(static_cast<int>(n), state.rho, state, observed, s,
                                            zeta, mode);
    const double h = s.gains[n].h;
    co.a[n] = coefficient_a_tag(s, static_cast<int>(n));
    co.b[n] = s.gains[n].l * state.p_t[n] * co.a[n];
    co.c[n] = p.cost_interferer + zeta_at(zeta, n);
    co.d[n] = args.lin;
    co.e[n] = -state.mu[n] * (p.eta * p.block_time * h * state.p_t[n] +
                              s.tags[n].time_slot * p.block_time * p.backscatter_power_threshold);
    co.f[n] = std::sqrt(state.p_t[n] * co.a[n] * co.c[n] / s.gains[n].l);
    co.d_obs[n] = args.d_obs;
    fsum += co.f[n];
    co.k2 -= co.e[n];
  }
  const double denom = std::sqrt(fsum * fsum + co.k2 * co.k2);
  co.g = denom > 0.0 ? co.k2 / denom : 0.0;
  return co;
}

std::vector<double> optimal_transmit_power(const LeaderCoefficients& coeffs, double rho,
                                           const Scenario& s, LeaderMode mode) {
  const SystemParams& p = s.params;
  const double rr = rho * (1.0 - rho);
  std::vector<double> out(coeffs.a.size());
  for (size_t n = 0; n < out.size(); ++n) {
    double p_star;
    if (mode == LeaderMode::anticipating) {
      if (coeffs.d[n] >= 0.0) {
        p_star = p.p_t_max;  // marginal value never crosses the price
      } else {
        const double l = s.gains[n].l;
        p_star = rr * coeffs.a[n] * coeffs.c[n] / (4.0 * l * coeffs.d[n] * coeffs.d[n]);
      }
    } else {
      const double slope = rr * coeffs.a[n] / coeffs.d_obs[n] + coeffs.d[n];
      p_star = slope > 0.0 ? p.p_t_max : 0.0;
    }
    out[n] = std::clamp(p_star, 0.0, p.p_t_max);
  }
  return out;
}

RhoStep optimal_time_switching(const LeaderCoefficients& coeffs, const std::vector<double>& p_t,
                               const LeaderState& multipliers,
                               const InterferenceProfile& observed, const Scenario& s,
                               const std::vector<double>& zeta, LeaderMode mode) {
  const SystemParams& p = s.params;
  const double lo = p.rho_min, hi = 1.0 - p.rho_min;
  double alpha_max = 0.0;
  for (double a : multipliers.alpha) alpha_max = std::max(alpha_max, a);

  if (alpha_max <= 1e-15) {
    double rho_star;
    if (mode == LeaderMode::anticipating) {
      double fsum = 0.0;
      for (double f : coeffs.f) fsum += f;
      if (fsum <= 0.0) {
        rho_star = coeffs.k2 >= 0.0 ? lo : hi;
      } else {
        const double u = coeffs.k2 / std::sqrt(fsum * fsum + coeffs.k2 * coeffs.k2);
        rho_star = 0.5 * (1.0 - u);
      }
    } else {
      double gsum = 0.0;
      for (size_t n = 0; n < coeffs.a.size(); ++n)
        gsum += p_t[n] * coeffs.a[n] / coeffs.d_obs[n];
      if (gsum <= 0.0) {
        rho_star = coeffs.k2 >= 0.0 ? lo : hi;
      } else {
        rho_star = 0.5 * (1.0 - coeffs.k2 / gsum);
      }
    }
    return {std::clamp(rho_star, lo, hi), true};
  }

  // alpha > 0 adds a non-algebraic SINR term: maximize numerically.
  auto objective = [&](double rho) {
    return leader_lagrangian_at(p_t, rho, multipliers, observed, s, zeta, mode);
  };
  const double rho_star = optim::scan_golden_max(objective, lo, hi);
  return {std::clamp(rho_star, lo, hi), false};
}

std::vector<double> transmit_floor(double rho, const Scenario& s) {
  const SystemParams& p = s.params;
  std::vector<double> floor(s.tags.size());
  for (size_t n = 0; n < floor.size(); ++n) {
    const double h = s.gains[n].h;
    const double harvest = p.block_time * p.harvest_power_threshold / h;
    const double backscatter = p.backscatter_power_threshold * s.tags[n].time_slot * rho /
                               (p.eta * (1.0 - rho) * h);
    floor[n] = std::max(harvest, backscatter);
  }
  return floor;
}

double backscatter_rho_edge(const Scenario& s) {
  const SystemParams& p = s.params;
  double edge = 1.0;
  for (size_t n = 0; n < s.tags.size(); ++n) {
    const double r = p.eta * s.gains[n].h * p.p_t_max /
                     (p.backscatter_power_threshold * s.tags[n].time_slot);
    edge = std::min(edge, r / (1.0 + r));
  }
  return edge;
}

LeaderSlacks leader_slacks(const LeaderState& state, const InterferenceProfile& observed,
                           const Scenario& s) {
  const SystemParams& p = s.params;
  const auto obs = observed_interference(state, observed, s);
  LeaderSlacks sl;
  const auto n_tags = state.p_t.size();
  sl.sinr.resize(n_tags);
  sl.cap.resize(n_tags);
  sl.energy.resize(n_tags);
  sl.harvest.resize(n_tags);
  sl.harvest_e.resize(n_tags);
  for (size_t n = 0; n < n_tags; ++n) {
    const double h = s.gains[n].h;
    const double t_n = s.tags[n].time_slot;
    const double e_n = harvested_energy(p, state.rho, h, state.p_t[n]);
    const double p_b = backscatter_power(e_n, state.rho, p, t_n);
    const double sinr_n = sinr(1, p_b, h, p, obs[n], s.gains[n].l);
    sl.sinr[n] = sinr_n - p.sinr_threshold;
    sl.cap[n] = p.p_t_max - state.p_t[n];
    sl.energy[n] = e_n - t_n * state.rho * p.block_time * p.backscatter_power_threshold;
    sl.harvest[n] = p.eta * h * state.p_t[n] - p.eta * p.block_time * p.harvest_power_threshold;
    sl.harvest_e[n] =
        e_n - p.eta * (1.0 - state.rho) * p.block_time * p.harvest_power_threshold;
  }
  sl.rho_lo = state.rho;
  sl.rho_hi = 1.0 - state.rho;
  sl.delta_valid = true;  // one active channel per tag, by representation
  return sl;
}

LeaderState update_leader_multipliers(LeaderState state, const LeaderSlacks& slacks,
                                      const SystemParams& params) {
  auto proj = [](double v) { return std::max(0.0, v); };
  for (size_t n = 0; n < state.alpha.size(); ++n) {
    state.alpha[n] = proj(state.alpha[n] - params.step.sinr * slacks.sinr[n]);
    state.beta[n] = proj(state.beta[n] - params.step.power_cap * slacks.cap[n]);
    state.mu[n] = proj(state.mu[n] - params.step.energy * slacks.energy[n]);
    state.gamma[n] = proj(state.gamma[n] - params.step.harvest * slacks.harvest[n]);
  }
  state.tau = proj(state.tau - params.step.tau * slacks.rho_lo);
  state.nu = proj(state.nu - params.step.nu * slacks.rho_hi);
  return state;
}

LeaderState allocate_subchannel(LeaderState state, const InterferenceProfile& profile,
                                const Scenario& s) {
  const SystemParams& p = s.params;
  const auto floors = transmit_floor(state.rho, s);
  for (size_t n = 0; n < state.p_t.size(); ++n) {
    const double a = coefficient_a_tag(s, static_cast<int>(n));
    const double l = s.gains[n].l;
    const double d_cur = profile.on_channel(state.channel[n], p) * l + p.noise_power;
    const double sinr_floor =
        p.sinr_threshold * d_cur * state.rho / ((1.0 - state.rho) * a);
    const double required = std::max(floors[n], sinr_floor);
    if (required <= p.p_t_max) continue;  // "0, otherwise": stay put

    int best_k = 0;
    double best_sinr = -1.0;
    for (int k = 0; k < p.n_channels; ++k) {
      const double d_k = profile.on_channel(k, p) * l + p.noise_power;
      const double sinr_k = ((1.0 - state.rho) / state.rho) * a * state.p_t[n] / d_k;
      if (sinr_k > best_sinr) {
        best_sinr = sinr_k;
        best_k = k;
      }
    }
    state.channel[n] = best_k;
  }
  return state;
}

namespace {

struct Floors {
  std::vector<double> value;
  std::vector<double> dleft;   // one-sided d floor / d rho
  std::vector<double> dright;
  bool sinr_unmet = false;  // SINR needs more than P_t,max on the current channel
};

// Active lower bound on each tag's power: harvest threshold (rho-free),
// backscatter threshold and SINR requirement (both ~ rho/(1-rho)). The
// one-sided rho-derivatives of the max are kept for the projected
// stationarity condition.
Floors combined_floor(const LeaderState& state, double rho, const InterferenceProfile& observed,
                      const Scenario& s) {
  const SystemParams& p = s.params;
  const auto n_tags = s.tags.size();
  Floors fl;
  fl.value.resize(n_tags);
  fl.dleft.resize(n_tags);
  fl.dright.resize(n_tags);
  for (size_t n = 0; n < n_tags; ++n) {
    const double h = s.gains[n].h;
    const double a = coefficient_a_tag(s, static_cast<int>(n));
    const double d_obs = observed.on_channel(state.channel[n], p) * s.gains[n].l + p.noise_power;
    const double harvest = p.block_time * p.harvest_power_threshold / h;
    const double c_bs =
        p.backscatter_power_threshold * s.tags[n].time_slot / (p.eta * h);
    const double c_si = p.sinr_threshold * d_obs / a;
    const double ratio = rho / (1.0 - rho);
    const double dratio = 1.0 / ((1.0 - rho) * (1.0 - rho));
    double comp_v[3] = {harvest, c_bs * ratio, c_si * ratio};
    double comp_d[3] = {0.0, c_bs * dratio, c_si * dratio};
    if (comp_v[2] > p.p_t_max) {
      fl.sinr_unmet = true;
      comp_v[2] = -1.0;  // unenforceable; best-effort flag instead
    }
    double v = comp_v[0], dl = comp_d[0], dr = comp_d[0];
    for (int k = 1; k < 3; ++k) {
      const double tol = 1e-12 * (1.0 + std::abs(v));
      if (comp_v[k] > v + tol) {
        v = comp_v[k];
        dl = dr = comp_d[k];
      } else if (comp_v[k] >= v - tol) {  // tie: one-sided derivatives split
        dl = std::min(dl, comp_d[k]);
        dr = std::max(dr, comp_d[k]);
      }
    }
    fl.value[n] = v;
    fl.dleft[n] = dl;
    fl.dright[n] = dr;
  }
  return fl;
}

void structural_checks(const Scenario& s) {
  const SystemParams& p = s.params;
  const double rho_ref = p.rho_fix > 0.0 ? p.rho_fix : p.rho_min;
  for (size_t n = 0; n < s.tags.size(); ++n) {
    const double harvest_floor = p.block_time * p.harvest_power_threshold / s.gains[n].h;
    if (harvest_floor > p.p_t_max * (1.0 + 1e-9))
      throw InfeasibleError("harvest_threshold",
                            "harvest threshold unreachable at P_t,max for tag " +
                                std::to_string(n) + " (needs " + std::to_string(harvest_floor) +
                                " W)");
    const double a = coefficient_a_tag(s, static_cast<int>(n));
    const double sinr_floor_clean =
        p.sinr_threshold * p.noise_power * rho_ref / ((1.0 - rho_ref) * a);
    if (sinr_floor_clean > p.p_t_max * (1.0 + 1e-9))
      throw InfeasibleError("sinr_threshold",
                            "SINR threshold unreachable at P_t,max even on a clean channel");
  }
  if (p.rho_fix <= 0.0 && backscatter_rho_edge(s) < p.rho_min)
    throw InfeasibleError("backscatter_threshold",
                          "backscatter power threshold unreachable at P_t,max for any rho");
}

}  // namespace

LeaderState leader_best_response(const InterferenceProfile& observed, const Scenario& s,
                                 LeaderState state, const std::vector<double>& zeta,
                                 LeaderMode mode) {
  const SystemParams& p = s.params;
  structural_checks(s);

  if (mode == LeaderMode::anticipating) state = allocate_subchannel(state, observed, s);

  const bool rho_pinned = p.rho_fix > 0.0;
  const double rho_lo = rho_pinned ? p.rho_fix : p.rho_min;
  const double rho_cap =
      rho_pinned ? p.rho_fix : std::min(1.0 - p.rho_min, backscatter_rho_edge(s));

  state.fallback_steps = 0;
  state.accepted_steps = 0;

  auto project = [&](std::vector<double>& p_t, double& rho) {
    rho = std::clamp(rho, rho_lo, rho_cap);
    const auto fl = combined_floor(state, rho, observed, s);
    for (size_t n = 0; n < p_t.size(); ++n)
      p_t[n] = std::clamp(std::max(p_t[n], fl.value[n]), 0.0, p.p_t_max);
  };

  project(state.p_t, state.rho);
  double u_best = leader_objective(state, observed, s, zeta, mode);

  // Projected primal point for a given rho: closed-form powers clamped onto
  // the threshold floors and the cap.
  auto primal_at = [&](double rho) {
    LeaderState tmp = state;
    tmp.rho = rho;
    const auto coeffs = leader_coefficients(tmp, observed, s, zeta, mode);
    tmp.p_t = optimal_transmit_power(coeffs, rho, s, mode);
    project(tmp.p_t, tmp.rho);
    return tmp;
  };
  auto objective_of = [&](const LeaderState& st) {
    return leader_objective(st, observed, s, zeta, mode);
  };

  state.converged = false;
  int it = 0;
  for (; it < p.max_inner_iterations; ++it) {
    const auto coeffs = leader_coefficients(state, observed, s, zeta, mode);

    // candidate A: power step at the current rho
    LeaderState cand_a = state;
    cand_a.p_t = optimal_transmit_power(coeffs, state.rho, s, mode);
    project(cand_a.p_t, cand_a.rho);
    double u_a = objective_of(cand_a);

    // candidate B: closed-form rho step, then the power step
    const auto rho_step =
        rho_pinned ? RhoStep{p.rho_fix, true}
                   : optimal_time_switching(coeffs, state.p_t, state, observed, s, zeta, mode);
    LeaderState cand_b = primal_at(std::clamp(rho_step.rho, rho_lo, rho_cap));
    double u_b = objective_of(cand_b);

    const double accept_gate = u_best + p.accept_tolerance * std::abs(u_best);
    bool numeric_rho = false;
    LeaderState* winner = nullptr;
    double u_win = accept_gate;
    if (u_a > u_win) {
      winner = &cand_a;
      u_win = u_a;
    }
    if (u_b > u_win) {
      winner = &cand_b;
      u_win = u_b;
      numeric_rho = !rho_step.closed_form;
    }

    // candidate C: numeric search along the floor-projected manifold; the
    // closed-form rho step is blind to floors that move with rho.
    LeaderState cand_c;
    if (winner == nullptr && !rho_pinned) {
      const double rho_c = optim::scan_golden_max(
          [&](double r) { return objective_of(primal_at(r)); }, rho_lo, rho_cap);
      cand_c = primal_at(rho_c);
      const double u_c = objective_of(cand_c);
      if (u_c > u_win) {
        winner = &cand_c;
        u_win = u_c;
        numeric_rho = true;
      }
    }

    if (winner != nullptr) {
      state.p_t = std::move(winner->p_t);
      state.rho = winner->rho;
      ++state.accepted_steps;
      u_best = u_win;
      // Numeric rho steps count as fallbacks only when they land at a
      // smooth interior point the closed form should have found itself.
      if (numeric_rho) {
        const auto res = check_leader_stationarity(state, observed, s, zeta, mode);
        if (!res.rho_boundary && !res.rho_floor_coupled) ++state.fallback_steps;
      }
    } else {
      auto updated = update_leader_multipliers(state, leader_slacks(state, observed, s), p);
      if (multipliers_stationary(state, updated)) {
        state.converged = true;
        ++it;
        break;
      }
      state.alpha = std::move(updated.alpha);
      state.beta = std::move(updated.beta);
      state.mu = std::move(updated.mu);
      state.gamma = std::move(updated.gamma);
      state.nu = updated.nu;
      state.tau = updated.tau;
    }
  }

  state.iteration = it;
  state.utility = u_best;
  state.feasible = check_leader_feasibility(state, observed, s).feasible;
  return state;
}

StationarityResidual check_leader_stationarity(const LeaderState& state,
                                               const InterferenceProfile& observed,
                                               const Scenario& s,
                                               const std::vector<double>& zeta, LeaderMode mode) {
  const SystemParams& p = s.params;
  const double rho = state.rho;
  const double rr = rho * (1.0 - rho);
  StationarityResidual res;
  const auto n_tags = state.p_t.size();
  res.d_p.resize(n_tags);
  res.p_scale.resize(n_tags);
  res.p_floor.resize(n_tags);
  res.p_at_floor.resize(n_tags);
  res.p_at_cap.resize(n_tags);
  res.p_boundary.resize(n_tags);

  const double rho_cap = std::min(1.0 - p.rho_min, backscatter_rho_edge(s));
  const auto fl = combined_floor(state, rho, observed, s);
  const auto& floors = fl.value;

  double d_rho = state.tau - state.nu;
  double rho_pos = std::abs(state.tau - state.nu);
  for (size_t n = 0; n < n_tags; ++n) {
    const auto args =
        leader_tag_batch_args(static_cast<int>(n), rho, state, observed, s, zeta, mode);
    const double a = coefficient_a_tag(s, static_cast<int>(n));
    const double l = s.gains[n].l;
    const double c = p.cost_interferer + zeta_at(zeta, n);
    const double pn = state.p_t[n];
    const double x = rr * pn * a;

    double slope_p, sig_drho;
    if (mode == LeaderMode::anticipating) {
      const double q = std::sqrt(x * l / c);
      const double qcap = p.p_i_max * l + p.noise_power;
      if (q <= p.noise_power || q >= qcap) {
        const double d = q <= p.noise_power ? p.noise_power : qcap;
        slope_p = rr * a / d;
        sig_drho = (1.0 - 2.0 * rho) * pn * a / d;
      } else {
        const double k_n = std::sqrt(pn * a * c / l);
        const double w = k_n * std::sqrt(rr);
        slope_p = pn > 0.0 ? w / (2.0 * pn) : std::numeric_limits<double>::infinity();
        sig_drho = k_n * (1.0 - 2.0 * rho) / (2.0 * std::sqrt(rr));
      }
    } else {
      slope_p = rr * a / args.d_obs;
      sig_drho = (1.0 - 2.0 * rho) * pn * a / args.d_obs;
    }
    res.d_p[n] = slope_p + args.lin;
    res.p_scale[n] = std::max(std::abs(slope_p), std::abs(args.lin));
    d_rho += sig_drho;
    const double alpha_term = state.alpha[n] * a * pn / (rho * rho * args.d_obs);
    const double mu_term =
        state.mu[n] * (p.eta * p.block_time * s.gains[n].h * pn +
                       s.tags[n].time_slot * p.block_time * p.backscatter_power_threshold);
    d_rho -= alpha_term;
    d_rho -= mu_term;
    rho_pos = std::max({rho_pos, std::abs(sig_drho), alpha_term, mu_term});

    const double tol = 1e-9 * (1.0 + p.p_t_max);
    res.p_floor[n] = floors[n];
    res.p_at_floor[n] = pn <= tol || std::abs(pn - floors[n]) <= tol;
    res.p_at_cap[n] = pn >= p.p_t_max - tol;
    res.p_boundary[n] = res.p_at_floor[n] || res.p_at_cap[n];
  }
  res.d_rho = d_rho;
  res.rho_scale = rho_pos;
  const double rtol = 1e-9;
  res.rho_boundary = p.rho_fix > 0.0 || rho <= p.rho_min + rtol ||
                     rho >= 1.0 - p.rho_min - rtol || std::abs(rho - rho_cap) <= rtol;

  res.d_rho_proj_left = d_rho;
  res.d_rho_proj_right = d_rho;
  for (size_t n = 0; n < n_tags; ++n) {
    if (!res.p_at_floor[n] || res.p_at_cap[n] || floors[n] <= 0.0) continue;
    if (fl.dleft[n] == 0.0 && fl.dright[n] == 0.0) continue;
    res.rho_floor_coupled = true;
    res.d_rho_proj_left += res.d_p[n] * fl.dleft[n];
    res.d_rho_proj_right += res.d_p[n] * fl.dright[n];
    res.rho_scale = std::max({res.rho_scale, std::abs(res.d_p[n] * fl.dleft[n]),
                              std::abs(res.d_p[n] * fl.dright[n])});
  }
  return res;
}

FeasibilityReport check_leader_feasibility(const LeaderState& state,
                                           const InterferenceProfile& observed,
                                           const Scenario& s) {
  const SystemParams& p = s.params;
  FeasibilityReport rep;
  rep.slacks = leader_slacks(state, observed, s);
  rep.worst_normalized = std::numeric_limits<double>::infinity();
  auto consider = [&](double slack, double scale, const char* name) {
    const double v = slack / std::max(scale, 1e-300);
    if (v < rep.worst_normalized) {
      rep.worst_normalized = v;
      rep.binding = name;
    }
  };
  for (size_t n = 0; n < rep.slacks.sinr.size(); ++n) {
    const double energy_scale =
        s.tags[n].time_slot * state.rho * p.block_time * p.backscatter_power_threshold;
    consider(rep.slacks.sinr[n], p.sinr_threshold, "sinr_threshold");
    consider(rep.slacks.cap[n], p.p_t_max, "power_cap");
    consider(rep.slacks.energy[n], energy_scale, "backscatter_threshold");
    consider(rep.slacks.harvest[n], p.eta * p.block_time * p.harvest_power_threshold,
             "harvest_threshold");
  }
  consider(rep.slacks.rho_lo, 1.0, "rho_lower");
  consider(rep.slacks.rho_hi, 1.0, "rho_upper");
  rep.feasible = rep.worst_normalized >= -1e-6;
  return rep;
}

}  // namespace bswsn

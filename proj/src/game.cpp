#include "bswsn/game.hpp"

#include <cmath>

namespace bswsn {

namespace {

bool below_tol(double prev, double cur, double tol) {
  const double scale = std::max({std::abs(prev), std::abs(cur), 1e-9});
  return std::abs(cur - prev) < tol * scale;
}

RoundRecord make_record(int round, const LeaderState& leader, const FollowerState& follower,
                        const Scenario& s, bool shifted) {
  RoundRecord rec;
  rec.round = round;
  rec.leader = leader;
  rec.follower = follower;
  rec.u_b = utility_wsn(leader, follower.profile(), s);
  rec.u_i = utility_interferer(leader, follower.p_i, follower.attacked_channel, s);
  rec.channel_shift = shifted;
  rec.fallback_steps = leader.fallback_steps;
  rec.leader_feasible = leader.feasible;
  return rec;
}

GameTrace play(const Scenario& s, LeaderState leader, FollowerState follower, int max_rounds,
               double tol, GameMode mode) {
  if (max_rounds < 1) throw ModelError("play: max_rounds must be >= 1");
  GameTrace trace;
  trace.mode = mode;
  for (int round = 1; round <= max_rounds; ++round) {
    const LeaderState observed_leader = leader;    // action the follower reacts to
    const FollowerState observed_follower = follower;

    follower = interferer_best_response(observed_leader, s, follower);
    const auto channels_before = leader.channel;
    if (mode == GameMode::stackelberg) {
      // follower has just moved; the leader sees the fresh interference
      leader = leader_best_response(follower.profile(), s, leader, follower.zeta,
                                    LeaderMode::anticipating);
    } else {
      leader = leader_best_response(observed_follower.profile(), s, leader,
                                    observed_follower.zeta, LeaderMode::myopic);
    }
    const bool shifted = leader.channel != channels_before;

    trace.rounds.push_back(make_record(round, leader, follower, s, shifted));

    const size_t r = trace.rounds.size();
    if (r >= 2) {
      const auto& prev = trace.rounds[r - 2];
      const auto& cur = trace.rounds[r - 1];
      if (below_tol(prev.u_b, cur.u_b, tol) && below_tol(prev.u_i, cur.u_i, tol)) {
        trace.converged = true;
        trace.convergence_round = static_cast<int>(r) - 1;
        break;
      }
    }
  }
  return trace;
}

}  // namespace

GameTrace play_stackelberg(const Scenario& s, LeaderState leader, FollowerState follower,
                           int max_rounds, double tol) {
  return play(s, std::move(leader), std::move(follower), max_rounds, tol, GameMode::stackelberg);
}

GameTrace play_nash(const Scenario& s, LeaderState leader, FollowerState follower, int max_rounds,
                    double tol) {
  return play(s, std::move(leader), std::move(follower), max_rounds, tol, GameMode::nash);
}

EquilibriumReport detect_equilibrium(const GameTrace& trace, const Scenario& s, double tol) {
  if (trace.rounds.empty()) throw ModelError("detect_equilibrium: empty trace");
  EquilibriumReport rep;
  const auto& last = trace.rounds.back();
  rep.final_u_b = last.u_b;
  rep.final_u_i = last.u_i;

  // First round after which every subsequent change stays below tol.
  const size_t n = trace.rounds.size();
  if (n >= 2) {
    auto quiet = [&](size_t t) {  // transition rounds[t-1] -> rounds[t]
      const auto& prev = trace.rounds[t - 1];
      const auto& cur = trace.rounds[t];
      return below_tol(prev.u_b, cur.u_b, tol) && below_tol(prev.u_i, cur.u_i, tol);
    };
    size_t first_quiet = n;  // smallest t with transitions t..n-1 all quiet
    for (size_t t = n - 1; t >= 1; --t) {
      if (!quiet(t)) break;
      first_quiet = t;
      if (t == 1) break;
    }
    if (first_quiet < n) {
      rep.converged = true;
      rep.convergence_round = trace.rounds[first_quiet - 1].round;
    }
  }

  const LeaderMode mode =
      trace.mode == GameMode::stackelberg ? LeaderMode::anticipating : LeaderMode::myopic;
  rep.leader_residual = check_leader_stationarity(last.leader, last.follower.profile(), s,
                                                  last.follower.zeta, mode);
  rep.feasibility = check_leader_feasibility(last.leader, last.follower.profile(), s);
  if (last.follower.attacked_channel >= 0) {
    rep.follower_residual = check_follower_stationarity(
        last.follower.p_i, last.leader, last.follower.attacked_channel, s, last.follower.zeta);
    rep.follower_at_boundary =
        last.follower.p_i <= 0.0 || last.follower.p_i >= s.params.p_i_max;
  }
  return rep;
}

}  // namespace bswsn

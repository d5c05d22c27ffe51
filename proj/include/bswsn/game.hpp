#pragma once

#include <vector>

#include "bswsn/interferer.hpp"
#include "bswsn/wsn.hpp"

namespace bswsn {

enum class GameMode { stackelberg, nash };

struct RoundRecord {
  int round = 0;  // 1-based
  LeaderState leader;
  FollowerState follower;
  double u_b = 0.0;  // utility_wsn at this round's (leader, follower) pair
  double u_i = 0.0;  // utility_interferer at the same pair
  bool channel_shift = false;
  int fallback_steps = 0;
  bool leader_feasible = true;
};

struct GameTrace {
  GameMode mode = GameMode::stackelberg;
  std::vector<RoundRecord> rounds;
  bool converged = false;
  int convergence_round = -1;
};

// Hierarchical play: each round the follower responds to the leader's
// current action, then the leader responds (shift + anticipating power
// control) to the fresh interference.
GameTrace play_stackelberg(const Scenario& s, LeaderState leader, FollowerState follower,
                           int max_rounds, double tol = 1e-6);

// Simultaneous baseline: both players respond to the opponent's
// previous-round action; the leader neither anticipates nor shifts.
GameTrace play_nash(const Scenario& s, LeaderState leader, FollowerState follower, int max_rounds,
                    double tol = 1e-6);

struct EquilibriumReport {
  bool converged = false;
  int convergence_round = -1;
  double final_u_b = 0.0;
  double final_u_i = 0.0;
  double follower_residual = 0.0;
  bool follower_at_boundary = false;
  StationarityResidual leader_residual;
  FeasibilityReport feasibility;
};

// Convergence round plus final-state stationarity and feasibility
// diagnostics; a non-converged trace yields last-round diagnostics only.
EquilibriumReport detect_equilibrium(const GameTrace& trace, const Scenario& s, double tol);

}  // namespace bswsn

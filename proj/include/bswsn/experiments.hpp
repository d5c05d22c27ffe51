#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bswsn/config.hpp"
#include "bswsn/game.hpp"

namespace bswsn {

// Exit codes shared by the library drivers and the CLI.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitNonConverged = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitConfigError = 4;

struct ResultRow {
  std::string scenario_id;
  std::string mode;
  int round = 0;
  double u_b = 0.0;
  double u_i = 0.0;
  double p_i_watts = 0.0;
  double rho = 0.0;
  std::vector<double> p_t_watts;
  std::vector<int> channels;
  bool converged = false;
};

std::string result_csv_header();
std::string to_csv_row(const ResultRow& row);
std::string rows_to_csv(const std::vector<ResultRow>& rows);

struct RunResult {
  GameTrace trace;
  EquilibriumReport report;
  std::vector<ResultRow> rows;
  int exit_code = kExitConverged;
  std::string diagnostic;    // set when infeasible
  std::string summary_json;  // machine-readable summary record
};

// One game in the configured mode; rows carry one record per round.
RunResult run_scenario(const ScenarioConfig& cfg, const std::string& scenario_id = "scenario");

struct SweepPoint {
  double rho = 0.0;
  double u_b = 0.0;
  bool ok = false;         // point feasible and converged
  bool converged = false;
  std::string failure;     // for failed points
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::vector<ResultRow> rows;
  int exit_code = kExitConverged;
};

// Hold rho fixed at each grid value, let the game converge, emit the final
// leader utility per point. Failed points keep their marker and the sweep
// continues.
SweepResult sweep_rho(const ScenarioConfig& cfg, const std::vector<double>& rho_grid);

std::vector<double> default_rho_grid(int points = 50);

struct CompareResult {
  RunResult stackelberg;
  RunResult nash;
  bool leader_dominance = false;    // final U_B: stackelberg >= nash
  bool follower_dominance = false;  // final U_I: stackelberg >= nash
  int exit_code = kExitConverged;
  std::string summary_json;
};

// Runs both modes on identical scenarios and seeds, emits aligned rows and
// the two dominance checks.
CompareResult compare_games(const ScenarioConfig& cfg);

struct OracleCheckResult {
  int instances = 0;
  int follower_grid_failures = 0;    // closed form vs grid argmax breaches
  int follower_concavity_failures = 0;
  int leader_residual_failures = 0;  // accepted interior steps breaching 1e-5
  int leader_boundary_sign_failures = 0;
  int leader_grid_failures = 0;      // closed-form point vs grid value breaches
  int hessian_failures = 0;          // anticipated objective not negative definite
  int accepted_steps = 0;
  int fallback_steps = 0;
  double fallback_rate = 0.0;
  std::string report;

  bool ok() const {
    return follower_grid_failures == 0 && follower_concavity_failures == 0 &&
           leader_residual_failures == 0 && leader_boundary_sign_failures == 0 &&
           leader_grid_failures == 0 && hessian_failures == 0 && fallback_rate < 0.2;
  }
};

// Randomized certification corpus: closed forms vs grid oracles, stationarity
// residuals vs finite differences, concavity verdicts.
OracleCheckResult oracle_check(const ScenarioConfig& cfg, std::uint64_t seed, int instances);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace bswsn

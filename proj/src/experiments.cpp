#include "bswsn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "bswsn/interferer.hpp"
#include "bswsn/oracle.hpp"
#include "bswsn/units.hpp"

namespace bswsn {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& gen, double lo, double hi) {
  return lo + (hi - lo) * uniform01(gen);
}

std::string mode_name(GameMode m) { return m == GameMode::stackelberg ? "stackelberg" : "nash"; }

ResultRow row_from_record(const std::string& id, GameMode mode, const RoundRecord& rec,
                          bool run_converged) {
  ResultRow row;
  row.scenario_id = id;
  row.mode = mode_name(mode);
  row.round = rec.round;
  row.u_b = rec.u_b;
  row.u_i = rec.u_i;
  row.p_i_watts = rec.follower.p_i;
  row.rho = rec.leader.rho;
  row.p_t_watts = rec.leader.p_t;
  row.channels = rec.leader.channel;
  row.converged = run_converged;
  return row;
}

json summary_from_run(const std::string& id, GameMode mode, const GameTrace& trace,
                      const EquilibriumReport& rep) {
  json jt;
  jt["scenario_id"] = id;
  jt["mode"] = mode_name(mode);
  jt["rounds"] = trace.rounds.size();
  jt["converged"] = trace.converged;
  jt["convergence_round"] = rep.convergence_round;
  const auto& last = trace.rounds.back();
  jt["final"] = {{"u_b", last.u_b},
                 {"u_i", last.u_i},
                 {"p_i_watts", last.follower.p_i},
                 {"rho", last.leader.rho},
                 {"p_t_watts", last.leader.p_t},
                 {"channels", last.leader.channel},
                 {"attacked_channel", last.follower.attacked_channel}};
  jt["residuals"] = {{"follower", rep.follower_residual},
                     {"follower_at_boundary", rep.follower_at_boundary},
                     {"leader_p", rep.leader_residual.d_p},
                     {"leader_rho", rep.leader_residual.d_rho},
                     {"leader_rho_boundary", rep.leader_residual.rho_boundary}};
  jt["feasibility"] = {{"feasible", rep.feasibility.feasible},
                       {"worst_normalized_slack", rep.feasibility.worst_normalized},
                       {"binding", rep.feasibility.binding}};
  return jt;
}

}  // namespace

std::string result_csv_header() {
  return "scenario_id,mode,round,u_b,u_i,p_i_watts,rho,p_t_watts_list,channels,converged";
}

std::string to_csv_row(const ResultRow& row) {
  std::string p_list, ch_list;
  for (size_t i = 0; i < row.p_t_watts.size(); ++i) {
    if (i) p_list += ';';
    p_list += fmt(row.p_t_watts[i]);
  }
  for (size_t i = 0; i < row.channels.size(); ++i) {
    if (i) ch_list += ';';
    ch_list += std::to_string(row.channels[i]);
  }
  std::string out = row.scenario_id;
  out += ',';
  out += row.mode;
  out += ',';
  out += std::to_string(row.round);
  out += ',';
  out += fmt(row.u_b);
  out += ',';
  out += fmt(row.u_i);
  out += ',';
  out += fmt(row.p_i_watts);
  out += ',';
  out += fmt(row.rho);
  out += ',';
  out += p_list;
  out += ',';
  out += ch_list;
  out += ',';
  out += row.converged ? "1" : "0";
  return out;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::string out = result_csv_header();
  out += '\n';
  for (const auto& r : rows) {
    out += to_csv_row(r);
    out += '\n';
  }
  return out;
}

RunResult run_scenario(const ScenarioConfig& cfg, const std::string& scenario_id) {
  RunResult res;
  Scenario s = cfg.to_scenario();
  auto leader = LeaderState::initial(s);
  auto follower = FollowerState::initial(s);
  try {
    res.trace = cfg.mode == GameMode::stackelberg
                    ? play_stackelberg(s, leader, follower, cfg.max_rounds, cfg.convergence_tol)
                    : play_nash(s, leader, follower, cfg.max_rounds, cfg.convergence_tol);
  } catch (const InfeasibleError& e) {
    res.exit_code = kExitInfeasible;
    res.diagnostic = std::string("infeasible scenario (") + e.binding_constraint + "): " + e.what();
    json jt;
    jt["scenario_id"] = scenario_id;
    jt["error"] = res.diagnostic;
    jt["binding_constraint"] = e.binding_constraint;
    res.summary_json = jt.dump(2);
    return res;
  }
  res.report = detect_equilibrium(res.trace, s, cfg.convergence_tol);
  for (const auto& rec : res.trace.rounds)
    res.rows.push_back(row_from_record(scenario_id, cfg.mode, rec, res.trace.converged));
  res.exit_code = res.trace.converged ? kExitConverged : kExitNonConverged;
  res.summary_json = summary_from_run(scenario_id, cfg.mode, res.trace, res.report).dump(2);
  return res;
}

std::vector<double> default_rho_grid(int points) {
  std::vector<double> grid(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<size_t>(i)] = static_cast<double>(i + 1) / (points + 1);
  return grid;
}

SweepResult sweep_rho(const ScenarioConfig& cfg, const std::vector<double>& rho_grid) {
  SweepResult res;
  res.points.resize(rho_grid.size());
  res.rows.resize(rho_grid.size());

  auto run_point = [&](size_t i) {
    const double rho = rho_grid[i];
    SweepPoint pt;
    pt.rho = rho;
    ResultRow row;
    row.scenario_id = "sweep_" + std::to_string(i);
    row.mode = mode_name(cfg.mode);
    row.rho = rho;
    try {
      Scenario s = cfg.to_scenario();
      s.params.rho_fix = rho;
      s.params.validate();
      auto leader = LeaderState::initial(s);
      leader.rho = rho;
      auto follower = FollowerState::initial(s);
      GameTrace trace =
          cfg.mode == GameMode::stackelberg
              ? play_stackelberg(s, leader, follower, cfg.max_rounds, cfg.convergence_tol)
              : play_nash(s, leader, follower, cfg.max_rounds, cfg.convergence_tol);
      const auto& last = trace.rounds.back();
      pt.u_b = last.u_b;
      pt.converged = trace.converged;
      pt.ok = trace.converged && last.leader_feasible;
      if (!last.leader_feasible) pt.failure = "infeasible";
      row = row_from_record(row.scenario_id, cfg.mode, last, trace.converged);
      row.scenario_id = "sweep_" + std::to_string(i);
      row.converged = pt.ok;
    } catch (const InfeasibleError& e) {
      pt.ok = false;
      pt.converged = false;
      pt.u_b = std::numeric_limits<double>::quiet_NaN();
      pt.failure = e.binding_constraint;
      row.converged = false;
    } catch (const ModelError& e) {
      pt.ok = false;
      pt.converged = false;
      pt.u_b = std::numeric_limits<double>::quiet_NaN();
      pt.failure = e.what();
      row.converged = false;
    }
    row.rho = rho;
    res.points[i] = std::move(pt);
    res.rows[i] = std::move(row);
  };

  // Points are independent; run them concurrently and collect in grid order.
  std::vector<std::future<void>> jobs;
  jobs.reserve(rho_grid.size());
  for (size_t i = 0; i < rho_grid.size(); ++i)
    jobs.push_back(std::async(std::launch::async, run_point, i));
  for (auto& j : jobs) j.get();

  bool any_ok = false;
  for (const auto& pt : res.points) any_ok = any_ok || pt.ok;
  res.exit_code = any_ok ? kExitConverged : kExitNonConverged;
  return res;
}

CompareResult compare_games(const ScenarioConfig& cfg) {
  CompareResult res;
  ScenarioConfig sc = cfg;
  sc.mode = GameMode::stackelberg;
  ScenarioConfig nc = cfg;
  nc.mode = GameMode::nash;
  res.stackelberg = run_scenario(sc, "compare_stackelberg");
  res.nash = run_scenario(nc, "compare_nash");

  if (res.stackelberg.exit_code == kExitInfeasible || res.nash.exit_code == kExitInfeasible) {
    res.exit_code = kExitInfeasible;
    res.summary_json = json{{"error", "infeasible scenario in comparison"}}.dump(2);
    return res;
  }

  const auto& sl = res.stackelberg.trace.rounds.back();
  const auto& nl = res.nash.trace.rounds.back();
  res.leader_dominance = sl.u_b >= nl.u_b - 1e-9;
  res.follower_dominance = sl.u_i >= nl.u_i - 1e-9;
  res.exit_code = (res.stackelberg.trace.converged && res.nash.trace.converged)
                      ? kExitConverged
                      : kExitNonConverged;

  json jt;
  jt["stackelberg"] = json::parse(res.stackelberg.summary_json);
  jt["nash"] = json::parse(res.nash.summary_json);
  jt["dominance"] = {{"leader_utility", res.leader_dominance},
                     {"follower_utility", res.follower_dominance},
                     {"final_u_b", {{"stackelberg", sl.u_b}, {"nash", nl.u_b}}},
                     {"final_u_i", {{"stackelberg", sl.u_i}, {"nash", nl.u_i}}}};
  res.summary_json = jt.dump(2);
  return res;
}

namespace {

struct CorpusInstance {
  Scenario scenario;
  LeaderState leader;
  FollowerState follower;
  bool interior;  // thresholds lowered so optima sit strictly inside the box
};

CorpusInstance draw_instance(const ScenarioConfig& base, std::mt19937_64& gen, bool interior,
                             bool with_multipliers) {
  ScenarioConfig cfg = base;
  cfg.n_tags = 1 + static_cast<int>(gen() % 3);
  cfg.tag_distances_m.clear();
  cfg.random_tags.reset();
  for (int n = 0; n < cfg.n_tags; ++n)
    cfg.tag_distances_m.push_back(interior ? uniform(gen, 1.2, 3.0) : uniform(gen, 1.6, 2.9));
  if (interior) {
    cfg.backscatter_power_threshold_dbm = -60.0;
    cfg.harvest_power_threshold_dbm = -70.0;
  }
  CorpusInstance inst{cfg.to_scenario(), {}, {}, interior};
  inst.leader = LeaderState::initial(inst.scenario);
  inst.follower = FollowerState::initial(inst.scenario);
  for (auto& p : inst.leader.p_t) p = uniform(gen, 0.05, 1.0) * inst.scenario.params.p_t_max;
  inst.leader.rho = uniform(gen, 0.1, 0.9);
  for (auto& z : inst.follower.zeta) z = (uniform01(gen) < 0.3) ? uniform(gen, 0.0, 0.5) : 0.0;
  if (with_multipliers) {
    for (size_t n = 0; n < inst.leader.beta.size(); ++n) {
      inst.leader.beta[n] = uniform(gen, 0.0, 0.2);
      inst.leader.mu[n] = uniform(gen, 0.0, 0.2);
      inst.leader.gamma[n] = uniform(gen, 0.0, 0.2);
    }
    inst.leader.nu = uniform(gen, 0.0, 0.05);
    inst.leader.tau = uniform(gen, 0.0, 0.05);
  }
  return inst;
}

// Block-coordinate fixed point of the two closed-form steps at fixed
// multipliers; the certified "closed-form path" point.
std::pair<std::vector<double>, double> closed_form_fixed_point(
    const CorpusInstance& inst, const InterferenceProfile& observed,
    const std::vector<double>& zeta, LeaderMode mode, int iterations = 60) {
  LeaderState st = inst.leader;
  for (int i = 0; i < iterations; ++i) {
    auto coeffs = leader_coefficients(st, observed, inst.scenario, zeta, mode);
    const auto step =
        optimal_time_switching(coeffs, st.p_t, st, observed, inst.scenario, zeta, mode);
    st.rho = step.rho;
    coeffs = leader_coefficients(st, observed, inst.scenario, zeta, mode);
    st.p_t = optimal_transmit_power(coeffs, st.rho, inst.scenario, mode);
  }
  return {st.p_t, st.rho};
}

}  // namespace

OracleCheckResult oracle_check(const ScenarioConfig& cfg, std::uint64_t seed, int instances) {
  OracleCheckResult out;
  out.instances = instances;
  std::mt19937_64 gen(seed);
  std::ostringstream log;

  for (int i = 0; i < instances; ++i) {
    const bool interior = (i % 2) == 0;
    const bool with_multipliers = interior && (i % 10) < 3;
    CorpusInstance inst = draw_instance(cfg, gen, interior, with_multipliers);
    const Scenario& s = inst.scenario;
    const int attacked = 0;

    // --- follower: closed form / bisection vs grid, concavity ---
    const double p_star =
        optimal_interference_power(inst.leader, attacked, s, inst.follower.zeta);
    GridSpec fgrid{0.0, s.params.p_i_max, 10000, 2, 10.0};
    const auto gmax = grid_max_follower(inst.leader, attacked, s, inst.follower.zeta, fgrid);
    if (std::abs(p_star - gmax.arg) > 1e-5 * s.params.p_i_max) {
      ++out.follower_grid_failures;
      log << "instance " << i << ": follower argmax mismatch " << p_star << " vs " << gmax.arg
          << "\n";
    }
    const double l_closed =
        interferer_lagrangian(inst.leader, p_star, attacked, s, inst.follower.zeta);
    if (l_closed < gmax.value - 1e-9 * std::max(1.0, std::abs(gmax.value)))
      ++out.follower_grid_failures;

    // curvature at a random interior point of the feasible interference range
    const double probe = uniform(gen, 0.05, 0.95) * s.params.p_i_max;
    const double d2 = follower_second_derivative(probe, inst.leader, attacked, s);
    if (!(d2 < 0.0)) {
      ++out.follower_concavity_failures;
    } else {
      auto ui = [&](std::span<const double> q) {
        return utility_interferer(inst.leader, q[0], attacked, s);
      };
      const double step = 1e-4 * s.params.p_i_max;
      const double pt[1] = {probe};
      const double lo[1] = {0.0}, hi[1] = {s.params.p_i_max};
      const double st[1] = {step};
      const auto hv = finite_diff_hessian(ui, pt, st, lo, hi);
      if (std::abs(hv.m[0][0] - d2) > 1e-3 * std::abs(d2)) {
        ++out.follower_concavity_failures;
        log << "instance " << i << ": follower second derivative mismatch " << hv.m[0][0]
            << " vs " << d2 << "\n";
      }
    }

    // --- leader: best-response residuals at accepted optimum ---
    InterferenceProfile observed{uniform(gen, 0.0, 0.2) * s.params.p_i_max, 0};
    LeaderState solved;
    try {
      solved = leader_best_response(observed, s, inst.leader, inst.follower.zeta,
                                    LeaderMode::anticipating);
    } catch (const InfeasibleError&) {
      continue;  // draw happened to be structurally infeasible; not a solver defect
    }
    out.accepted_steps += solved.accepted_steps;
    out.fallback_steps += solved.fallback_steps;

    const auto res = check_leader_stationarity(solved, observed, s, inst.follower.zeta,
                                               LeaderMode::anticipating);
    for (size_t n = 0; n < res.d_p.size(); ++n) {
      const double scale = std::max(res.p_scale[n], 1e-12);
      const double tol = 1e-5 * scale;
      if (!res.p_boundary[n]) {
        if (std::abs(res.d_p[n]) > tol) {
          ++out.leader_residual_failures;
          log << "instance " << i << ": interior P residual " << res.d_p[n] << " (scale " << scale
              << ")\n";
        }
      } else if (res.p_at_floor[n] && res.p_at_cap[n]) {
        // the box degenerated to a point; no sign constraint applies
      } else if (res.p_at_floor[n]) {
        if (res.d_p[n] > tol) {  // pinned from below: gradient may only push down
          ++out.leader_boundary_sign_failures;
          log << "instance " << i << ": floor P sign violation " << res.d_p[n] << "\n";
        }
      } else {
        if (res.d_p[n] < -tol) {  // at the cap: gradient may only push up
          ++out.leader_boundary_sign_failures;
          log << "instance " << i << ": cap P sign violation " << res.d_p[n] << "\n";
        }
      }
    }
    const double rscale = std::max(res.rho_scale, 1e-12);
    if (!res.rho_boundary) {
      if (std::abs(res.d_rho) > 1e-5 * rscale) {
        ++out.leader_residual_failures;
        log << "instance " << i << ": interior rho residual " << res.d_rho << "\n";
      }
    } else {
      const double edge = std::min(1.0 - s.params.rho_min, backscatter_rho_edge(s));
      const bool at_upper = solved.rho >= edge - 1e-9;
      const double tol = 1e-5 * rscale;
      if ((at_upper && res.d_rho < -tol) || (solved.rho <= s.params.rho_min + 1e-9 && res.d_rho > tol))
        ++out.leader_boundary_sign_failures;
    }

    // --- leader: closed-form fixed point vs grid maximization of L_B ---
    if (interior) {
      const auto [p_fp, rho_fp] =
          closed_form_fixed_point(inst, observed, inst.follower.zeta, LeaderMode::anticipating);
      const double l_fp = leader_lagrangian_at(p_fp, rho_fp, inst.leader, observed, s,
                                               inst.follower.zeta, LeaderMode::anticipating);
      GridSpec pg{0.0, s.params.p_t_max, 400, 2, 10.0};
      GridSpec rg{s.params.rho_min, 1.0 - s.params.rho_min, 400, 2, 10.0};
      const auto gl = grid_max_leader(observed, s, inst.leader, inst.follower.zeta,
                                      LeaderMode::anticipating, pg, rg);
      const double scale = std::max({std::abs(gl.value), std::abs(l_fp), 1e-9});
      if (l_fp < gl.value - 1e-3 * scale) {
        ++out.leader_grid_failures;
        log << "instance " << i << ": closed-form value " << l_fp << " below grid " << gl.value
            << "\n";
      }

      // --- anticipated objective curvature at the accepted optimum ---
      for (size_t n = 0; n < solved.p_t.size(); ++n) {
        const double pn = solved.p_t[n];
        const double rho = solved.rho;
        if (pn <= 1e-4 * s.params.p_t_max || pn >= s.params.p_t_max * (1.0 - 1e-4)) continue;
        if (rho <= 0.05 || rho >= 0.95) continue;
        LeaderState probe_state = solved;
        auto f2 = [&](std::span<const double> q) {
          probe_state.p_t[n] = q[0];
          probe_state.rho = q[1];
          return anticipated_utility_wsn(probe_state, s, inst.follower.zeta);
        };
        const double pt2[2] = {pn, rho};
        const double st2[2] = {1e-5 * s.params.p_t_max, 1e-5};
        const double lo2[2] = {0.0, s.params.rho_min};
        const double hi2[2] = {s.params.p_t_max, 1.0 - s.params.rho_min};
        const auto hv = finite_diff_hessian(f2, pt2, st2, lo2, hi2);
        if (!hv.negative_definite) {
          ++out.hessian_failures;
          log << "instance " << i << ": anticipated Hessian not negative definite at tag " << n
              << "\n";
        }
      }
    }
  }

  out.fallback_rate =
      out.accepted_steps > 0 ? static_cast<double>(out.fallback_steps) / out.accepted_steps : 0.0;
  log << "instances=" << out.instances << " accepted_steps=" << out.accepted_steps
      << " fallback_steps=" << out.fallback_steps << " fallback_rate=" << out.fallback_rate
      << "\n";
  out.report = log.str();
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream outf(path, std::ios::binary);
  if (!outf) throw ConfigError("cannot open output file: " + path);
  outf << content;
}

}  // namespace bswsn

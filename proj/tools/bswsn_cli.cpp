#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bswsn/experiments.hpp"

namespace fs = std::filesystem;
using namespace bswsn;

namespace {

ScenarioConfig load_or_default(const std::string& config_path, std::uint64_t seed_override,
                               bool seed_given, const std::string& mode_override) {
  ScenarioConfig cfg = config_path.empty() ? config_from_json("{}") : load_config(config_path);
  if (seed_given) {
    cfg.seed = seed_override;
    if (cfg.random_tags) cfg.random_tags->seed = seed_override;
  }
  if (!mode_override.empty())
    cfg.mode = mode_override == "nash" ? GameMode::nash : GameMode::stackelberg;
  return cfg;
}

void ensure_dir(const std::string& out_dir) {
  if (!out_dir.empty()) fs::create_directories(out_dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return dir.empty() ? name : (fs::path(dir) / name).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stackelberg power-control simulator for backscatter WSNs under smart interference"};
  app.require_subcommand(1);

  std::string config_path, out_dir, mode;
  std::uint64_t seed = 0;
  bool seed_given = false;
  app.add_option("--config", config_path, "JSON scenario config (defaults when omitted)");
  app.add_option("--out", out_dir, "output directory for CSV/JSON files");
  auto* seed_opt = app.add_option("--seed", seed, "seed for randomized placement / corpora");
  app.add_option("--mode", mode, "stackelberg|nash (overrides config)")
      ->check(CLI::IsMember({"stackelberg", "nash"}));

  auto* run = app.add_subcommand("run", "play one game and emit per-round rows");
  auto* sweep = app.add_subcommand("sweep-rho", "fix rho on a grid, emit the utility curve");
  int sweep_points = 50;
  sweep->add_option("--points", sweep_points, "grid resolution in (0,1)")
      ->check(CLI::PositiveNumber);
  auto* compare = app.add_subcommand("compare", "run both game modes and report dominance");
  auto* oracle = app.add_subcommand("oracle-check", "run the closed-form certification suite");
  int oracle_instances = 200;
  oracle->add_option("--instances", oracle_instances, "random instances in the corpus")
      ->check(CLI::PositiveNumber);
  for (auto* sub : {run, sweep, compare, oracle}) sub->fallthrough();

  CLI11_PARSE(app, argc, argv);
  seed_given = seed_opt->count() > 0;

  try {
    const ScenarioConfig cfg = load_or_default(config_path, seed, seed_given, mode);
    ensure_dir(out_dir);

    if (run->parsed()) {
      const auto res = run_scenario(cfg);
      if (res.exit_code == kExitInfeasible) {
        std::cerr << res.diagnostic << "\n";
        write_text_file(join(out_dir, "summary.json"), res.summary_json + "\n");
        return res.exit_code;
      }
      write_text_file(join(out_dir, "rounds.csv"), rows_to_csv(res.rows));
      write_text_file(join(out_dir, "summary.json"), res.summary_json + "\n");
      std::cout << res.summary_json << "\n";
      return res.exit_code;
    }

    if (sweep->parsed()) {
      const auto res = sweep_rho(cfg, default_rho_grid(sweep_points));
      write_text_file(join(out_dir, "sweep_rho.csv"), rows_to_csv(res.rows));
      double best_rho = 0.0, best_u = -1e300;
      for (const auto& pt : res.points)
        if (pt.ok && pt.u_b > best_u) {
          best_u = pt.u_b;
          best_rho = pt.rho;
        }
      std::cout << "sweep points: " << res.points.size() << ", peak u_b " << best_u << " at rho "
                << best_rho << "\n";
      return res.exit_code;
    }

    if (compare->parsed()) {
      const auto res = compare_games(cfg);
      if (res.exit_code == kExitInfeasible) {
        std::cerr << res.summary_json << "\n";
        return res.exit_code;
      }
      std::vector<ResultRow> rows = res.stackelberg.rows;
      rows.insert(rows.end(), res.nash.rows.begin(), res.nash.rows.end());
      write_text_file(join(out_dir, "compare.csv"), rows_to_csv(rows));
      write_text_file(join(out_dir, "compare_summary.json"), res.summary_json + "\n");
      std::cout << res.summary_json << "\n";
      return res.exit_code;
    }

    if (oracle->parsed()) {
      const auto res = oracle_check(cfg, seed_given ? seed : cfg.seed, oracle_instances);
      std::cout << res.report;
      if (!out_dir.empty()) write_text_file(join(out_dir, "oracle_check.txt"), res.report);
      if (!res.ok()) {
        std::cerr << "oracle-check: residual breach detected\n";
        return 1;
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible scenario (" << e.binding_constraint << "): " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

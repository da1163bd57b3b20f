// Command-line front end: single runs, parameter sweeps, the geometry oracle
// suite and link-budget checks.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "mmrelay/config.hpp"
#include "mmrelay/oracle.hpp"
#include "mmrelay/report.hpp"
#include "mmrelay/sim.hpp"

namespace {

using namespace mmrelay;

struct Common {
  std::string config_path;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<int> runs;
  std::string policies;
  std::string sweep;
};

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) apply_config_file(cfg, c.config_path);
  apply_environment(cfg, [](const char* name) { return std::getenv(name); });
  if (c.seed) set_option(cfg, "run", "seed", std::to_string(*c.seed));
  if (c.workers) set_option(cfg, "run", "workers", std::to_string(*c.workers));
  if (c.runs) set_option(cfg, "run", "runs", std::to_string(*c.runs));
  if (!c.policies.empty()) set_option(cfg, "run", "policies", c.policies);
  if (!c.sweep.empty()) set_option(cfg, "run", "sweep", c.sweep);
  validate(cfg);
  return cfg;
}

int resolve_workers(int w) {
  if (w > 0) return w;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
  } else {
    write_file_atomic(path, content);
  }
}

void add_common(CLI::App* cmd, Common& c, bool with_sweep) {
  cmd->add_option("--config", c.config_path, "Configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out_path, "Output CSV path (stdout when omitted)");
  cmd->add_option("--seed", c.seed, "Base seed");
  cmd->add_option("--workers", c.workers, "Worker threads (0 = all cores)");
  cmd->add_option("--runs", c.runs, "Replications per point");
  cmd->add_option("--policy", c.policies, "Comma-separated policies: dobs, rss, cbf or all");
  if (with_sweep) cmd->add_option("--sweep", c.sweep, "param=v1,v2,... (K, L, v_max, dt, load, n_nodes, obstacle_v_max)");
}

int run_experiment_cmd(const Common& c, bool sweep) {
  ExperimentConfig cfg = load(c);
  if (!sweep) cfg.sweep = {};
  if (sweep && cfg.sweep.param == SweepParam::None) {
    throw ConfigError("run.sweep", 0, "sweep needs --sweep param=v1,v2,... or run.sweep in the config");
  }
  const auto rows = run_experiment(cfg.scenario, cfg.sweep, cfg.policies, resolve_workers(cfg.workers));
  // Worker count does not change results, so it is left out of the echoed config.
  ExperimentConfig echoed = cfg;
  echoed.workers = 0;
  emit(c.out_path, format_csv(rows, effective_config(echoed)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave D2D relay-selection simulator"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "Run the configured scenario for every policy");
  add_common(run, run_opts, false);

  Common sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Sweep one scenario parameter");
  add_common(sweep, sweep_opts, true);

  std::uint64_t geo_samples = 10000;
  std::uint64_t geo_seed = 1;
  int geo_workers = 0;
  std::string geo_out;
  auto* geo = app.add_subcommand("validate-geometry", "Compare the interference predicate with the sampling oracle");
  geo->add_option("--samples", geo_samples, "Number of random segment/triangle pairs")->check(CLI::PositiveNumber);
  geo->add_option("--seed", geo_seed, "Seed");
  geo->add_option("--workers", geo_workers, "Worker threads (0 = all cores)");
  geo->add_option("--out", geo_out, "Report path (stdout when omitted)");

  std::string budget_config;
  auto* budget = app.add_subcommand("link-budget", "Print derived link-budget figures");
  budget->add_option("--config", budget_config, "Configuration file")->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_experiment_cmd(run_opts, false);
    if (sweep->parsed()) return run_experiment_cmd(sweep_opts, true);
    if (geo->parsed()) {
      const auto report = oracle::run_agreement_parallel(geo_samples, geo_seed, resolve_workers(geo_workers));
      emit(geo_out, oracle::format_report(report));
      return 0;
    }
    if (budget->parsed()) {
      Common c;
      c.config_path = budget_config;
      std::cout << link_budget_report(load(c).scenario.channel);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

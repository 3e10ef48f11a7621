// iabcache: scenario sweeps, single-instance Pareto fronts and the oracle check.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "iabcache/iabcache.hpp"

namespace {

using namespace iabcache;

struct Overrides {
  std::string config_path;
  std::string seed;
  std::string alpha_steps;
  std::string out;
  std::string threads;
  std::string fixed_eta;
  bool no_cache = false;
  std::string format = "csv";
};

void add_run_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "key = value config file (defaults when omitted)");
  cmd->add_option("--seed", o.seed, "base random seed");
  cmd->add_option("--alpha-steps", o.alpha_steps, "alpha grid points from 0 to 1");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--threads", o.threads, "worker threads");
  cmd->add_option("--fixed-eta", o.fixed_eta, "use this bandwidth split instead of optimizing it");
  cmd->add_flag("--no-cache", o.no_cache, "disable edge caching (baseline)");
  cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv"}));
}

RunConfig load(const Overrides& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : parse_config(o.config_path);
  if (!o.seed.empty()) set_config_value(cfg, "run.seed", o.seed);
  if (!o.alpha_steps.empty()) set_config_value(cfg, "run.alpha_steps", o.alpha_steps);
  if (!o.out.empty()) set_config_value(cfg, "output.dir", o.out);
  if (!o.threads.empty()) set_config_value(cfg, "run.threads", o.threads);
  if (!o.fixed_eta.empty()) set_config_value(cfg, "solver.fixed_eta", o.fixed_eta);
  if (o.no_cache) cfg.solver.cache_policy = CachePolicy::Disabled;
  validate_config(cfg);
  return cfg;
}

int run_scenario_cmd(const Overrides& o, bool single) {
  RunConfig cfg = load(o);
  if (single) {
    cfg.scenario.dimension = SweepDimension::None;
    cfg.scenario.values.clear();
    cfg.scenario.replications = 1;
  }
  const ResultTable table = run_scenario(make_scenario(cfg), cfg.threads);
  const ParetoFront front = representative_front(table);
  emit_results(table, front, cfg.output_dir);
  write_summary(std::cout, table, front);
  std::cout << "wrote " << cfg.output_dir << "/{pareto,sweep,reductions}.csv and summary.txt\n";
  if (single && table.infeasible_cells() > 0) return 3;
  return 0;
}

int oracle_cmd(std::uint64_t seed, std::size_t count, std::size_t threads) {
  const OracleReport r = run_oracle_suite(count, seed, threads);
  std::printf("instances %zu, comparisons %zu, mismatches %zu, max relative gap %.3g\n", r.instances, r.comparisons,
              r.mismatches, r.max_relative_gap);
  for (const auto& f : r.failures) std::printf("  %s\n", f.c_str());
  return r.mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint edge caching and IAB bandwidth split: energy / delay trade-off"};
  app.require_subcommand(1);

  Overrides run_o, pareto_o;
  auto* run = app.add_subcommand("run", "run the scenario sweep described by the config");
  add_run_flags(run, run_o);
  auto* pareto = app.add_subcommand("pareto", "alpha sweep on a single instance");
  add_run_flags(pareto, pareto_o);

  std::uint64_t oracle_seed = 1;
  std::size_t oracle_count = 100;
  std::size_t oracle_threads = 1;
  auto* oracle = app.add_subcommand("oracle", "check the cache solver against exhaustive search");
  oracle->add_option("--seed", oracle_seed, "first instance seed");
  oracle->add_option("--count", oracle_count, "number of random instances")->check(CLI::PositiveNumber);
  oracle->add_option("--threads", oracle_threads, "worker threads")->check(CLI::PositiveNumber);

  app.add_subcommand("defaults", "print the default config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_scenario_cmd(run_o, false);
    if (*pareto) return run_scenario_cmd(pareto_o, true);
    if (*oracle) return oracle_cmd(oracle_seed, oracle_count, oracle_threads);
    std::cout << emit_config(RunConfig{});
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support.hpp"

using namespace iabcache;
using namespace testing_support;

namespace {

std::string error_key(std::string_view text) {
  try {
    parse_config_text(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<no error>";
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST(Config, EmptyFileGivesTableDefaults) {
  const RunConfig cfg = parse_config_text("");
  EXPECT_EQ(cfg, RunConfig{});
  const InstanceParams& p = cfg.instance;
  EXPECT_EQ(p.r_macro_m, 400.0);
  EXPECT_EQ(p.r_small_m, 40.0);
  EXPECT_EQ(p.file_size_bits, 1e6);
  EXPECT_EQ(p.file_count, 200u);
  EXPECT_EQ(p.cache_capacity, 150u);
  EXPECT_EQ(p.caching_time_h, 10.0);
  EXPECT_EQ(p.carrier_hz, 28e9);
  EXPECT_EQ(p.bandwidth_hz, 200e6);
  EXPECT_EQ(p.caching_w_per_bit, 6.25e-12);
  EXPECT_EQ(p.mbs_power_dbm, 46.0);
  EXPECT_EQ(p.sbs_power_dbm, 23.0);
  EXPECT_EQ(p.antenna_gain_dbi, 18.0);
  EXPECT_EQ(p.noise_dbm_per_hz, -173.0);
  EXPECT_EQ(p.delta_los, 2.0);
  EXPECT_EQ(p.delta_nlos, 3.3);
  EXPECT_EQ(p.ue_count, 100u);

  // Decibel fields land in linear units once an instance is built.
  const Instance inst = build_instance(p, cfg.seed);
  EXPECT_NEAR(inst.power.mbs_max_w, 39.810717055349734, 1e-12);
  EXPECT_NEAR(inst.power.sbs_max_w, 0.19952623149688797, 1e-15);
  EXPECT_NEAR(inst.channel.antenna_gain, 63.09573444801933, 1e-12);
  EXPECT_NEAR(inst.channel.noise_w_per_hz / 5.011872336272715e-21, 1.0, 1e-12);
}

TEST(Config, CommentsAndWhitespaceAreIgnored) {
  const RunConfig cfg = parse_config_text(
      "# header\n\n   traffic.cache_capacity   =  50   # trailing\n"
      "power.sbs_dbm=26\nscenario.dimension = caching_time_h\nscenario.values = 0.1, 1,10 ,100\n");
  EXPECT_EQ(cfg.instance.cache_capacity, 50u);
  EXPECT_EQ(cfg.instance.sbs_power_dbm, 26.0);
  EXPECT_EQ(cfg.scenario.dimension, SweepDimension::CachingTimeHours);
  EXPECT_EQ(cfg.scenario.values, (std::vector<double>{0.1, 1, 10, 100}));
}

TEST(Config, FixedEtaOutOfRangeNamesBandwidthConstraint) {
  try {
    parse_config_text("solver.fixed_eta = 1.5\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "solver.fixed_eta");
    EXPECT_NE(std::string(e.what()).find("bandwidth-fraction"), std::string::npos) << e.what();
  }
  EXPECT_EQ(parse_config_text("solver.fixed_eta = 0.25\n").solver.fixed_eta, 0.25);
  EXPECT_FALSE(parse_config_text("solver.fixed_eta = none\n").solver.fixed_eta.has_value());
}

TEST(Config, DefaultsRoundTrip) {
  EXPECT_EQ(parse_config_text(emit_config(RunConfig{})), RunConfig{});
}

TEST(Config, NonDefaultRoundTripsExactly) {
  RunConfig cfg;
  cfg.instance.region = Region::Square;
  cfg.instance.sbs_positions = {{0.1, -33.3333333333333}, {120, 7e-5}};
  cfg.instance.ue_positions = {{1.0 / 3.0, 2.0 / 3.0}, {-100, 100}, {50, 50}};
  cfg.instance.sbs_count = 2;
  cfg.instance.ue_count = 3;
  cfg.instance.fading = FadingMode::Sampled;
  cfg.instance.zipf_skew = 0.1 + 0.2;
  cfg.instance.caching_time_h = 1e-3 / 7;
  cfg.instance.gamma_bps = 12345.678;
  cfg.instance.backhaul_split = BackhaulSplit::AllLinks;
  cfg.solver.fixed_eta = 0.3;
  cfg.solver.cache_policy = CachePolicy::Disabled;
  cfg.solver.eta_grid_points = 17;
  cfg.scenario.name = "power study";
  cfg.scenario.dimension = SweepDimension::SbsPowerDbm;
  cfg.scenario.values = {20, 23, 26.5};
  cfg.scenario.replications = 4;
  cfg.scenario.no_caching_baseline = true;
  cfg.seed = 18446744073709551615ull;
  cfg.alpha_steps = 11;
  cfg.threads = 3;
  cfg.output_dir = "results/a";
  const RunConfig back = parse_config_text(emit_config(cfg));
  EXPECT_EQ(back, cfg);
  EXPECT_EQ(emit_config(back), emit_config(cfg));
}

TEST(Config, ErrorsCarryKeyPath) {
  EXPECT_EQ(error_key("traffic.bogus = 1\n"), "traffic.bogus");
  EXPECT_EQ(error_key("just some words\n"), "line 1");
  EXPECT_EQ(error_key("\n = 4\n"), "line 2");
  EXPECT_EQ(error_key("channel.fc_hz = fast\n"), "channel.fc_hz");
  EXPECT_EQ(error_key("channel.fc_hz = 28e9 GHz\n"), "channel.fc_hz");
  EXPECT_EQ(error_key("channel.fc_hz = -1\n"), "channel.fc_hz");
  EXPECT_EQ(error_key("traffic.zipf_r = -0.5\n"), "traffic.zipf_r");
  EXPECT_EQ(error_key("traffic.cache_capacity = 2.5\n"), "traffic.cache_capacity");
  EXPECT_EQ(error_key("power.fpc_epsilon = 1.2\n"), "power.fpc_epsilon");
  EXPECT_EQ(error_key("topology.region = hexagon\n"), "topology.region");
  EXPECT_EQ(error_key("topology.r_small_m = 400\n"), "topology.r_small_m");
  EXPECT_EQ(error_key("power.sbs_dbm = 20\npower.sbs_dbm = 23\n"), "power.sbs_dbm");
  EXPECT_EQ(error_key("scenario.dimension = capacity_files\nscenario.values = 50, 100.5\n"), "scenario.values");
  EXPECT_EQ(error_key("scenario.dimension = capacity_files\n"), "scenario.values");
  EXPECT_EQ(error_key("scenario.values = 1, 2\n"), "scenario.values");
  EXPECT_EQ(error_key("scenario.dimension = sideways\n"), "scenario.dimension");
  EXPECT_EQ(error_key("topology.ue_positions = 500, 0\n"), "topology.ue_positions");
  EXPECT_EQ(error_key("topology.ue_positions = 5\n"), "topology.ue_positions");
  EXPECT_EQ(error_key("scenario.no_caching_baseline = maybe\n"), "scenario.no_caching_baseline");
}

TEST(Config, ExplicitPositionsSetCounts) {
  const RunConfig cfg = parse_config_text("topology.sbs_positions = 100, 0\ntopology.ue_positions = 90, 0; -10, 5; 0, 300\n");
  EXPECT_EQ(cfg.instance.sbs_count, 1u);
  EXPECT_EQ(cfg.instance.ue_count, 3u);
  const Instance inst = build_instance(cfg.instance, 1);
  EXPECT_EQ(inst.topology.serving_bs(0), 1u);
  EXPECT_EQ(inst.topology.serving_bs(1), kMacro);
}

TEST(Config, MissingFileIsConfigError) {
  EXPECT_THROW(parse_config("/nonexistent/dir/run.cfg"), ConfigError);
  const auto dir = scratch_dir("cfgfile");
  {
    std::ofstream out(dir / "run.cfg");
    out << "traffic.cache_capacity = 100\n";
  }
  EXPECT_EQ(parse_config((dir / "run.cfg").string()).instance.cache_capacity, 100u);
}

TEST(Config, OverridesUseTheSameChecks) {
  RunConfig cfg;
  set_config_value(cfg, "run.alpha_steps", "5");
  EXPECT_EQ(cfg.alpha_steps, 5u);
  EXPECT_THROW(set_config_value(cfg, "run.alpha_steps", "1"), ConfigError);
  EXPECT_THROW(set_config_value(cfg, "solver.fixed_eta", "-0.1"), ConfigError);
  EXPECT_THROW(set_config_value(cfg, "nope", "1"), ConfigError);
}

TEST(Config, MakeScenarioCarriesEverything) {
  const RunConfig cfg = parse_config_text(
      "scenario.name = t\nscenario.dimension = caching_time_h\nscenario.values = 1, 10\n"
      "scenario.replications = 3\nscenario.no_caching_baseline = true\nrun.seed = 9\nrun.alpha_steps = 11\n"
      "solver.eta_grid_points = 21\n");
  const Scenario sc = make_scenario(cfg);
  EXPECT_EQ(sc.name, "t");
  EXPECT_EQ(sc.dimension, SweepDimension::CachingTimeHours);
  EXPECT_EQ(sc.values, (std::vector<double>{1, 10}));
  EXPECT_EQ(sc.replications, 3u);
  EXPECT_TRUE(sc.no_caching_baseline);
  EXPECT_EQ(sc.seed, 9u);
  EXPECT_EQ(sc.alphas, alpha_grid(11));
  EXPECT_EQ(sc.solver.eta_grid_points, 21u);
  EXPECT_EQ(sc.base, cfg.instance);
}

namespace {

ResultTable small_table() {
  Scenario sc;
  sc.dimension = SweepDimension::CachingTimeHours;
  sc.values = {1, 100};
  sc.replications = 2;
  sc.alphas = alpha_grid(11);
  sc.no_caching_baseline = true;
  return run_scenario(sc);
}

}  // namespace

TEST(Report, FilesHaveDocumentedSchemas) {
  const ResultTable t = small_table();
  const ParetoFront front = representative_front(t);
  ASSERT_FALSE(front.points.empty());
  const auto dir = scratch_dir("schemas");
  emit_results(t, front, dir);

  const auto pareto = lines_of(slurp(dir / "pareto.csv"));
  ASSERT_EQ(pareto.size(), front.points.size() + 1);
  EXPECT_EQ(pareto[0], "alpha,energy_j,delay_s,scalar,eta,mean_cached_files");

  const auto sweep = lines_of(slurp(dir / "sweep.csv"));
  ASSERT_EQ(sweep.size(), t.rows.size() + 1);
  EXPECT_EQ(sweep[0],
            "sweep_dim,sweep_value,scheme,alpha,replications,feasible,energy_j_mean,energy_j_sd,delay_s_mean,"
            "delay_s_sd,norm_sum_mean,norm_sum_sd,scalar_mean,eta_mean,mean_cached_files_mean,mean_cached_files_sd");
  EXPECT_EQ(sweep[1].rfind("caching_time_h,1,joint,0,2,2,", 0), 0u) << sweep[1];

  const auto red = lines_of(slurp(dir / "reductions.csv"));
  ASSERT_EQ(red.size(), 3u);
  EXPECT_EQ(red[0],
            "sweep_dim,sweep_value,replications,sum_alpha0_mean,sum_alpha05_mean,sum_alpha1_mean,"
            "reduction_vs_alpha0_pct_mean,reduction_vs_alpha0_pct_sd,reduction_vs_alpha1_pct_mean,"
            "reduction_vs_alpha1_pct_sd");

  const std::string summary = slurp(dir / "summary.txt");
  EXPECT_NE(summary.find("infeasible: 0"), std::string::npos);
  EXPECT_NE(summary.find("pareto front"), std::string::npos);
}

TEST(Report, NumbersParseBackExactly) {
  const ResultTable t = small_table();
  const ParetoFront front = representative_front(t);
  std::ostringstream out;
  write_pareto_csv(out, front);
  const auto rows = lines_of(out.str());
  for (std::size_t i = 0; i < front.points.size(); ++i) {
    std::vector<double> cols;
    std::istringstream line(rows[i + 1]);
    for (std::string cell; std::getline(line, cell, ',');) cols.push_back(std::strtod(cell.c_str(), nullptr));
    ASSERT_EQ(cols.size(), 6u);
    const SolutionPoint& p = front.points[i];
    EXPECT_EQ(cols[0], p.alpha);
    EXPECT_EQ(cols[1], p.energy_j);
    EXPECT_EQ(cols[2], p.delay_s);
    EXPECT_EQ(cols[3], p.scalar_objective);
    EXPECT_EQ(cols[4], p.eta);
    EXPECT_EQ(cols[5], p.cache.mean_cached());
  }
  EXPECT_EQ(csv_number(0.1), "0.10000000000000001");
  EXPECT_EQ(csv_number(std::nan("")), "nan");
}

TEST(Report, EmptyFrontIsHeaderOnly) {
  std::ostringstream out;
  write_pareto_csv(out, ParetoFront{});
  EXPECT_EQ(out.str(), "alpha,energy_j,delay_s,scalar,eta,mean_cached_files\n");
}

TEST(Report, UnwritablePathThrows) {
  const auto dir = scratch_dir("blocked");
  {
    std::ofstream out(dir / "file");
    out << "x";
  }
  const ResultTable t = small_table();
  EXPECT_THROW(emit_results(t, representative_front(t), dir / "file" / "sub"), std::runtime_error);
}

TEST(Report, RepeatedEmissionIsByteIdentical) {
  const ResultTable a = small_table();
  const ResultTable b = small_table();
  const auto da = scratch_dir("repeat_a"), db = scratch_dir("repeat_b");
  emit_results(a, representative_front(a), da);
  emit_results(b, representative_front(b), db);
  for (const char* name : {"pareto.csv", "sweep.csv", "reductions.csv", "summary.txt"}) {
    EXPECT_EQ(slurp(da / name), slurp(db / name)) << name;
  }
}

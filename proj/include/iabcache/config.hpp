#pragma once

// Flat `section.key = value` run configuration. Lines starting with '#' are
// comments; absent keys keep their defaults; unknown keys are errors.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "error.hpp"
#include "optimizer.hpp"
#include "params.hpp"
#include "pareto.hpp"
#include "scenario.hpp"

namespace iabcache {

struct ScenarioSection {
  std::string name = "default";
  SweepDimension dimension = SweepDimension::None;
  std::vector<double> values;
  std::size_t replications = 10;
  bool no_caching_baseline = false;

  friend bool operator==(const ScenarioSection&, const ScenarioSection&) = default;
};

struct RunConfig {
  InstanceParams instance;
  SolverConfig solver;
  ScenarioSection scenario;
  std::uint64_t seed = 1;
  std::size_t alpha_steps = 21;
  std::size_t threads = 1;
  std::string output_dir = "out";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline Scenario make_scenario(const RunConfig& cfg) {
  Scenario sc;
  sc.name = cfg.scenario.name;
  sc.base = cfg.instance;
  sc.dimension = cfg.scenario.dimension;
  sc.values = cfg.scenario.values;
  sc.replications = cfg.scenario.replications;
  sc.seed = cfg.seed;
  sc.alphas = alpha_grid(cfg.alpha_steps);
  sc.solver = cfg.solver;
  sc.no_caching_baseline = cfg.scenario.no_caching_baseline;
  return sc;
}

namespace config_detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// Shortest text that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double to_double(const std::string& key, std::string_view s) {
  double v = 0.0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) throw ConfigError(key, "not a number: '" + std::string(s) + "'");
  if (!std::isfinite(v)) throw ConfigError(key, "must be finite");
  return v;
}

inline std::uint64_t to_u64(const std::string& key, std::string_view s) {
  std::uint64_t v = 0;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || s.empty()) {
    throw ConfigError(key, "not a non-negative integer: '" + std::string(s) + "'");
  }
  return v;
}

inline bool to_bool(const std::string& key, std::string_view s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError(key, "expected true or false");
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<double> to_list(const std::string& key, std::string_view s) {
  std::vector<double> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ',')) out.push_back(to_double(key, item));
  return out;
}

inline std::string format_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

/// "x,y; x,y; ..."
inline std::vector<Point> to_points(const std::string& key, std::string_view s) {
  std::vector<Point> out;
  if (trim(s).empty()) return out;
  for (const auto& item : split(s, ';')) {
    const auto xy = split(item, ',');
    if (xy.size() != 2) throw ConfigError(key, "expected 'x,y' pairs separated by ';'");
    out.push_back({to_double(key, xy[0]), to_double(key, xy[1])});
  }
  return out;
}

inline std::string format_points(const std::vector<Point>& pts) {
  std::string s;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    s += (i ? "; " : "") + format_double(pts[i].x) + "," + format_double(pts[i].y);
  }
  return s;
}

inline void require(bool ok, const std::string& key, const char* what) {
  if (!ok) throw ConfigError(key, what);
}

struct Field {
  const char* key;
  const char* doc;
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string& key, std::string_view)> set;
};

template <class Member>
Field positive(const char* key, const char* doc, Member member) {
  return {key, doc, [member](const RunConfig& c) { return format_double(member(const_cast<RunConfig&>(c))); },
          [member](RunConfig& c, const std::string& k, std::string_view v) {
            const double d = to_double(k, v);
            require(d > 0.0, k, "must be positive");
            member(c) = d;
          }};
}

template <class Member>
Field real(const char* key, const char* doc, Member member, double lo, double hi, const char* range) {
  return {key, doc, [member](const RunConfig& c) { return format_double(member(const_cast<RunConfig&>(c))); },
          [member, lo, hi, range](RunConfig& c, const std::string& k, std::string_view v) {
            const double d = to_double(k, v);
            require(d >= lo && d <= hi, k, range);
            member(c) = d;
          }};
}

template <class Member>
Field count(const char* key, const char* doc, Member member, std::size_t lo) {
  return {key, doc, [member](const RunConfig& c) { return std::to_string(member(const_cast<RunConfig&>(c))); },
          [member, lo](RunConfig& c, const std::string& k, std::string_view v) {
            const auto n = to_u64(k, v);
            if (n < lo) throw ConfigError(k, "must be >= " + std::to_string(lo));
            member(c) = static_cast<std::size_t>(n);
          }};
}

inline const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back(count("topology.sbs_count", "number of SBSs B (ignored when positions are given)",
                      [](RunConfig& c) -> std::size_t& { return c.instance.sbs_count; }, 0));
    f.push_back(count("topology.ue_count", "number of UEs U (ignored when positions are given)",
                      [](RunConfig& c) -> std::size_t& { return c.instance.ue_count; }, 1));
    f.push_back(positive("topology.r_macro_m", "MBS coverage radius R_M",
                         [](RunConfig& c) -> double& { return c.instance.r_macro_m; }));
    f.push_back(positive("topology.r_small_m", "SBS coverage radius R_S",
                         [](RunConfig& c) -> double& { return c.instance.r_small_m; }));
    f.push_back({"topology.region", "random deployment area: disc or square",
                 [](const RunConfig& c) { return std::string(c.instance.region == Region::Disc ? "disc" : "square"); },
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   if (v == "disc") c.instance.region = Region::Disc;
                   else if (v == "square") c.instance.region = Region::Square;
                   else throw ConfigError(k, "expected disc or square");
                 }});
    f.push_back({"topology.sbs_positions", "explicit SBS layout 'x,y; x,y' in metres, MBS at the origin",
                 [](const RunConfig& c) { return format_points(c.instance.sbs_positions); },
                 [](RunConfig& c, const std::string& k, std::string_view v) { c.instance.sbs_positions = to_points(k, v); }});
    f.push_back({"topology.ue_positions", "explicit UE layout; enables the explicit layout",
                 [](const RunConfig& c) { return format_points(c.instance.ue_positions); },
                 [](RunConfig& c, const std::string& k, std::string_view v) { c.instance.ue_positions = to_points(k, v); }});

    f.push_back(positive("channel.fc_hz", "carrier frequency",
                         [](RunConfig& c) -> double& { return c.instance.carrier_hz; }));
    f.push_back(positive("channel.bandwidth_hz", "total mmWave bandwidth W",
                         [](RunConfig& c) -> double& { return c.instance.bandwidth_hz; }));
    f.push_back(real("channel.antenna_gain_dbi", "antenna gain G", [](RunConfig& c) -> double& { return c.instance.antenna_gain_dbi; },
                     -100.0, 100.0, "must lie in [-100, 100] dBi"));
    f.push_back(real("channel.noise_dbm_per_hz", "noise power spectral density N0",
                     [](RunConfig& c) -> double& { return c.instance.noise_dbm_per_hz; }, -300.0, 0.0,
                     "must lie in [-300, 0] dBm/Hz"));
    f.push_back(positive("channel.delta_los", "LOS path-loss exponent",
                         [](RunConfig& c) -> double& { return c.instance.delta_los; }));
    f.push_back(positive("channel.delta_nlos", "NLOS path-loss exponent",
                         [](RunConfig& c) -> double& { return c.instance.delta_nlos; }));
    f.push_back(real("channel.los_threshold_m", "links up to this length are LOS",
                     [](RunConfig& c) -> double& { return c.instance.los_threshold_m; }, 0.0, 1e12, "must be >= 0"));
    f.push_back(real("channel.nakagami_m_los", "Nakagami shape, LOS", [](RunConfig& c) -> double& { return c.instance.nakagami_m_los; },
                     0.5, 1e6, "must be >= 0.5"));
    f.push_back(real("channel.nakagami_m_nlos", "Nakagami shape, NLOS",
                     [](RunConfig& c) -> double& { return c.instance.nakagami_m_nlos; }, 0.5, 1e6, "must be >= 0.5"));
    f.push_back({"channel.fading", "expected (|h|^2 = 1) or sampled",
                 [](const RunConfig& c) { return std::string(c.instance.fading == FadingMode::Expected ? "expected" : "sampled"); },
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   if (v == "expected") c.instance.fading = FadingMode::Expected;
                   else if (v == "sampled") c.instance.fading = FadingMode::Sampled;
                   else throw ConfigError(k, "expected 'expected' or 'sampled'");
                 }});

    f.push_back(real("power.mbs_dbm", "MBS maximum transmit power", [](RunConfig& c) -> double& { return c.instance.mbs_power_dbm; },
                     -100.0, 100.0, "must lie in [-100, 100] dBm"));
    f.push_back(real("power.sbs_dbm", "SBS maximum transmit power", [](RunConfig& c) -> double& { return c.instance.sbs_power_dbm; },
                     -100.0, 100.0, "must lie in [-100, 100] dBm"));
    f.push_back(real("power.fpc_epsilon", "fractional power control factor",
                     [](RunConfig& c) -> double& { return c.instance.fpc_epsilon; }, 0.0, 1.0, "must lie in [0, 1]"));

    f.push_back(count("traffic.file_count", "library size K", [](RunConfig& c) -> std::size_t& { return c.instance.file_count; }, 1));
    f.push_back(real("traffic.zipf_r", "Zipf skew r", [](RunConfig& c) -> double& { return c.instance.zipf_skew; }, 0.0, 100.0,
                     "must lie in [0, 100]"));
    f.push_back(positive("traffic.file_size_bits", "file size Q",
                         [](RunConfig& c) -> double& { return c.instance.file_size_bits; }));
    f.push_back(count("traffic.cache_capacity", "files per SBS cache N",
                      [](RunConfig& c) -> std::size_t& { return c.instance.cache_capacity; }, 0));

    f.push_back(positive("energy.caching_w_per_bit", "caching power per bit w",
                         [](RunConfig& c) -> double& { return c.instance.caching_w_per_bit; }));
    f.push_back(positive("energy.caching_time_h", "caching time T",
                         [](RunConfig& c) -> double& { return c.instance.caching_time_h; }));

    f.push_back(real("qos.gamma_bps", "minimum access rate per UE", [](RunConfig& c) -> double& { return c.instance.gamma_bps; },
                     0.0, 1e15, "must be >= 0"));
    f.push_back(real("qos.tau_bps", "minimum backhaul rate per SBS", [](RunConfig& c) -> double& { return c.instance.tau_bps; },
                     0.0, 1e15, "must be >= 0"));
    f.push_back({"qos.backhaul_split", "backhaul bandwidth shared by active links or all SBSs",
                 [](const RunConfig& c) {
                   return std::string(c.instance.backhaul_split == BackhaulSplit::ActiveLinks ? "active" : "all");
                 },
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   if (v == "active") c.instance.backhaul_split = BackhaulSplit::ActiveLinks;
                   else if (v == "all") c.instance.backhaul_split = BackhaulSplit::AllLinks;
                   else throw ConfigError(k, "expected active or all");
                 }});

    f.push_back(count("solver.eta_grid_points", "coarse eta grid size",
                      [](RunConfig& c) -> std::size_t& { return c.solver.eta_grid_points; }, 3));
    f.push_back(positive("solver.eta_refine_tol", "golden-section bracket tolerance",
                         [](RunConfig& c) -> double& { return c.solver.eta_refine_tol; }));
    f.push_back(count("solver.oracle_limit", "largest B*K the brute-force oracle accepts",
                      [](RunConfig& c) -> std::size_t& { return c.solver.oracle_limit; }, 1));
    f.push_back({"solver.cache_policy", "optimized or disabled (no edge caching)",
                 [](const RunConfig& c) {
                   return std::string(c.solver.cache_policy == CachePolicy::Optimized ? "optimized" : "disabled");
                 },
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   if (v == "optimized") c.solver.cache_policy = CachePolicy::Optimized;
                   else if (v == "disabled") c.solver.cache_policy = CachePolicy::Disabled;
                   else throw ConfigError(k, "expected optimized or disabled");
                 }});
    f.push_back({"solver.fixed_eta", "fixed bandwidth split; none = optimize",
                 [](const RunConfig& c) { return c.solver.fixed_eta ? format_double(*c.solver.fixed_eta) : std::string("none"); },
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   if (v == "none" || v.empty()) {
                     c.solver.fixed_eta.reset();
                     return;
                   }
                   const double eta = to_double(k, v);
                   if (!(eta >= 0.0 && eta <= 1.0)) {
                     throw ConfigError(k, std::string(v) + " violates the " + to_string(Constraint::BandwidthFraction) +
                                              " constraint 0 <= eta <= 1");
                   }
                   c.solver.fixed_eta = eta;
                 }});

    f.push_back({"scenario.name", "label copied into the summary",
                 [](const RunConfig& c) { return c.scenario.name; },
                 [](RunConfig& c, const std::string&, std::string_view v) { c.scenario.name = std::string(v); }});
    f.push_back({"scenario.dimension", "none, caching_time_h, capacity_files, sbs_count or sbs_power_dbm",
                 [](const RunConfig& c) { return std::string(to_string(c.scenario.dimension)); },
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   auto d = parse_sweep_dimension(v);
                   if (!d) throw ConfigError(k, "unknown sweep dimension '" + std::string(v) + "'");
                   c.scenario.dimension = *d;
                 }});
    f.push_back({"scenario.values", "comma-separated sweep values",
                 [](const RunConfig& c) { return format_list(c.scenario.values); },
                 [](RunConfig& c, const std::string& k, std::string_view v) { c.scenario.values = to_list(k, v); }});
    f.push_back(count("scenario.replications", "random layouts per sweep value (seeds seed .. seed + n - 1)",
                      [](RunConfig& c) -> std::size_t& { return c.scenario.replications; }, 1));
    f.push_back({"scenario.no_caching_baseline", "also run every cell with caching disabled",
                 [](const RunConfig& c) { return std::string(c.scenario.no_caching_baseline ? "true" : "false"); },
                 [](RunConfig& c, const std::string& k, std::string_view v) { c.scenario.no_caching_baseline = to_bool(k, v); }});

    f.push_back({"run.seed", "base random seed",
                 [](const RunConfig& c) { return std::to_string(c.seed); },
                 [](RunConfig& c, const std::string& k, std::string_view v) { c.seed = to_u64(k, v); }});
    f.push_back(count("run.alpha_steps", "points of the alpha grid from 0 to 1",
                      [](RunConfig& c) -> std::size_t& { return c.alpha_steps; }, 2));
    f.push_back(count("run.threads", "worker threads", [](RunConfig& c) -> std::size_t& { return c.threads; }, 1));
    f.push_back({"output.dir", "directory for the CSV files and summary",
                 [](const RunConfig& c) { return c.output_dir; },
                 [](RunConfig& c, const std::string& k, std::string_view v) {
                   if (v.empty()) throw ConfigError(k, "must not be empty");
                   c.output_dir = std::string(v);
                 }});
    return f;
  }();
  return table;
}

}  // namespace config_detail

/// Cross-field checks; each failure names the offending key.
inline void validate_config(RunConfig& cfg) {
  using config_detail::require;
  auto& p = cfg.instance;
  require(p.r_small_m < p.r_macro_m, "topology.r_small_m", "must be smaller than topology.r_macro_m");
  if (!p.ue_positions.empty()) {
    p.sbs_count = p.sbs_positions.size();
    p.ue_count = p.ue_positions.size();
  } else {
    require(p.sbs_positions.empty(), "topology.sbs_positions", "needs topology.ue_positions as well");
  }
  auto inside = [&](const std::vector<Point>& pts) {
    for (const auto& q : pts) {
      if (distance(q, {0.0, 0.0}) > p.r_macro_m * (1.0 + 1e-12)) return false;
    }
    return true;
  };
  require(inside(p.sbs_positions), "topology.sbs_positions", "position outside topology.r_macro_m");
  require(inside(p.ue_positions), "topology.ue_positions", "position outside topology.r_macro_m");
  const auto& s = cfg.scenario;
  if (s.dimension == SweepDimension::None) {
    require(s.values.empty(), "scenario.values", "given while scenario.dimension is none");
  } else {
    require(!s.values.empty(), "scenario.values", "must list at least one value");
    for (double v : s.values) {
      try {
        (void)apply_sweep(p, s.dimension, v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("scenario.values", e.what());
      }
    }
  }
}

inline RunConfig parse_config_text(std::string_view text) {
  RunConfig cfg;
  std::vector<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = config_detail::trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
    const std::string key = config_detail::trim(std::string_view(body).substr(0, eq));
    const std::string value = config_detail::trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no), "missing key");
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) throw ConfigError(key, "given twice");
    seen.push_back(key);
    const auto& table = config_detail::fields();
    auto it = std::find_if(table.begin(), table.end(), [&](const config_detail::Field& f) { return key == f.key; });
    if (it == table.end()) throw ConfigError(key, "unknown key");
    it->set(cfg, key, value);
  }
  validate_config(cfg);
  return cfg;
}

inline RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

/// Every key with its current value; parse_config_text(emit_config(c)) == c.
inline std::string emit_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& f : config_detail::fields()) {
    const std::string key = f.key;
    const std::string sec = key.substr(0, key.find('.'));
    if (sec != section) {
      if (!section.empty()) out += '\n';
      section = sec;
    }
    out += "# " + std::string(f.doc) + '\n';
    out += key + " = " + f.get(cfg) + '\n';
  }
  return out;
}

/// Sets one key as if it appeared in the file (used for command-line overrides).
inline void set_config_value(RunConfig& cfg, const std::string& key, std::string_view value) {
  const auto& table = config_detail::fields();
  auto it = std::find_if(table.begin(), table.end(), [&](const config_detail::Field& f) { return key == f.key; });
  if (it == table.end()) throw ConfigError(key, "unknown key");
  it->set(cfg, key, value);
}

}  // namespace iabcache

#pragma once

// Parameter sweeps over replicated random instances, aggregated per alpha.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "constraints.hpp"
#include "error.hpp"
#include "optimizer.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "pareto.hpp"

namespace iabcache {

enum class SweepDimension { None, CachingTimeHours, CapacityFiles, SbsCount, SbsPowerDbm };

inline std::string_view to_string(SweepDimension d) {
  switch (d) {
    case SweepDimension::None: return "none";
    case SweepDimension::CachingTimeHours: return "caching_time_h";
    case SweepDimension::CapacityFiles: return "capacity_files";
    case SweepDimension::SbsCount: return "sbs_count";
    case SweepDimension::SbsPowerDbm: return "sbs_power_dbm";
  }
  return "?";
}

inline std::optional<SweepDimension> parse_sweep_dimension(std::string_view s) {
  for (auto d : {SweepDimension::None, SweepDimension::CachingTimeHours, SweepDimension::CapacityFiles,
                 SweepDimension::SbsCount, SweepDimension::SbsPowerDbm}) {
    if (to_string(d) == s) return d;
  }
  return std::nullopt;
}

enum class Scheme { Joint, NoCaching };

inline std::string_view to_string(Scheme s) { return s == Scheme::Joint ? "joint" : "no_caching"; }

/// `params` with the swept quantity set to `value`.
inline InstanceParams apply_sweep(InstanceParams params, SweepDimension dim, double value) {
  auto count = [&](const char* what) {
    if (!(value >= 0.0) || value != std::floor(value) || value > 1e9) {
      throw std::invalid_argument(std::string("sweep: ") + what + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(value);
  };
  switch (dim) {
    case SweepDimension::None: break;
    case SweepDimension::CachingTimeHours:
      if (!(value > 0.0)) throw std::invalid_argument("sweep: caching time must be positive");
      params.caching_time_h = value;
      break;
    case SweepDimension::CapacityFiles: params.cache_capacity = count("capacity"); break;
    case SweepDimension::SbsCount:
      if (!params.ue_positions.empty()) throw std::invalid_argument("sweep: sbs_count needs a random layout");
      params.sbs_count = count("sbs count");
      break;
    case SweepDimension::SbsPowerDbm: params.sbs_power_dbm = value; break;
  }
  return params;
}

struct Scenario {
  std::string name = "default";
  InstanceParams base;
  SweepDimension dimension = SweepDimension::None;
  std::vector<double> values;  // ignored for None
  std::size_t replications = 10;
  std::uint64_t seed = 1;      // replication r uses seed + r
  std::vector<double> alphas = alpha_grid(21);
  SolverConfig solver;
  bool no_caching_baseline = false;

  /// Sweep values actually run; a single cell at the base parameters for None.
  std::vector<double> cell_values() const {
    if (dimension == SweepDimension::None) return {0.0};
    return values;
  }

  void validate() const {
    if (replications < 1) throw std::invalid_argument("scenario: replications must be >= 1");
    if (dimension != SweepDimension::None && values.empty()) throw std::invalid_argument("scenario: empty sweep list");
    if (alphas.empty()) throw std::invalid_argument("scenario: empty alpha grid");
    for (double v : cell_values()) (void)apply_sweep(base, dimension, v);
    solver.validate();
  }
};

/// One (sweep value, replication, scheme) run.
struct CellResult {
  std::size_t value_index = 0;
  double value = 0.0;
  std::size_t replication = 0;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::Joint;
  bool feasible = false;
  std::optional<Constraint> binding;  // set when infeasible
  std::string error;
  Normalization normalization;        // from the caching-enabled pre-runs
  std::vector<SolutionPoint> points;  // one per alpha when feasible
  std::size_t front_size = 0;
  std::size_t violations = 0;         // post-hoc checker findings over all points
};

struct Stat {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double sd = std::numeric_limits<double>::quiet_NaN();
};

/// Mean and sample standard deviation. The values are sorted before summing
/// so the result does not depend on the order replications finished in.
inline Stat summarize(std::vector<double> values) {
  Stat s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  return s;
}

/// Replication aggregate for one (sweep value, scheme, alpha).
struct ResultRow {
  SweepDimension dimension = SweepDimension::None;
  double value = 0.0;
  Scheme scheme = Scheme::Joint;
  double alpha = 0.0;
  std::size_t replications = 0;
  std::size_t feasible = 0;
  Stat energy_j;
  Stat delay_s;
  Stat normalized_sum;  // delta_e E + delta_d D
  Stat scalar;
  Stat eta;
  Stat mean_cached_files;
};

struct ResultTable {
  std::string scenario;
  SweepDimension dimension = SweepDimension::None;
  std::vector<double> values;
  std::vector<double> alphas;
  std::vector<CellResult> cells;  // value-major, then replication, then scheme
  std::vector<ResultRow> rows;    // value-major, then scheme, then alpha

  std::size_t infeasible_cells() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const CellResult& c) { return !c.feasible; }));
  }
};

namespace detail {

inline void finish_cell(CellResult& cell, const Instance& inst, const SweepResult& sweep) {
  cell.feasible = true;
  cell.normalization = sweep.normalization;
  cell.points = sweep.points;
  cell.front_size = sweep.front.points.size();
  for (const auto& p : cell.points) cell.violations += check_solution(inst, p).size();
}

}  // namespace detail

/// Runs every (value, replication) cell, in parallel across cells, and
/// aggregates per alpha. Infeasible cells are recorded and skipped in the means.
inline ResultTable run_scenario(const Scenario& sc, std::size_t threads = 1) {
  sc.validate();
  const std::vector<double> values = sc.cell_values();
  const std::size_t schemes = sc.no_caching_baseline ? 2 : 1;
  const std::size_t tasks = values.size() * sc.replications;

  ResultTable table;
  table.scenario = sc.name;
  table.dimension = sc.dimension;
  table.values = values;
  table.alphas = sc.alphas;
  table.cells.resize(tasks * schemes);

  parallel_for(tasks, threads, [&](std::size_t t) {
    const std::size_t vi = t / sc.replications;
    const std::size_t rep = t % sc.replications;
    const std::uint64_t seed = sc.seed + rep;
    CellResult* out = &table.cells[t * schemes];
    for (std::size_t s = 0; s < schemes; ++s) {
      out[s].value_index = vi;
      out[s].value = values[vi];
      out[s].replication = rep;
      out[s].seed = seed;
      out[s].scheme = s == 0 ? Scheme::Joint : Scheme::NoCaching;
    }
    try {
      const Instance inst = build_instance(apply_sweep(sc.base, sc.dimension, values[vi]), seed);
      const SweepResult joint = sweep_alpha(inst, sc.alphas, sc.solver, 1);
      detail::finish_cell(out[0], inst, joint);
      if (schemes == 2) {
        try {
          detail::finish_cell(out[1], inst, baseline_no_caching(inst, sc.alphas, sc.solver, 1, joint.normalization));
        } catch (const InfeasibleError& e) {
          out[1].binding = e.binding();
          out[1].error = e.what();
        }
      }
    } catch (const InfeasibleError& e) {
      for (std::size_t s = 0; s < schemes; ++s) {
        out[s].binding = e.binding();
        out[s].error = e.what();
      }
    }
  });

  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    for (std::size_t s = 0; s < schemes; ++s) {
      for (std::size_t a = 0; a < sc.alphas.size(); ++a) {
        ResultRow row;
        row.dimension = sc.dimension;
        row.value = values[vi];
        row.scheme = s == 0 ? Scheme::Joint : Scheme::NoCaching;
        row.alpha = sc.alphas[a];
        row.replications = sc.replications;
        std::vector<double> e, d, ns, sc_, eta, cached;
        for (std::size_t rep = 0; rep < sc.replications; ++rep) {
          const CellResult& c = table.cells[(vi * sc.replications + rep) * schemes + s];
          if (!c.feasible) continue;
          const SolutionPoint& p = c.points[a];
          e.push_back(p.energy_j);
          d.push_back(p.delay_s);
          ns.push_back(c.normalization.normalized_sum(p.energy_j, p.delay_s));
          sc_.push_back(p.scalar_objective);
          eta.push_back(p.eta);
          cached.push_back(p.cache.mean_cached());
        }
        row.feasible = e.size();
        row.energy_j = summarize(std::move(e));
        row.delay_s = summarize(std::move(d));
        row.normalized_sum = summarize(std::move(ns));
        row.scalar = summarize(std::move(sc_));
        row.eta = summarize(std::move(eta));
        row.mean_cached_files = summarize(std::move(cached));
        table.rows.push_back(row);
      }
    }
  }
  return table;
}

/// Percentage by which the alpha = 0.5 normalized sum undercuts the two
/// single-objective points, per sweep value (caching-enabled cells only).
struct ReductionRow {
  SweepDimension dimension = SweepDimension::None;
  double value = 0.0;
  std::size_t replications = 0;  // feasible ones
  Stat sum_delay_opt;            // alpha = 0
  Stat sum_balanced;             // alpha = 0.5
  Stat sum_energy_opt;           // alpha = 1
  Stat vs_delay_opt_pct;
  Stat vs_energy_opt_pct;
};

inline std::vector<ReductionRow> summarize_reduction(const ResultTable& table) {
  auto find_alpha = [&](double target) {
    for (std::size_t i = 0; i < table.alphas.size(); ++i) {
      if (std::abs(table.alphas[i] - target) <= 1e-12) return i;
    }
    throw std::invalid_argument("summarize_reduction: alpha grid lacks " + std::to_string(target));
  };
  const std::size_t a0 = find_alpha(0.0), a5 = find_alpha(0.5), a1 = find_alpha(1.0);

  std::vector<ReductionRow> out;
  for (std::size_t vi = 0; vi < table.values.size(); ++vi) {
    ReductionRow r;
    r.dimension = table.dimension;
    r.value = table.values[vi];
    std::vector<double> s0, s5, s1, red0, red1;
    for (const CellResult& c : table.cells) {
      if (c.value_index != vi || c.scheme != Scheme::Joint || !c.feasible) continue;
      auto sum = [&](std::size_t a) { return c.normalization.normalized_sum(c.points[a].energy_j, c.points[a].delay_s); };
      s0.push_back(sum(a0));
      s5.push_back(sum(a5));
      s1.push_back(sum(a1));
      red0.push_back(100.0 * (s0.back() - s5.back()) / s0.back());
      red1.push_back(100.0 * (s1.back() - s5.back()) / s1.back());
    }
    r.replications = s0.size();
    r.sum_delay_opt = summarize(std::move(s0));
    r.sum_balanced = summarize(std::move(s5));
    r.sum_energy_opt = summarize(std::move(s1));
    r.vs_delay_opt_pct = summarize(std::move(red0));
    r.vs_energy_opt_pct = summarize(std::move(red1));
    out.push_back(r);
  }
  return out;
}

}  // namespace iabcache

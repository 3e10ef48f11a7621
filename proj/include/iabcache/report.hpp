#pragma once

// CSV and text output. Numbers are written with 17 significant digits so
// they parse back to the same doubles.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pareto.hpp"
#include "scenario.hpp"

namespace iabcache {

inline constexpr const char* kParetoHeader = "alpha,energy_j,delay_s,scalar,eta,mean_cached_files";
inline constexpr const char* kSweepHeader =
    "sweep_dim,sweep_value,scheme,alpha,replications,feasible,energy_j_mean,energy_j_sd,delay_s_mean,delay_s_sd,"
    "norm_sum_mean,norm_sum_sd,scalar_mean,eta_mean,mean_cached_files_mean,mean_cached_files_sd";
inline constexpr const char* kReductionsHeader =
    "sweep_dim,sweep_value,replications,sum_alpha0_mean,sum_alpha05_mean,sum_alpha1_mean,"
    "reduction_vs_alpha0_pct_mean,reduction_vs_alpha0_pct_sd,reduction_vs_alpha1_pct_mean,reduction_vs_alpha1_pct_sd";

/// %.17g; NaN (no feasible replication) is written as "nan".
inline std::string csv_number(double v) {
  if (v != v) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_pareto_csv(std::ostream& out, const ParetoFront& front) {
  out << kParetoHeader << '\n';
  for (const auto& p : front.points) {
    out << csv_number(p.alpha) << ',' << csv_number(p.energy_j) << ',' << csv_number(p.delay_s) << ','
        << csv_number(p.scalar_objective) << ',' << csv_number(p.eta) << ',' << csv_number(p.cache.mean_cached()) << '\n';
  }
}

inline void write_sweep_csv(std::ostream& out, const ResultTable& table) {
  out << kSweepHeader << '\n';
  for (const auto& r : table.rows) {
    out << to_string(r.dimension) << ',' << csv_number(r.value) << ',' << to_string(r.scheme) << ',' << csv_number(r.alpha)
        << ',' << r.replications << ',' << r.feasible << ',' << csv_number(r.energy_j.mean) << ','
        << csv_number(r.energy_j.sd) << ',' << csv_number(r.delay_s.mean) << ',' << csv_number(r.delay_s.sd) << ','
        << csv_number(r.normalized_sum.mean) << ',' << csv_number(r.normalized_sum.sd) << ','
        << csv_number(r.scalar.mean) << ',' << csv_number(r.eta.mean) << ',' << csv_number(r.mean_cached_files.mean)
        << ',' << csv_number(r.mean_cached_files.sd) << '\n';
  }
}

inline void write_reductions_csv(std::ostream& out, const std::vector<ReductionRow>& rows) {
  out << kReductionsHeader << '\n';
  for (const auto& r : rows) {
    out << to_string(r.dimension) << ',' << csv_number(r.value) << ',' << r.replications << ','
        << csv_number(r.sum_delay_opt.mean) << ',' << csv_number(r.sum_balanced.mean) << ','
        << csv_number(r.sum_energy_opt.mean) << ',' << csv_number(r.vs_delay_opt_pct.mean) << ','
        << csv_number(r.vs_delay_opt_pct.sd) << ',' << csv_number(r.vs_energy_opt_pct.mean) << ','
        << csv_number(r.vs_energy_opt_pct.sd) << '\n';
  }
}

inline std::optional<std::vector<ReductionRow>> try_reductions(const ResultTable& table) {
  try {
    return summarize_reduction(table);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

inline void write_summary(std::ostream& out, const ResultTable& table, const ParetoFront& front) {
  char buf[256];
  out << "scenario: " << table.scenario << '\n';
  out << "sweep: " << to_string(table.dimension) << ", " << table.values.size() << " value(s), " << table.alphas.size()
      << " alpha point(s)\n";
  out << "cells: " << table.cells.size() << ", infeasible: " << table.infeasible_cells() << '\n';
  for (const auto& c : table.cells) {
    if (!c.feasible) {
      out << "  infeasible: value " << csv_number(c.value) << ", seed " << c.seed << ", " << to_string(c.scheme) << ": "
          << c.error << '\n';
    }
  }
  out << "pareto front: " << front.points.size() << " point(s)\n";
  for (const auto& p : front.points) {
    std::snprintf(buf, sizeof buf, "  alpha %.2f  E %.6g J  D %.6g s  eta %.4f  cached %.2f\n", p.alpha, p.energy_j,
                  p.delay_s, p.eta, p.cache.mean_cached());
    out << buf;
  }
  if (auto reds = try_reductions(table)) {
    out << "alpha = 0.5 normalized-sum reduction (mean +- sd over replications):\n";
    for (const auto& r : *reds) {
      std::snprintf(buf, sizeof buf, "  %s = %g: vs alpha=0 %.4g%% +- %.3g, vs alpha=1 %.4g%% +- %.3g (%zu reps)\n",
                    std::string(to_string(r.dimension)).c_str(), r.value, r.vs_delay_opt_pct.mean, r.vs_delay_opt_pct.sd,
                    r.vs_energy_opt_pct.mean, r.vs_energy_opt_pct.sd, r.replications);
      out << buf;
    }
  } else {
    out << "reductions: unavailable, the alpha grid lacks 0, 0.5 or 1\n";
  }
}

namespace report_detail {

inline std::ofstream open(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

inline void close(std::ofstream& out, const std::filesystem::path& p) {
  out.close();
  if (!out) throw std::runtime_error("write failed: " + p.string());
}

}  // namespace report_detail

/// Writes pareto.csv, sweep.csv, reductions.csv and summary.txt into `dir`.
inline void emit_results(const ResultTable& table, const ParetoFront& front, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  auto write = [&](const char* name, auto&& body) {
    const auto path = dir / name;
    auto out = report_detail::open(path);
    body(out);
    report_detail::close(out, path);
  };
  write("pareto.csv", [&](std::ostream& o) { write_pareto_csv(o, front); });
  write("sweep.csv", [&](std::ostream& o) { write_sweep_csv(o, table); });
  write("reductions.csv", [&](std::ostream& o) { write_reductions_csv(o, try_reductions(table).value_or(std::vector<ReductionRow>{})); });
  write("summary.txt", [&](std::ostream& o) { write_summary(o, table, front); });
}

/// Front of the first feasible caching-enabled cell, in alpha order.
inline ParetoFront representative_front(const ResultTable& table) {
  for (const auto& c : table.cells) {
    if (c.feasible && c.scheme == Scheme::Joint) return build_front(c.points);
  }
  return {};
}

}  // namespace iabcache

#pragma once

// Random desk-scale instances and the inner-solver vs brute-force comparison
// run by the `oracle` subcommand.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "instance.hpp"
#include "metrics.hpp"
#include "optimizer.hpp"
#include "parallel.hpp"
#include "params.hpp"
#include "units.hpp"

namespace iabcache {

struct SmallInstanceLimits {
  std::size_t max_sbs = 3;
  std::size_t max_files = 8;
  std::size_t max_capacity = 3;
  std::size_t max_ues = 10;
};

/// A small random instance: UEs mostly clustered around SBSs so that caching
/// matters, random Zipf skew, caching time and fading draw.
inline Instance random_small_instance(std::uint64_t seed, const SmallInstanceLimits& lim = {}) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(uniform01(rng) * static_cast<double>(hi - lo + 1));
  };
  const std::size_t b = pick(1, lim.max_sbs);
  const std::size_t k = pick(2, lim.max_files);
  const std::size_t n = pick(1, lim.max_capacity);
  const std::size_t u = pick(2, lim.max_ues);
  const double r_macro = 150.0, r_small = 40.0;

  auto polar = [&](double r_lo, double r_hi) {
    const double r = r_lo + (r_hi - r_lo) * std::sqrt(uniform01(rng));
    const double a = 2.0 * std::numbers::pi * uniform01(rng);
    return Point{r * std::cos(a), r * std::sin(a)};
  };
  std::vector<Point> sbs;
  for (std::size_t j = 0; j < b; ++j) sbs.push_back(polar(40.0, r_macro - r_small));
  std::vector<Point> ue;
  for (std::size_t i = 0; i < u; ++i) {
    if (uniform01(rng) < 0.7) {
      const Point c = sbs[pick(0, b - 1)];
      const Point off = polar(1.0, 0.9 * r_small);
      ue.push_back({c.x + off.x, c.y + off.y});
    } else {
      ue.push_back(polar(1.0, r_macro));
    }
  }

  InstanceParams p;
  p.r_macro_m = r_macro;
  p.r_small_m = r_small;
  p.fading = uniform01(rng) < 0.5 ? FadingMode::Expected : FadingMode::Sampled;
  p.file_count = k;
  p.cache_capacity = n;
  p.zipf_skew = 0.2 + 1.3 * uniform01(rng);
  p.caching_time_h = std::pow(10.0, -1.0 + 4.0 * uniform01(rng));

  const Topology topo({0.0, 0.0}, std::move(sbs), std::move(ue), r_macro, r_small);
  return make_instance(topo, channel_model(p, seed + 1), power_model(p),
                       PopularityModel(k, p.zipf_skew, p.file_size_bits), n,
                       {p.caching_w_per_bit, p.caching_time_h * kSecondsPerHour});
}

/// Normalizers that put energy and delay of the empty placement at 1.
inline Weights empty_cache_weights(const Instance& inst, double eta, double alpha) {
  const Evaluator ev(inst);
  const Evaluation e = ev.evaluate(eta, inst.empty_cache());
  return {alpha, 1.0 / e.energy(), 1.0 / e.delay()};
}

struct OracleReport {
  std::size_t instances = 0;
  std::size_t comparisons = 0;
  std::size_t mismatches = 0;
  double max_relative_gap = 0.0;
  std::vector<std::string> failures;
};

/// Objective of x under `weights`, or nullopt when (eta, x) is infeasible.
inline std::optional<double> placement_objective(const Instance& inst, double eta, const CacheAllocation& x,
                                                 const Weights& w) {
  const Evaluator ev(inst);
  const auto e = ev.try_evaluate(eta, x);
  if (!e) return std::nullopt;
  return w.scalarize(e->energy(), e->delay());
}

/// Compares inner_cache_solve with brute_force_solve on `count` random
/// instances, every eta in {0.3, 0.5, 0.7} and alpha in {0, .25, .5, .75, 1}.
inline OracleReport run_oracle_suite(std::size_t count, std::uint64_t seed, std::size_t threads = 1,
                                     double rel_tol = 1e-9) {
  static constexpr double kEtas[] = {0.3, 0.5, 0.7};
  static constexpr double kAlphas[] = {0.0, 0.25, 0.5, 0.75, 1.0};
  struct Result {
    std::size_t comparisons = 0;
    double gap = 0.0;
    std::vector<std::string> failures;
  };
  std::vector<Result> results(count);
  parallel_for(count, threads, [&](std::size_t c) {
    const Instance inst = random_small_instance(seed + c);
    Result& r = results[c];
    for (double eta : kEtas) {
      for (double alpha : kAlphas) {
        const Weights w = empty_cache_weights(inst, eta, alpha);
        std::optional<double> fast, slow;
        try {
          fast = placement_objective(inst, eta, inner_cache_solve(eta, w, inst), w);
        } catch (const InfeasibleError&) {
        }
        try {
          slow = placement_objective(inst, eta, brute_force_solve(eta, w, inst), w);
        } catch (const InfeasibleError&) {
        }
        ++r.comparisons;
        const std::string where = "seed " + std::to_string(seed + c) + " eta " + std::to_string(eta) + " alpha " +
                                  std::to_string(alpha);
        if (fast.has_value() != slow.has_value()) {
          r.failures.push_back(where + ": feasibility differs");
          continue;
        }
        if (!fast) continue;
        const double gap = std::abs(*fast - *slow) / std::max(std::abs(*slow), 1e-300);
        r.gap = std::max(r.gap, gap);
        if (gap > rel_tol) r.failures.push_back(where + ": relative gap " + std::to_string(gap));
      }
    }
  });
  OracleReport report;
  report.instances = count;
  for (auto& r : results) {
    report.comparisons += r.comparisons;
    report.max_relative_gap = std::max(report.max_relative_gap, r.gap);
    report.mismatches += r.failures.size();
    for (auto& f : r.failures) report.failures.push_back(std::move(f));
  }
  return report;
}

}  // namespace iabcache

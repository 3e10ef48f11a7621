#pragma once

// Alpha sweeps of the weighted-sum problem and Pareto filtering of the results.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "instance.hpp"
#include "metrics.hpp"
#include "optimizer.hpp"
#include "parallel.hpp"

namespace iabcache {

struct ObjectivePair {
  double energy = 0.0;
  double delay = 0.0;

  friend bool operator==(const ObjectivePair&, const ObjectivePair&) = default;
};

/// a is no worse in both objectives and strictly better in one.
inline bool dominates(const ObjectivePair& a, const ObjectivePair& b) {
  return a.energy <= b.energy && a.delay <= b.delay && (a.energy < b.energy || a.delay < b.delay);
}

/// Indices (ascending) of the points no other point dominates. O(n log n):
/// after sorting by (energy, delay), a point survives iff its delay is below
/// every delay seen at strictly smaller energy and is the minimum of its
/// equal-energy group.
inline std::vector<std::size_t> nondominated_indices(std::span<const ObjectivePair> points) {
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a].energy != points[b].energy) return points[a].energy < points[b].energy;
    return points[a].delay < points[b].delay;
  });
  std::vector<bool> keep(points.size(), false);
  double best_before = std::numeric_limits<double>::infinity();  // min delay at strictly smaller energy
  for (std::size_t g = 0; g < order.size();) {
    std::size_t end = g;
    while (end < order.size() && points[order[end]].energy == points[order[g]].energy) ++end;
    const double group_min = points[order[g]].delay;
    for (std::size_t t = g; t < end; ++t) {
      const double d = points[order[t]].delay;
      keep[order[t]] = d < best_before && d == group_min;
    }
    best_before = std::min(best_before, group_min);
    g = end;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (keep[i]) out.push_back(i);
  }
  return out;
}

inline std::vector<ObjectivePair> nondominated_filter(std::span<const ObjectivePair> points) {
  std::vector<ObjectivePair> out;
  for (std::size_t i : nondominated_indices(points)) out.push_back(points[i]);
  return out;
}

/// Utopia normalization: each objective divided by its single-objective optimum.
struct Normalization {
  double energy_ref = 1.0;  // E* from the alpha = 1 run
  double delay_ref = 1.0;   // D* from the alpha = 0 run

  double delta_e() const { return 1.0 / energy_ref; }
  double delta_d() const { return 1.0 / delay_ref; }
  Weights weights(double alpha) const { return {alpha, delta_e(), delta_d()}; }
  /// delta_e E + delta_d D.
  double normalized_sum(double energy, double delay) const { return energy * delta_e() + delay * delta_d(); }
};

struct ParetoFront {
  std::vector<SolutionPoint> points;  // alpha ascending
};

struct SweepResult {
  Normalization normalization;
  std::vector<SolutionPoint> points;  // one per alpha, grid order
  ParetoFront front;
};

/// `steps` equally spaced weights from 0 to 1 inclusive.
inline std::vector<double> alpha_grid(std::size_t steps) {
  if (steps < 2) throw std::invalid_argument("alpha_grid: need at least 2 steps");
  std::vector<double> grid(steps);
  for (std::size_t i = 0; i < steps; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(steps - 1);
  return grid;
}

/// Energy-only and delay-only optima with unit normalizers, solved concurrently.
inline Normalization compute_normalization(const Evaluator& ev, const SolverConfig& config, std::size_t threads = 1) {
  SolutionPoint extremes[2];
  parallel_for(2, threads, [&](std::size_t k) {
    extremes[k] = solve(Weights{k == 0 ? 1.0 : 0.0, 1.0, 1.0}, ev, config);
  });
  if (!(extremes[0].energy_j > 0.0) || !(extremes[1].delay_s > 0.0)) {
    throw std::runtime_error("normalization: single-objective optimum is not positive");
  }
  return {extremes[0].energy_j, extremes[1].delay_s};
}

/// Filtered front in alpha order; repeated (E, D) outcomes keep the first alpha.
inline ParetoFront build_front(std::span<const SolutionPoint> points) {
  std::vector<ObjectivePair> objectives;
  objectives.reserve(points.size());
  for (const auto& p : points) objectives.push_back({p.energy_j, p.delay_s});
  ParetoFront front;
  std::vector<ObjectivePair> seen;
  for (std::size_t i : nondominated_indices(objectives)) {
    if (std::find(seen.begin(), seen.end(), objectives[i]) != seen.end()) continue;
    seen.push_back(objectives[i]);
    front.points.push_back(points[i]);
  }
  return front;
}

/// Solves every alpha with normalizers frozen from the two extreme pre-runs
/// (or the ones supplied), then filters dominated points.
inline SweepResult sweep_alpha(const Instance& inst, std::span<const double> grid, const SolverConfig& config,
                               std::size_t threads = 1, std::optional<Normalization> normalization = std::nullopt) {
  if (grid.empty()) throw std::invalid_argument("sweep_alpha: empty alpha grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) throw std::invalid_argument("sweep_alpha: alpha outside [0, 1]");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("sweep_alpha: alpha grid must be strictly increasing");
  }
  const Evaluator ev(inst);
  SweepResult result;
  result.normalization = normalization ? *normalization : compute_normalization(ev, config, threads);
  result.points.resize(grid.size());
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    result.points[i] = solve(result.normalization.weights(grid[i]), ev, config);
  });
  result.front = build_front(result.points);
  return result;
}

/// Same sweep with edge caching switched off (x = 0); eta is still optimized.
inline SweepResult baseline_no_caching(const Instance& inst, std::span<const double> grid, SolverConfig config,
                                       std::size_t threads = 1, std::optional<Normalization> normalization = std::nullopt) {
  config.cache_policy = CachePolicy::Disabled;
  return sweep_alpha(inst, grid, config, threads, normalization);
}

}  // namespace iabcache

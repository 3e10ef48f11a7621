#pragma once

// Weighted-sum joint optimization of cache placement x and bandwidth split eta.
//
// For a fixed eta the objective separates over SBSs once the number J of
// loaded backhaul links is fixed: each SBS contributes its caching energy and
// the energy and delay of its own backhaul traffic, and with equal file sizes
// those depend on x only through the cached count and the uncached popularity
// mass. Caching the n most popular files minimizes that mass for every n, so
// the inner problem reduces to choosing one count per SBS. J couples SBSs only
// through the ones that drop to zero backhaul load, which we enumerate.
//
// The outer problem is one-dimensional in eta: a coarse grid followed by a
// golden-section refinement around the best grid cell.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "error.hpp"
#include "instance.hpp"
#include "metrics.hpp"
#include "traffic.hpp"

namespace iabcache {

enum class CachePolicy { Optimized, Disabled };

struct SolverConfig {
  std::size_t eta_grid_points = 41;
  double eta_refine_tol = 1e-4;
  std::size_t oracle_limit = 24;  // largest B * K the brute-force oracle accepts
  CachePolicy cache_policy = CachePolicy::Optimized;
  std::optional<double> fixed_eta;  // bypasses the outer search

  void validate() const {
    if (eta_grid_points < 3) throw std::invalid_argument("solver: eta_grid_points must be >= 3");
    if (!(eta_refine_tol > 0)) throw std::invalid_argument("solver: eta_refine_tol must be > 0");
    if (fixed_eta) check_eta(*fixed_eta);
  }

  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct EtaInterval {
  double lo = 0.0;
  double hi = 1.0;
};

inline constexpr double kInfeasibleObjective = std::numeric_limits<double>::infinity();

/// Range of eta compatible with the access-rate floor (rates grow linearly in
/// eta, so the lower end is closed-form) and with the backhaul-rate floor
/// under `cache_hint` (default: every SBS caches its N most popular files).
inline EtaInterval feasible_eta_interval(const Instance& inst, const Evaluator& ev,
                                         const CacheAllocation* cache_hint = nullptr) {
  const double w = inst.channel.bandwidth_hz;
  EtaInterval iv;
  for (std::size_t i = 0; i < inst.topology.ue_count(); ++i) {
    const double gamma = inst.qos.gamma(i);
    if (gamma == 0.0) continue;
    const double full_rate = ev.access_rate(i, 1.0);
    const double need = gamma / full_rate;
    if (need > 1.0) {
      throw InfeasibleError(Constraint::AccessRate,
                            "UE " + std::to_string(i) + " needs " + std::to_string(gamma) +
                                " bit/s but reaches " + std::to_string(full_rate) + " bit/s at eta = 1");
    }
    iv.lo = std::max(iv.lo, need);
  }

  const CacheAllocation hint = cache_hint ? *cache_hint
                                          : CacheAllocation::full(inst.sbs_count(), inst.file_count(), inst.cache_capacity);
  const std::size_t links = ev.backhaul_links(hint);
  for (BsIndex j = 1; j <= inst.sbs_count(); ++j) {
    const double tau = inst.qos.tau(j);
    const double load = ev.uncached_load(j, hint);
    if (tau == 0.0 || load == 0.0) continue;
    // (1 - eta) W / (J load) * se >= tau
    const double limit = 1.0 - tau * static_cast<double>(links) * load / (w * ev.backhaul_spectral_efficiency(j));
    iv.hi = std::min(iv.hi, limit);
  }
  if (iv.hi < iv.lo) {
    throw InfeasibleError(Constraint::BackhaulRate,
                          "no eta satisfies both rate floors (access needs eta >= " + std::to_string(iv.lo) +
                              ", backhaul allows eta <= " + std::to_string(iv.hi) + ")");
  }
  return iv;
}

inline EtaInterval feasible_eta_interval(const Instance& inst, const CacheAllocation* cache_hint = nullptr) {
  return feasible_eta_interval(inst, Evaluator(inst), cache_hint);
}

/// Exact cache placement for a fixed eta, or nullopt when some SBS cannot
/// meet its backhaul-rate floor with any count up to N.
inline std::optional<CacheAllocation> try_inner_cache_solve(double eta, const Weights& weights, const Evaluator& ev,
                                                            CachePolicy policy = CachePolicy::Optimized) {
  const Instance& inst = ev.instance();
  const std::size_t sbs_count = inst.sbs_count();
  const std::size_t k_files = inst.file_count();
  const std::size_t max_n = policy == CachePolicy::Disabled ? 0 : std::min(inst.cache_capacity, k_files);
  const double q = inst.file_size_bits();
  const double bandwidth = (1.0 - eta) * inst.channel.bandwidth_hz;
  const double file_cost = weights.alpha * weights.delta_e * inst.caching.per_file(q);
  const double energy_w = weights.alpha * weights.delta_e;
  const double delay_w = (1.0 - weights.alpha) * weights.delta_d;

  // Per SBS: smallest count with zero backhaul load, if one fits.
  std::vector<std::size_t> counts(sbs_count, 0);
  std::vector<BsIndex> loaded;  // SBSs with traffic when nothing is cached
  std::vector<std::optional<std::size_t>> zero_load_n(sbs_count + 1);
  for (BsIndex j = 1; j <= sbs_count; ++j) {
    const auto users = static_cast<double>(ev.users_at(j));
    if (users == 0.0) continue;
    loaded.push_back(j);
    for (std::size_t n = 1; n <= max_n; ++n) {
      if (users * inst.popularity.tail_mass(n) == 0.0) {
        zero_load_n[j] = n;
        break;
      }
    }
  }

  struct Choice {
    double cost = kInfeasibleObjective;
    std::size_t n = 0;
  };
  // Best count with nonzero backhaul load when J links share the backhaul band.
  auto best_loaded = [&](BsIndex j, std::size_t links) {
    Choice best;
    if (!(bandwidth > 0.0)) return best;
    const auto users = static_cast<double>(ev.users_at(j));
    const double se = ev.backhaul_spectral_efficiency(j);
    const double tau = inst.qos.tau(j);
    const auto jl = static_cast<double>(links);
    for (std::size_t n = 0; n <= max_n; ++n) {
      const double load = users * inst.popularity.tail_mass(n);
      if (load == 0.0) break;
      if (bandwidth / (jl * load) * se < tau) continue;
      const double seconds = q * jl * load * load / (bandwidth * se);
      const double cost = file_cost * static_cast<double>(n) + energy_w * ev.backhaul_power(j) * seconds + delay_w * seconds;
      if (cost < best.cost) best = {cost, n};
    }
    return best;
  };

  const std::size_t max_full = std::count_if(loaded.begin(), loaded.end(), [&](BsIndex j) { return zero_load_n[j].has_value(); });
  double best_total = kInfeasibleObjective;
  std::optional<std::vector<std::size_t>> best_counts;

  for (std::size_t k = 0; k <= max_full; ++k) {
    const std::size_t links = inst.split == BackhaulSplit::AllLinks ? sbs_count : loaded.size() - k;
    std::vector<Choice> partial(loaded.size());
    std::vector<std::size_t> forced;  // no loaded count is feasible
    std::vector<std::size_t> optional_full;
    double total = 0.0;
    bool feasible = true;
    for (std::size_t s = 0; s < loaded.size(); ++s) {
      const BsIndex j = loaded[s];
      partial[s] = links == 0 ? Choice{} : best_loaded(j, links);
      if (partial[s].cost == kInfeasibleObjective) {
        if (!zero_load_n[j]) {
          feasible = false;
          break;
        }
        forced.push_back(s);
      } else {
        total += partial[s].cost;
        if (zero_load_n[j]) optional_full.push_back(s);
      }
    }
    if (!feasible || forced.size() > k || forced.size() + optional_full.size() < k) continue;

    auto full_cost = [&](std::size_t s) { return file_cost * static_cast<double>(*zero_load_n[loaded[s]]); };
    for (std::size_t s : forced) total += full_cost(s);
    // Switch the cheapest k - |forced| remaining SBSs to full caching.
    std::stable_sort(optional_full.begin(), optional_full.end(), [&](std::size_t a, std::size_t b) {
      return full_cost(a) - partial[a].cost < full_cost(b) - partial[b].cost;
    });
    std::vector<bool> full(loaded.size(), false);
    for (std::size_t s : forced) full[s] = true;
    for (std::size_t t = 0; t < k - forced.size(); ++t) {
      const std::size_t s = optional_full[t];
      total += full_cost(s) - partial[s].cost;
      full[s] = true;
    }
    if (total < best_total) {
      best_total = total;
      std::vector<std::size_t> c(sbs_count, 0);
      for (std::size_t s = 0; s < loaded.size(); ++s) {
        c[loaded[s] - 1] = full[s] ? *zero_load_n[loaded[s]] : partial[s].n;
      }
      best_counts = std::move(c);
    }
  }
  if (!best_counts) {
    // No loaded SBS at all: nothing to decide.
    if (loaded.empty()) return CacheAllocation::top_n(k_files, inst.cache_capacity, counts);
    return std::nullopt;
  }
  return CacheAllocation::top_n(k_files, inst.cache_capacity, *best_counts);
}

inline CacheAllocation inner_cache_solve(double eta, const Weights& weights, const Instance& inst,
                                         CachePolicy policy = CachePolicy::Optimized) {
  check_eta(eta);
  const Evaluator ev(inst);
  if (auto x = try_inner_cache_solve(eta, weights, ev, policy)) return *x;
  throw InfeasibleError(Constraint::BackhaulRate,
                        "no cache count up to N meets the backhaul-rate floor at eta = " + std::to_string(eta));
}

/// Exhaustive search over every placement with at most N files per SBS.
/// Ties go to the lexicographically smallest x.
inline CacheAllocation brute_force_solve(double eta, const Weights& weights, const Instance& inst,
                                         const SolverConfig& config = {}) {
  check_eta(eta);
  const std::size_t b = inst.sbs_count();
  const std::size_t k_files = inst.file_count();
  if (b * k_files > config.oracle_limit || k_files > 20) {
    throw std::length_error("brute_force_solve: instance too large (B*K = " + std::to_string(b * k_files) + ")");
  }
  const Evaluator ev(inst);
  for (std::size_t i = 0; i < inst.topology.ue_count(); ++i) {
    if (ev.access_rate(i, eta) < inst.qos.gamma(i)) {
      throw InfeasibleError(Constraint::AccessRate, "UE " + std::to_string(i) + " below its rate floor");
    }
  }

  const std::size_t max_n = config.cache_policy == CachePolicy::Disabled ? 0 : inst.cache_capacity;
  // Masks in increasing order; file 0 is the most significant bit, so this is
  // increasing lexicographic order of the row.
  std::vector<std::uint32_t> masks;
  for (std::uint32_t mask = 0; mask < (1u << k_files); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) <= max_n) masks.push_back(mask);
  }

  CacheAllocation x = inst.empty_cache();
  auto write_row = [&](BsIndex j, std::uint32_t mask) {
    auto row = x.row(j);
    for (std::size_t m = 0; m < k_files; ++m) row[m] = (mask >> (k_files - 1 - m)) & 1u;
  };

  std::vector<std::size_t> digit(b, 0);
  for (BsIndex j = 1; j <= b; ++j) write_row(j, masks[0]);
  double best = kInfeasibleObjective;
  std::optional<CacheAllocation> best_x;
  while (true) {
    if (const auto e = ev.try_evaluate(eta, x)) {
      const auto rates = ev.backhaul_rates(eta, x);
      bool ok = true;
      for (BsIndex j = 1; j <= b && ok; ++j) ok = rates[j] >= inst.qos.tau(j);
      const double obj = weights.scalarize(e->energy(), e->delay());
      if (ok && (!best_x || obj < best - 1e-12 * std::abs(best))) {
        best = obj;
        best_x = x;
      }
    }
    // Odometer with SBS 1 as the most significant digit.
    bool done = true;
    for (std::size_t pos = b; pos-- > 0;) {
      if (++digit[pos] < masks.size()) {
        write_row(pos + 1, masks[digit[pos]]);
        done = false;
        break;
      }
      digit[pos] = 0;
      write_row(pos + 1, masks[0]);
    }
    if (done) break;
  }
  if (!best_x) {
    throw InfeasibleError(Constraint::BackhaulRate, "no placement is feasible at eta = " + std::to_string(eta));
  }
  return *best_x;
}

namespace detail {

struct Candidate {
  double objective = kInfeasibleObjective;
  double eta = 0.0;
  std::optional<CacheAllocation> cache;

  bool better_than(const Candidate& other) const {
    return objective < other.objective || (objective == other.objective && eta < other.eta);
  }
};

inline Candidate evaluate_eta(double eta, const Weights& weights, const Evaluator& ev, CachePolicy policy) {
  Candidate c;
  c.eta = eta;
  auto x = try_inner_cache_solve(eta, weights, ev, policy);
  if (!x) return c;
  const auto e = ev.try_evaluate(eta, *x);
  if (!e) return c;
  c.objective = weights.scalarize(e->energy(), e->delay());
  c.cache = std::move(x);
  return c;
}

}  // namespace detail

/// Minimizes alpha delta_e E + (1 - alpha) delta_d D over (eta, x).
inline SolutionPoint solve(const Weights& weights, const Evaluator& ev, const SolverConfig& config) {
  config.validate();
  if (!(weights.alpha >= 0.0 && weights.alpha <= 1.0)) throw std::invalid_argument("solve: alpha outside [0, 1]");
  if (!(weights.delta_e > 0.0) || !(weights.delta_d > 0.0)) throw std::invalid_argument("solve: normalizers must be positive");
  const Instance& inst = ev.instance();

  const CacheAllocation hint = config.cache_policy == CachePolicy::Disabled
                                   ? inst.empty_cache()
                                   : CacheAllocation::full(inst.sbs_count(), inst.file_count(), inst.cache_capacity);
  const EtaInterval iv = feasible_eta_interval(inst, ev, &hint);

  if (config.fixed_eta) {
    const double eta = *config.fixed_eta;
    if (eta < iv.lo) throw InfeasibleError(Constraint::AccessRate, "fixed eta below the access-rate floor");
    if (eta > iv.hi) throw InfeasibleError(Constraint::BackhaulRate, "fixed eta above the backhaul-rate limit");
    detail::Candidate c = detail::evaluate_eta(eta, weights, ev, config.cache_policy);
    if (!c.cache) {
      throw InfeasibleError(eta <= 0.0 ? Constraint::AccessRate : Constraint::BackhaulRate,
                            "fixed eta = " + std::to_string(eta) + " has no feasible placement");
    }
    return ev.point(eta, std::move(*c.cache), weights);
  }

  const std::size_t g = iv.hi > iv.lo ? config.eta_grid_points : 1;
  std::vector<double> grid(g);
  for (std::size_t i = 0; i < g; ++i) {
    grid[i] = i + 1 == g && g > 1 ? iv.hi : iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) / static_cast<double>(g - 1);
  }

  detail::Candidate best;
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < g; ++i) {
    detail::Candidate c = detail::evaluate_eta(grid[i], weights, ev, config.cache_policy);
    if (c.better_than(best)) {
      best = std::move(c);
      best_index = i;
    }
  }
  if (!best.cache) {
    throw InfeasibleError(Constraint::BackhaulRate, "no feasible eta in [" + std::to_string(iv.lo) + ", " +
                                                        std::to_string(iv.hi) + "]");
  }

  if (g > 1) {
    double a = grid[best_index == 0 ? 0 : best_index - 1];
    double b = grid[std::min(best_index + 1, g - 1)];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    auto probe = [&](double eta) {
      detail::Candidate c = detail::evaluate_eta(eta, weights, ev, config.cache_policy);
      const double obj = c.objective;
      if (c.cache && c.better_than(best)) best = std::move(c);
      return obj;
    };
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = probe(c);
    double fd = probe(d);
    while (b - a > config.eta_refine_tol) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = probe(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = probe(d);
      }
    }
  }
  return ev.point(best.eta, std::move(*best.cache), weights);
}

inline SolutionPoint solve(const Weights& weights, const Instance& inst, const SolverConfig& config = {}) {
  const Evaluator ev(inst);
  return solve(weights, ev, config);
}

}  // namespace iabcache

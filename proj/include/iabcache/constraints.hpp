#pragma once

// Post-hoc feasibility check of a solution, recomputed from the literal
// rate / energy / delay formulas rather than the optimizer's cached terms.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "instance.hpp"
#include "metrics.hpp"

namespace iabcache {

struct Violation {
  std::optional<Constraint> constraint;  // nullopt: reported E or D disagrees with the re-evaluation
  std::string detail;
};

inline std::vector<Violation> check_solution(const Instance& inst, const SolutionPoint& sp, double rel_tol = 1e-9) {
  std::vector<Violation> out;
  const CacheAllocation& x = sp.cache;
  if (x.sbs_count() != inst.sbs_count() || x.file_count() != inst.file_count()) {
    out.push_back({Constraint::CacheBinary, "placement has the wrong shape"});
    return out;
  }
  for (auto v : x.data()) {
    if (v > 1) {
      out.push_back({Constraint::CacheBinary, "entry outside {0, 1}"});
      break;
    }
  }
  for (BsIndex j = 1; j <= inst.sbs_count(); ++j) {
    if (x.cached_count(j) > inst.cache_capacity) {
      out.push_back({Constraint::CacheCapacity, "SBS " + std::to_string(j) + " caches " +
                                                    std::to_string(x.cached_count(j)) + " files"});
    }
  }
  if (!(sp.eta >= 0.0 && sp.eta <= 1.0)) {
    out.push_back({Constraint::BandwidthFraction, "eta = " + std::to_string(sp.eta)});
    return out;
  }
  for (std::size_t i = 0; i < inst.topology.ue_count(); ++i) {
    const double r = access_rate(i, inst.topology.serving_bs(i), sp.eta, inst);
    const double gamma = inst.qos.gamma(i);
    if (r == 0.0 || r < gamma * (1.0 - rel_tol)) {
      out.push_back({Constraint::AccessRate, "UE " + std::to_string(i) + " rate " + std::to_string(r)});
    }
  }
  for (BsIndex j = 1; j <= inst.sbs_count(); ++j) {
    const double r = backhaul_rate(j, sp.eta, x, inst);
    const double load = uncached_load(j, inst.topology, inst.popularity, x);
    if ((load > 0.0 && r == 0.0) || r < inst.qos.tau(j) * (1.0 - rel_tol)) {
      out.push_back({Constraint::BackhaulRate, "SBS " + std::to_string(j) + " rate " + std::to_string(r)});
    }
  }
  if (!out.empty()) return out;

  // Reported objectives must match an independent re-evaluation.
  const double e = caching_energy(x, inst.popularity, inst.caching) + transmission_energy(sp.eta, x, inst);
  const double d = total_delay(sp.eta, x, inst);
  auto close = [&](double a, double b) { return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b)); };
  if (!close(e, sp.energy_j)) out.push_back({std::nullopt, "energy mismatch: reported " +
                                                                          std::to_string(sp.energy_j) + ", recomputed " + std::to_string(e)});
  if (!close(d, sp.delay_s)) out.push_back({std::nullopt, "delay mismatch: reported " +
                                                                         std::to_string(sp.delay_s) + ", recomputed " + std::to_string(d)});
  return out;
}

}  // namespace iabcache

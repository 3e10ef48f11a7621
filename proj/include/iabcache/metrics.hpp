#pragma once

// Link rates, energy E = CE + TE and aggregated delay D for a given bandwidth
// split eta and cache placement x.
//
// The free functions below evaluate every term literally from the channel and
// traffic models. Evaluator precomputes the x- and eta-independent quantities
// (SINRs, SNRs, powers, loads) once per instance for the optimizer's inner loops.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "channel.hpp"
#include "error.hpp"
#include "instance.hpp"
#include "traffic.hpp"

namespace iabcache {

inline constexpr double kUnboundedRate = std::numeric_limits<double>::infinity();

inline void check_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InfeasibleError(Constraint::BandwidthFraction, "eta = " + std::to_string(eta) + " outside [0, 1]");
  }
}

/// J: SBSs sharing the backhaul band.
inline std::size_t backhaul_link_count(const CacheAllocation& cache, const Instance& inst) {
  if (inst.split == BackhaulSplit::AllLinks) return inst.sbs_count();
  std::size_t links = 0;
  for (BsIndex j = 1; j <= inst.sbs_count(); ++j) {
    links += uncached_load(j, inst.topology, inst.popularity, cache) > 0.0;
  }
  return links;
}

/// r^a_ij = eta W / load_j * log2(1 + SINR_ij). Zero when eta = 0.
inline double access_rate(std::size_t ue, BsIndex bs, double eta, const Instance& inst) {
  check_eta(eta);
  const double load = access_load(bs, inst.topology, inst.popularity);
  if (eta == 0.0 || load == 0.0) return 0.0;
  const double sinr = access_sinr(ue, bs, inst.topology, inst.channel, inst.power, inst.gains);
  return eta * inst.channel.bandwidth_hz / load * std::log2(1.0 + sinr);
}

/// r^b_j0 = ((1 - eta) W / J) / uncached_load_j * log2(1 + SNR_j0); +inf when
/// the SBS has nothing to fetch.
inline double backhaul_rate(BsIndex sbs, double eta, const CacheAllocation& cache, const Instance& inst) {
  check_eta(eta);
  const double load = uncached_load(sbs, inst.topology, inst.popularity, cache);
  if (load == 0.0) return kUnboundedRate;
  const auto links = static_cast<double>(backhaul_link_count(cache, inst));
  const double snr = backhaul_snr(sbs, inst.topology, inst.channel, inst.power, inst.gains);
  return (1.0 - eta) * inst.channel.bandwidth_hz / links / load * std::log2(1.0 + snr);
}

/// CE = sum_j sum_m w^ca x_jm T Q.
inline double caching_energy(const CacheAllocation& cache, const PopularityModel& pop,
                             const CachingEnergyParams& params) {
  double ce = 0.0;
  for (BsIndex j = 1; j <= cache.sbs_count(); ++j) {
    for (std::size_t m = 0; m < cache.file_count(); ++m) {
      if (cache.cached(j, m)) ce += params.w_per_bit * params.caching_time_s * pop.file_size_bits();
    }
  }
  return ce;
}

/// TE = sum over UEs of P_ij Q / r^a_ij (unit request mass per UE)
///    + sum over SBSs of P_j0 Q / r^b_j0 * uncached_load_j.
inline double transmission_energy(double eta, const CacheAllocation& cache, const Instance& inst) {
  const double q = inst.file_size_bits();
  double te = 0.0;
  for (std::size_t i = 0; i < inst.topology.ue_count(); ++i) {
    const BsIndex j = inst.topology.serving_bs(i);
    const double r = access_rate(i, j, eta, inst);
    if (r == 0.0) throw InfeasibleError(Constraint::AccessRate, "UE " + std::to_string(i) + " has zero access rate");
    double mass = 0.0;
    for (double p : inst.popularity.probabilities()) mass += p;
    te += access_tx_power(i, j, inst.topology, inst.channel, inst.power) * (q / r) * mass;
  }
  for (BsIndex j = 1; j <= inst.sbs_count(); ++j) {
    const double load = uncached_load(j, inst.topology, inst.popularity, cache);
    if (load == 0.0) continue;
    const double r = backhaul_rate(j, eta, cache, inst);
    if (r == 0.0) throw InfeasibleError(Constraint::BackhaulRate, "SBS " + std::to_string(j) + " has zero backhaul rate");
    te += backhaul_tx_power(j, inst.topology, inst.channel, inst.power) * (q / r) * load;
  }
  return te;
}

/// TE with the rates substituted in: the access term carries the BS load
/// in the numerator and the backhaul term the squared uncached load.
inline double transmission_energy_expanded(double eta, const CacheAllocation& cache, const Instance& inst) {
  check_eta(eta);
  const double q = inst.file_size_bits();
  const double w = inst.channel.bandwidth_hz;
  double te = 0.0;
  for (BsIndex j = 0; j < inst.topology.bs_count(); ++j) {
    const double load = access_load(j, inst.topology, inst.popularity);
    for (std::size_t i = 0; i < inst.topology.ue_count(); ++i) {
      if (!inst.topology.associated(i, j)) continue;
      if (eta == 0.0) throw InfeasibleError(Constraint::AccessRate, "eta = 0 with associated UEs");
      const double sinr = access_sinr(i, j, inst.topology, inst.channel, inst.power, inst.gains);
      te += access_tx_power(i, j, inst.topology, inst.channel, inst.power) * q * load /
            (eta * w * std::log2(1.0 + sinr));
    }
  }
  const auto links = static_cast<double>(backhaul_link_count(cache, inst));
  for (BsIndex j = 1; j <= inst.sbs_count(); ++j) {
    const double uload = uncached_load(j, inst.topology, inst.popularity, cache);
    if (uload == 0.0) continue;
    if (eta == 1.0) throw InfeasibleError(Constraint::BackhaulRate, "eta = 1 with backhaul traffic");
    const double snr = backhaul_snr(j, inst.topology, inst.channel, inst.power, inst.gains);
    te += backhaul_tx_power(j, inst.topology, inst.channel, inst.power) * q * links * uload * uload /
          ((1.0 - eta) * w * std::log2(1.0 + snr));
  }
  return te;
}

/// D = sum_j sum_i sum_m p_m a_ij (Q / r^a_ij + (1 - x_jm) Q / r^b_j0).
/// MBS-served requests have no backhaul term: the MBS is fiber-fed.
inline double total_delay(double eta, const CacheAllocation& cache, const Instance& inst) {
  const double q = inst.file_size_bits();
  const auto& p = inst.popularity.probabilities();
  double d = 0.0;
  for (std::size_t i = 0; i < inst.topology.ue_count(); ++i) {
    const BsIndex j = inst.topology.serving_bs(i);
    const double ra = access_rate(i, j, eta, inst);
    if (ra == 0.0) throw InfeasibleError(Constraint::AccessRate, "UE " + std::to_string(i) + " has zero access rate");
    const double rb = j == kMacro ? kUnboundedRate : backhaul_rate(j, eta, cache, inst);
    if (rb == 0.0) throw InfeasibleError(Constraint::BackhaulRate, "SBS " + std::to_string(j) + " has zero backhaul rate");
    for (std::size_t m = 0; m < p.size(); ++m) {
      double per_file = q / ra;
      if (j != kMacro && !cache.cached(j, m)) per_file += q / rb;
      d += p[m] * per_file;
    }
  }
  return d;
}

/// alpha * delta_e * E + (1 - alpha) * delta_d * D.
inline double scalarize(double energy, double delay, double alpha, double delta_e, double delta_d) {
  return alpha * delta_e * energy + (1.0 - alpha) * delta_d * delay;
}

/// Preference weight and the normalization factors of the two objectives.
struct Weights {
  double alpha = 0.5;
  double delta_e = 1.0;  // 1/J
  double delta_d = 1.0;  // 1/s

  double scalarize(double energy, double delay) const {
    return iabcache::scalarize(energy, delay, alpha, delta_e, delta_d);
  }
};

struct Evaluation {
  double caching_energy = 0.0;
  double access_energy = 0.0;
  double backhaul_energy = 0.0;
  double access_delay = 0.0;
  double backhaul_delay = 0.0;

  double transmission_energy() const { return access_energy + backhaul_energy; }
  double energy() const { return caching_energy + access_energy + backhaul_energy; }
  double delay() const { return access_delay + backhaul_delay; }
};

struct SolutionPoint {
  double eta = 0.0;
  CacheAllocation cache;
  double energy_j = 0.0;
  double delay_s = 0.0;
  double alpha = 0.0;
  double scalar_objective = 0.0;
};

/// Cached per-instance link quantities. Holds a reference to the instance,
/// which must outlive it.
class Evaluator {
 public:
  explicit Evaluator(const Instance& inst) : inst_(&inst) {
    const Topology& topo = inst.topology;
    const std::size_t bs = topo.bs_count();
    users_at_.assign(bs, 0);
    for (std::size_t i = 0; i < topo.ue_count(); ++i) ++users_at_[topo.serving_bs(i)];

    access_se_.resize(topo.ue_count());
    access_power_.resize(topo.ue_count());
    for (std::size_t i = 0; i < topo.ue_count(); ++i) {
      const BsIndex j = topo.serving_bs(i);
      access_se_[i] = std::log2(1.0 + access_sinr(i, j, topo, inst.channel, inst.power, inst.gains));
      access_power_[i] = access_tx_power(i, j, topo, inst.channel, inst.power);
    }
    backhaul_se_.assign(bs, 0.0);
    backhaul_power_.assign(bs, 0.0);
    for (BsIndex j = 1; j < bs; ++j) {
      backhaul_se_[j] = std::log2(1.0 + backhaul_snr(j, topo, inst.channel, inst.power, inst.gains));
      backhaul_power_[j] = backhaul_tx_power(j, topo, inst.channel, inst.power);
    }
  }

  const Instance& instance() const noexcept { return *inst_; }

  std::size_t users_at(BsIndex j) const { return users_at_.at(j); }
  /// log2(1 + SINR) of UE i toward its serving BS.
  double access_spectral_efficiency(std::size_t ue) const { return access_se_.at(ue); }
  double access_power(std::size_t ue) const { return access_power_.at(ue); }
  /// log2(1 + SNR) of the backhaul link of SBS j.
  double backhaul_spectral_efficiency(BsIndex sbs) const { return backhaul_se_.at(sbs); }
  double backhaul_power(BsIndex sbs) const { return backhaul_power_.at(sbs); }

  double uncached_load(BsIndex sbs, const CacheAllocation& cache) const {
    const std::size_t n = users_at_[sbs];
    return n == 0 ? 0.0 : static_cast<double>(n) * inst_->popularity.uncached_mass(cache.row(sbs));
  }

  std::size_t backhaul_links(const CacheAllocation& cache) const {
    if (inst_->split == BackhaulSplit::AllLinks) return inst_->sbs_count();
    std::size_t links = 0;
    for (BsIndex j = 1; j <= inst_->sbs_count(); ++j) links += uncached_load(j, cache) > 0.0;
    return links;
  }

  double access_rate(std::size_t ue, double eta) const {
    const std::size_t n = users_at_[inst_->topology.serving_bs(ue)];
    return eta * inst_->channel.bandwidth_hz / static_cast<double>(n) * access_se_[ue];
  }

  double backhaul_rate(BsIndex sbs, double eta, double uncached, std::size_t links) const {
    if (uncached == 0.0) return kUnboundedRate;
    return (1.0 - eta) * inst_->channel.bandwidth_hz / static_cast<double>(links) / uncached *
           backhaul_se_[sbs];
  }

  /// Backhaul rate of every SBS (index 0 unused) for placement x.
  std::vector<double> backhaul_rates(double eta, const CacheAllocation& cache) const {
    std::vector<double> rates(inst_->topology.bs_count(), kUnboundedRate);
    const std::size_t links = backhaul_links(cache);
    for (BsIndex j = 1; j <= inst_->sbs_count(); ++j) rates[j] = backhaul_rate(j, eta, uncached_load(j, cache), links);
    return rates;
  }

  /// E and D split into their terms, or nullopt when some loaded link has
  /// zero rate (eta = 0 with UEs, or eta = 1 with backhaul traffic).
  std::optional<Evaluation> try_evaluate(double eta, const CacheAllocation& cache) const {
    const Instance& inst = *inst_;
    const double q = inst.file_size_bits();
    const double w = inst.channel.bandwidth_hz;
    Evaluation ev;
    ev.caching_energy = static_cast<double>(cache.total_cached()) * inst.caching.per_file(q);

    if (eta <= 0.0) return std::nullopt;  // every instance has at least one UE
    for (std::size_t i = 0; i < access_se_.size(); ++i) {
      const double n = static_cast<double>(users_at_[inst.topology.serving_bs(i)]);
      const double seconds = q * n / (eta * w * access_se_[i]);  // Q / r^a
      ev.access_delay += seconds;
      ev.access_energy += access_power_[i] * seconds;
    }

    const std::size_t links = backhaul_links(cache);
    for (BsIndex j = 1; j <= inst.sbs_count(); ++j) {
      const double load = uncached_load(j, cache);
      if (load == 0.0) continue;
      if (eta >= 1.0) return std::nullopt;
      // load * Q / r^b = Q J load^2 / ((1 - eta) W log2(1 + SNR))
      const double seconds = q * static_cast<double>(links) * load * load / ((1.0 - eta) * w * backhaul_se_[j]);
      ev.backhaul_delay += seconds;
      ev.backhaul_energy += backhaul_power_[j] * seconds;
    }
    return ev;
  }

  Evaluation evaluate(double eta, const CacheAllocation& cache) const {
    check_eta(eta);
    if (auto ev = try_evaluate(eta, cache)) return *ev;
    if (eta <= 0.0) throw InfeasibleError(Constraint::AccessRate, "eta = 0 leaves associated UEs with zero access rate");
    throw InfeasibleError(Constraint::BackhaulRate, "eta = 1 leaves uncached requests with zero backhaul rate");
  }

  SolutionPoint point(double eta, CacheAllocation cache, const Weights& weights) const {
    const Evaluation ev = evaluate(eta, cache);
    SolutionPoint sp;
    sp.eta = eta;
    sp.cache = std::move(cache);
    sp.energy_j = ev.energy();
    sp.delay_s = ev.delay();
    sp.alpha = weights.alpha;
    sp.scalar_objective = weights.scalarize(sp.energy_j, sp.delay_s);
    return sp;
  }

 private:
  const Instance* inst_;
  std::vector<std::size_t> users_at_;
  std::vector<double> access_se_;
  std::vector<double> access_power_;
  std::vector<double> backhaul_se_;
  std::vector<double> backhaul_power_;
};

}  // namespace iabcache

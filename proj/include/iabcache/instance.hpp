#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "channel.hpp"
#include "topology.hpp"
#include "traffic.hpp"

namespace iabcache {

/// How the backhaul share (1 - eta) W is divided: equally among SBSs that
/// carry backhaul traffic, or equally among all B SBSs.
enum class BackhaulSplit { ActiveLinks, AllLinks };

struct CachingEnergyParams {
  double w_per_bit = 6.25e-12;   // W/bit
  double caching_time_s = 36000;  // T

  /// Energy to hold one file of `bits` bits for T seconds.
  double per_file(double bits) const { return w_per_bit * caching_time_s * bits; }
};

/// Minimum access rate per UE and minimum backhaul rate per SBS, in bit/s.
/// An empty vector means zero for every entry; a single entry applies to all.
struct QosSpec {
  std::vector<double> gamma_bps;
  std::vector<double> tau_bps;

  double gamma(std::size_t ue) const { return pick(gamma_bps, ue); }
  double tau(BsIndex sbs) const { return pick(tau_bps, sbs - 1); }

  void validate() const {
    for (double v : gamma_bps) if (!(v >= 0)) throw std::invalid_argument("qos: gamma must be >= 0");
    for (double v : tau_bps) if (!(v >= 0)) throw std::invalid_argument("qos: tau must be >= 0");
  }

 private:
  static double pick(const std::vector<double>& v, std::size_t k) {
    if (v.empty()) return 0.0;
    if (v.size() == 1) return v.front();
    return v.at(k);
  }
};

/// Everything a single optimization instance needs. Immutable once built.
struct Instance {
  Topology topology;
  ChannelModel channel;
  PowerModel power;
  PopularityModel popularity;
  std::size_t cache_capacity = 0;
  CachingEnergyParams caching;
  QosSpec qos;
  BackhaulSplit split = BackhaulSplit::ActiveLinks;
  LinkGains gains;

  std::size_t sbs_count() const { return topology.sbs_count(); }
  std::size_t file_count() const { return popularity.file_count(); }
  double file_size_bits() const { return popularity.file_size_bits(); }

  CacheAllocation empty_cache() const { return CacheAllocation(sbs_count(), file_count(), cache_capacity); }
};

inline Instance make_instance(Topology topology, ChannelModel channel, PowerModel power,
                              PopularityModel popularity, std::size_t cache_capacity,
                              CachingEnergyParams caching = {}, QosSpec qos = {},
                              BackhaulSplit split = BackhaulSplit::ActiveLinks) {
  channel.validate();
  power.validate();
  qos.validate();
  LinkGains gains = draw_link_gains(topology, channel);
  return Instance{std::move(topology), channel,        power, std::move(popularity),
                  cache_capacity,      caching,        std::move(qos), split,
                  std::move(gains)};
}

}  // namespace iabcache

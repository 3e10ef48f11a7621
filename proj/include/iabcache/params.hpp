#pragma once

// User-facing instance parameters in the units people quote them in (dBm,
// dBi, hours). build_instance() converts to linear SI and draws the layout.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "channel.hpp"
#include "instance.hpp"
#include "topology.hpp"
#include "traffic.hpp"
#include "units.hpp"

namespace iabcache {

struct InstanceParams {
  // topology
  std::size_t sbs_count = 9;
  std::size_t ue_count = 100;
  double r_macro_m = 400.0;
  double r_small_m = 40.0;
  Region region = Region::Disc;
  std::vector<Point> sbs_positions;  // explicit layout; empty = random
  std::vector<Point> ue_positions;

  // channel
  double carrier_hz = 28e9;
  double bandwidth_hz = 200e6;
  double antenna_gain_dbi = 18.0;
  double noise_dbm_per_hz = -173.0;
  double delta_los = 2.0;
  double delta_nlos = 3.3;
  double los_threshold_m = 100.0;
  double nakagami_m_los = 3.0;
  double nakagami_m_nlos = 2.0;
  FadingMode fading = FadingMode::Expected;

  // power
  double mbs_power_dbm = 46.0;
  double sbs_power_dbm = 23.0;
  double fpc_epsilon = 0.5;

  // traffic
  std::size_t file_count = 200;
  double zipf_skew = 0.8;
  double file_size_bits = 1e6;
  std::size_t cache_capacity = 150;

  // caching energy
  double caching_w_per_bit = 6.25e-12;
  double caching_time_h = 10.0;

  // QoS floors, uniform across UEs / SBSs
  double gamma_bps = 0.0;
  double tau_bps = 0.0;

  BackhaulSplit backhaul_split = BackhaulSplit::ActiveLinks;

  friend bool operator==(const InstanceParams&, const InstanceParams&) = default;
};

inline ChannelModel channel_model(const InstanceParams& p, std::uint64_t fading_seed = 1) {
  ChannelModel c;
  c.carrier_hz = p.carrier_hz;
  c.bandwidth_hz = p.bandwidth_hz;
  c.antenna_gain = db_to_linear(p.antenna_gain_dbi);
  c.noise_w_per_hz = dbm_to_watt(p.noise_dbm_per_hz);
  c.delta_los = p.delta_los;
  c.delta_nlos = p.delta_nlos;
  c.los_threshold_m = p.los_threshold_m;
  c.nakagami_m_los = p.nakagami_m_los;
  c.nakagami_m_nlos = p.nakagami_m_nlos;
  c.fading = p.fading;
  c.fading_seed = fading_seed;
  return c;
}

inline PowerModel power_model(const InstanceParams& p) {
  PowerModel pw;
  pw.mbs_max_w = dbm_to_watt(p.mbs_power_dbm);
  pw.sbs_max_w = dbm_to_watt(p.sbs_power_dbm);
  pw.fpc_epsilon = p.fpc_epsilon;
  pw.mbs_reference_m = p.r_macro_m;
  pw.sbs_reference_m = p.r_small_m;
  return pw;
}

inline Topology build_topology(const InstanceParams& p, std::uint64_t seed) {
  if (!p.ue_positions.empty()) {
    return Topology({0.0, 0.0}, p.sbs_positions, p.ue_positions, p.r_macro_m, p.r_small_m);
  }
  return generate_topology(p.sbs_count, p.ue_count, p.r_macro_m, p.r_small_m, seed, p.region);
}

/// The instance for one replication seed: the seed drives the layout and,
/// in sampled fading mode, the per-link gains.
inline Instance build_instance(const InstanceParams& p, std::uint64_t seed) {
  CachingEnergyParams caching{p.caching_w_per_bit, p.caching_time_h * kSecondsPerHour};
  QosSpec qos{{p.gamma_bps}, {p.tau_bps}};
  return make_instance(build_topology(p, seed), channel_model(p, seed ^ 0x9e3779b97f4a7c15ull), power_model(p),
                       PopularityModel(p.file_count, p.zipf_skew, p.file_size_bits), p.cache_capacity, caching,
                       std::move(qos), p.backhaul_split);
}

}  // namespace iabcache

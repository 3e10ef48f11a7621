#pragma once

// mmWave link budget: Friis reference loss, LOS/NLOS distance-power law,
// Nakagami power gains, fractional power control, access SINR, backhaul SNR.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "topology.hpp"
#include "units.hpp"

namespace iabcache {

enum class FadingMode { Expected, Sampled };

struct ChannelModel {
  double carrier_hz = 28e9;
  double bandwidth_hz = 200e6;
  double antenna_gain = db_to_linear(18.0);
  double noise_w_per_hz = dbm_to_watt(-173.0);
  double delta_los = 2.0;
  double delta_nlos = 3.3;
  double los_threshold_m = 100.0;
  double nakagami_m_los = 3.0;
  double nakagami_m_nlos = 2.0;
  FadingMode fading = FadingMode::Expected;
  std::uint64_t fading_seed = 1;

  double noise_power_w() const { return noise_w_per_hz * bandwidth_hz; }

  void validate() const {
    if (!(carrier_hz > 0) || !(bandwidth_hz > 0) || !(antenna_gain > 0) || !(noise_w_per_hz > 0)) {
      throw std::invalid_argument("channel: carrier, bandwidth, gain and noise must be positive");
    }
    if (!(delta_los > 0) || delta_los > delta_nlos) {
      throw std::invalid_argument("channel: require 0 < delta_los <= delta_nlos");
    }
    if (!(los_threshold_m >= 0)) throw std::invalid_argument("channel: los_threshold_m < 0");
    if (!(nakagami_m_los >= 0.5) || !(nakagami_m_nlos >= 0.5)) {
      throw std::invalid_argument("channel: Nakagami shape must be >= 0.5");
    }
  }
};

/// Maximum powers in watts, plus fractional power control. The reference
/// distance is the serving cell radius: R_S for SBS links, R_M for MBS links.
struct PowerModel {
  double mbs_max_w = dbm_to_watt(46.0);
  double sbs_max_w = dbm_to_watt(23.0);
  double fpc_epsilon = 0.5;
  double mbs_reference_m = 400.0;
  double sbs_reference_m = 40.0;

  double max_power(BsIndex j) const { return j == kMacro ? mbs_max_w : sbs_max_w; }
  double reference(BsIndex j) const { return j == kMacro ? mbs_reference_m : sbs_reference_m; }

  void validate() const {
    if (!(mbs_max_w > 0) || !(sbs_max_w > 0)) throw std::invalid_argument("power: max power must be positive");
    if (!(fpc_epsilon >= 0) || fpc_epsilon > 1) throw std::invalid_argument("power: fpc_epsilon outside [0, 1]");
    if (!(mbs_reference_m > 0) || !(sbs_reference_m > 0)) {
      throw std::invalid_argument("power: reference distances must be positive");
    }
  }
};

/// Free-space loss at 1 m, (c / (4 pi f_c))^2.
inline double reference_loss(double carrier_hz) {
  if (!(carrier_hz > 0)) throw std::domain_error("reference_loss: carrier must be positive");
  const double q = kSpeedOfLight / (4.0 * std::numbers::pi * carrier_hz);
  return q * q;
}

inline bool is_los(double d, const ChannelModel& model) { return d <= model.los_threshold_m; }

inline double path_exponent(double d, const ChannelModel& model) {
  return is_los(d, model) ? model.delta_los : model.delta_nlos;
}

/// beta * d^-delta with the exponent picked by the LOS threshold.
inline double path_gain(double d, const ChannelModel& model) {
  if (!(d > 0)) throw std::domain_error("path_gain: distance must be positive");
  return reference_loss(model.carrier_hz) * std::pow(d, -path_exponent(d, model));
}

/// Fractional power control: p_max * min(1, (d / d_ref)^(delta * epsilon)).
inline double tx_power(double link_distance, double p_max, double epsilon, double d_ref,
                       double exponent) {
  if (!(link_distance > 0)) throw std::domain_error("tx_power: distance must be positive");
  if (epsilon == 0.0) return p_max;
  return p_max * std::min(1.0, std::pow(link_distance / d_ref, exponent * epsilon));
}

inline double tx_power(double link_distance, BsIndex transmitter, const PowerModel& power,
                       const ChannelModel& channel) {
  return tx_power(link_distance, power.max_power(transmitter), power.fpc_epsilon,
                  power.reference(transmitter), path_exponent(link_distance, channel));
}

/// One Nakagami-m power gain |h|^2 ~ Gamma(m, 1/m), unit mean.
inline double nakagami_power_gain(double m, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(m, 1.0 / m);
  return gamma(rng);
}

/// Small-scale power gains for every access link (UE x BS, interferers
/// included) and every MBS-SBS backhaul link.
struct LinkGains {
  std::size_t bs_count = 0;
  std::vector<double> access;    // row-major U x (B+1)
  std::vector<double> backhaul;  // index sbs - 1

  double access_gain(std::size_t ue, BsIndex bs) const { return access[ue * bs_count + bs]; }
  double backhaul_gain(BsIndex sbs) const { return backhaul[sbs - 1]; }

  static LinkGains unit(const Topology& topology) {
    LinkGains g;
    g.bs_count = topology.bs_count();
    g.access.assign(topology.ue_count() * g.bs_count, 1.0);
    g.backhaul.assign(topology.sbs_count(), 1.0);
    return g;
  }
};

/// Unit gains in expected mode; one seeded Gamma draw per link in sampled mode.
/// The Nakagami shape follows the LOS state of each link.
inline LinkGains draw_link_gains(const Topology& topology, const ChannelModel& channel) {
  LinkGains g = LinkGains::unit(topology);
  if (channel.fading == FadingMode::Expected) return g;
  std::mt19937_64 rng(channel.fading_seed);
  auto shape = [&](double d) { return is_los(d, channel) ? channel.nakagami_m_los : channel.nakagami_m_nlos; };
  for (std::size_t i = 0; i < topology.ue_count(); ++i) {
    for (BsIndex j = 0; j < g.bs_count; ++j) {
      const double d = distance(topology.ue_position(i), topology.bs_position(j));
      g.access[i * g.bs_count + j] = nakagami_power_gain(shape(d), rng);
    }
  }
  for (BsIndex j = 1; j < g.bs_count; ++j) {
    const double d = distance(topology.mbs_position(), topology.bs_position(j));
    g.backhaul[j - 1] = nakagami_power_gain(shape(d), rng);
  }
  return g;
}

/// Power the serving BS spends toward a UE under fractional power control.
inline double access_tx_power(std::size_t ue, BsIndex bs, const Topology& topology,
                              const ChannelModel& channel, const PowerModel& power) {
  const double d = distance(topology.ue_position(ue), topology.bs_position(bs));
  return tx_power(d, bs, power, channel);
}

/// Power the MBS spends toward SBS j on its backhaul link.
inline double backhaul_tx_power(BsIndex sbs, const Topology& topology, const ChannelModel& channel,
                                const PowerModel& power) {
  const double d = distance(topology.mbs_position(), topology.bs_position(sbs));
  return tx_power(d, kMacro, power, channel);
}

/// Downlink SINR of UE `ue` served by `bs`. Every other BS, the MBS included,
/// interferes at its maximum power (worst case), over the full-band noise N0 W.
inline double access_sinr(std::size_t ue, BsIndex bs, const Topology& topology,
                          const ChannelModel& channel, const PowerModel& power,
                          const LinkGains& gains) {
  const Point u = topology.ue_position(ue);
  const double d = distance(u, topology.bs_position(bs));
  const double signal = access_tx_power(ue, bs, topology, channel, power) *
                        gains.access_gain(ue, bs) * channel.antenna_gain * path_gain(d, channel);
  double interference = 0.0;
  for (BsIndex j = 0; j < topology.bs_count(); ++j) {
    if (j == bs) continue;
    const double dj = distance(u, topology.bs_position(j));
    interference += power.max_power(j) * gains.access_gain(ue, j) * channel.antenna_gain *
                    path_gain(dj, channel);
  }
  return signal / (channel.noise_power_w() + interference);
}

/// SNR of the MBS -> SBS backhaul link; the backhaul band is orthogonal, so no interference.
inline double backhaul_snr(BsIndex sbs, const Topology& topology, const ChannelModel& channel,
                           const PowerModel& power, const LinkGains& gains) {
  if (sbs == kMacro) throw std::invalid_argument("backhaul_snr: index must be an SBS");
  const double d = distance(topology.mbs_position(), topology.bs_position(sbs));
  return backhaul_tx_power(sbs, topology, channel, power) * gains.backhaul_gain(sbs) *
         channel.antenna_gain * path_gain(d, channel) / channel.noise_power_w();
}

}  // namespace iabcache

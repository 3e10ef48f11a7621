#pragma once

// Test helpers: small hand-built instances and a literal re-implementation of
// the rate / energy / delay model that shares no code with the library's
// evaluation paths (positions and fading draws are taken from the instance).

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "iabcache/iabcache.hpp"

namespace testing_support {

using namespace iabcache;

inline Instance explicit_instance(std::vector<Point> sbs, std::vector<Point> ue, InstanceParams p = {},
                                  std::uint64_t seed = 1) {
  p.sbs_positions = std::move(sbs);
  p.ue_positions = std::move(ue);
  p.sbs_count = p.sbs_positions.size();
  p.ue_count = p.ue_positions.size();
  return build_instance(p, seed);
}

/// B SBSs with UEs clustered around each of them plus a few macro UEs.
inline Instance clustered_instance(std::uint64_t seed, std::size_t b, std::size_t k, std::size_t n,
                                   InstanceParams p = {}) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  auto polar = [&](double lo, double hi) {
    const double r = lo + (hi - lo) * std::sqrt(u01(rng));
    const double a = 2.0 * std::numbers::pi * u01(rng);
    return Point{r * std::cos(a), r * std::sin(a)};
  };
  p.r_macro_m = 200.0;
  p.r_small_m = 40.0;
  p.file_count = k;
  p.cache_capacity = n;
  std::vector<Point> sbs, ue;
  for (std::size_t j = 0; j < b; ++j) sbs.push_back(polar(60.0, 150.0));
  for (std::size_t j = 0; j < b; ++j) {
    const std::size_t users = 1 + static_cast<std::size_t>(u01(rng) * 4);
    for (std::size_t i = 0; i < users; ++i) {
      const Point off = polar(1.0, 30.0);
      ue.push_back({sbs[j].x + off.x, sbs[j].y + off.y});
    }
  }
  for (int i = 0; i < 3; ++i) ue.push_back(polar(1.0, 200.0));
  return explicit_instance(std::move(sbs), std::move(ue), p, seed);
}

// ---- literal model ----

inline double o_beta(double fc) {
  const double c = 299792458.0;
  return std::pow(c / (4.0 * std::numbers::pi * fc), 2.0);
}

inline double o_exponent(double d, const ChannelModel& ch) { return d <= ch.los_threshold_m ? ch.delta_los : ch.delta_nlos; }

inline double o_gain(double d, const ChannelModel& ch) { return o_beta(ch.carrier_hz) * std::pow(d, -o_exponent(d, ch)); }

inline double o_power(double d, double p_max, double eps, double d_ref, double delta) {
  const double scaled = p_max * std::pow(d / d_ref, delta * eps);
  return scaled < p_max ? scaled : p_max;
}

inline double o_dist(Point a, Point b) { return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y)); }

inline Point o_bs(const Instance& inst, std::size_t j) {
  return j == 0 ? Point{0.0, 0.0} : inst.topology.sbs_positions()[j - 1];
}

inline double o_pmax(const Instance& inst, std::size_t j) { return j == 0 ? inst.power.mbs_max_w : inst.power.sbs_max_w; }
inline double o_dref(const Instance& inst, std::size_t j) {
  return j == 0 ? inst.power.mbs_reference_m : inst.power.sbs_reference_m;
}

inline double o_access_power(const Instance& inst, std::size_t i, std::size_t j) {
  const double d = o_dist(inst.topology.ue_positions()[i], o_bs(inst, j));
  return o_power(d, o_pmax(inst, j), inst.power.fpc_epsilon, o_dref(inst, j), o_exponent(d, inst.channel));
}

inline double o_sinr(const Instance& inst, std::size_t i, std::size_t j) {
  const Point u = inst.topology.ue_positions()[i];
  const std::size_t bs = inst.topology.sbs_count() + 1;
  const double g = inst.channel.antenna_gain;
  const double signal = o_access_power(inst, i, j) * inst.gains.access[i * bs + j] * g * o_gain(o_dist(u, o_bs(inst, j)), inst.channel);
  double interference = 0.0;
  for (std::size_t k = 0; k < bs; ++k) {
    if (k == j) continue;
    interference += o_pmax(inst, k) * inst.gains.access[i * bs + k] * g * o_gain(o_dist(u, o_bs(inst, k)), inst.channel);
  }
  return signal / (inst.channel.noise_w_per_hz * inst.channel.bandwidth_hz + interference);
}

inline double o_backhaul_power(const Instance& inst, std::size_t j) {
  const double d = o_dist(o_bs(inst, 0), o_bs(inst, j));
  return o_power(d, inst.power.mbs_max_w, inst.power.fpc_epsilon, inst.power.mbs_reference_m, o_exponent(d, inst.channel));
}

inline double o_snr(const Instance& inst, std::size_t j) {
  const double d = o_dist(o_bs(inst, 0), o_bs(inst, j));
  return o_backhaul_power(inst, j) * inst.gains.backhaul[j - 1] * inst.channel.antenna_gain * o_gain(d, inst.channel) /
         (inst.channel.noise_w_per_hz * inst.channel.bandwidth_hz);
}

struct OracleTerms {
  double caching_energy = 0.0;
  double transmission_energy = 0.0;
  double delay = 0.0;
  double energy() const { return caching_energy + transmission_energy; }
};

/// Per-request sums over (UE, file) straight from the model definition.
inline OracleTerms o_evaluate(const Instance& inst, double eta, const CacheAllocation& x) {
  const std::size_t u = inst.topology.ue_count();
  const std::size_t b = inst.topology.sbs_count();
  const std::size_t k = inst.popularity.file_count();
  const double q = inst.popularity.file_size_bits();
  const double w = inst.channel.bandwidth_hz;
  std::vector<double> p(k);
  double z = 0.0;
  for (std::size_t m = 0; m < k; ++m) z += std::pow(static_cast<double>(m + 1), -inst.popularity.skew());
  for (std::size_t m = 0; m < k; ++m) p[m] = std::pow(static_cast<double>(m + 1), -inst.popularity.skew()) / z;

  std::vector<double> users(b + 1, 0.0), miss(b + 1, 0.0);
  for (std::size_t i = 0; i < u; ++i) users[inst.topology.serving_bs(i)] += 1.0;
  std::size_t active = 0;
  for (std::size_t j = 1; j <= b; ++j) {
    for (std::size_t m = 0; m < k; ++m) {
      if (!x.cached(j, m)) miss[j] += users[j] * p[m];
    }
    if (miss[j] > 1e-300) ++active;
  }
  const double links = inst.split == BackhaulSplit::AllLinks ? static_cast<double>(b) : static_cast<double>(active);

  OracleTerms t;
  for (std::size_t j = 1; j <= b; ++j) {
    for (std::size_t m = 0; m < k; ++m) {
      if (x.cached(j, m)) t.caching_energy += inst.caching.w_per_bit * inst.caching.caching_time_s * q;
    }
  }
  for (std::size_t i = 0; i < u; ++i) {
    const std::size_t j = inst.topology.serving_bs(i);
    const double ra = eta * w / users[j] * std::log2(1.0 + o_sinr(inst, i, j));
    const double pa = o_access_power(inst, i, j);
    for (std::size_t m = 0; m < k; ++m) {
      t.delay += p[m] * q / ra;
      t.transmission_energy += p[m] * pa * q / ra;
      if (j != 0 && !x.cached(j, m)) {
        const double rb = (1.0 - eta) * w / links / miss[j] * std::log2(1.0 + o_snr(inst, j));
        t.delay += p[m] * q / rb;
        t.transmission_energy += p[m] * o_backhaul_power(inst, j) * q / rb;
      }
    }
  }
  return t;
}

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

/// Every placement with at most n files per SBS, as count vectors of rows.
inline std::vector<std::vector<std::uint8_t>> all_rows(std::size_t k, std::size_t n) {
  std::vector<std::vector<std::uint8_t>> rows;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    std::vector<std::uint8_t> row(k);
    std::size_t c = 0;
    for (std::size_t m = 0; m < k; ++m) {
      row[m] = (mask >> m) & 1u;
      c += row[m];
    }
    if (c <= n) rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("iabcache_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing_support

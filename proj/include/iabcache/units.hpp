#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace iabcache {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kSecondsPerHour = 3600.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }

/// Uniform draw in [0, 1) with 53 random bits. Unlike std::uniform_real_distribution
/// the mapping is fixed, so seeded layouts are identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace iabcache

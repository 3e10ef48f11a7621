#pragma once

// Two-tier layout: one MBS at the origin, B small cells and U UEs scattered
// around it, and the nearest-covering-SBS association rule.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "units.hpp"

namespace iabcache {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Base-station index: 0 is the MBS, 1..B are the SBSs.
using BsIndex = std::size_t;
inline constexpr BsIndex kMacro = 0;

enum class Region { Disc, Square };

/// Nearest SBS whose distance is at most r_small, or kMacro when none covers
/// the UE. Exact distance ties go to the lowest SBS index.
inline BsIndex associate(Point ue, std::span<const Point> sbs_positions, double r_small) {
  BsIndex best = kMacro;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < sbs_positions.size(); ++k) {
    const double d = distance(ue, sbs_positions[k]);
    if (d <= r_small && d < best_distance) {
      best = k + 1;
      best_distance = d;
    }
  }
  return best;
}

class Topology {
 public:
  Topology(Point mbs, std::vector<Point> sbs, std::vector<Point> ue, double r_macro,
           double r_small)
      : mbs_(mbs), sbs_(std::move(sbs)), ue_(std::move(ue)), r_macro_(r_macro),
        r_small_(r_small) {
    if (!(r_small_ > 0.0) || !(r_small_ < r_macro_)) {
      throw std::invalid_argument("topology: require 0 < r_small < r_macro");
    }
    if (ue_.empty()) throw std::invalid_argument("topology: at least one UE is required");
    // Positions on the rim pass even after a polar-to-Cartesian round trip.
    const double limit = r_macro_ * (1.0 + 1e-12);
    auto check = [&](const std::vector<Point>& pts, const char* what) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (distance(pts[i], mbs_) > limit) {
          throw std::invalid_argument(std::string("topology: ") + what + " " +
                                      std::to_string(i) + " lies outside the macro cell");
        }
      }
    };
    check(sbs_, "SBS");
    check(ue_, "UE");
    serving_.reserve(ue_.size());
    for (const Point& p : ue_) serving_.push_back(associate(p, sbs_, r_small_));
  }

  Point mbs_position() const noexcept { return mbs_; }
  const std::vector<Point>& sbs_positions() const noexcept { return sbs_; }
  const std::vector<Point>& ue_positions() const noexcept { return ue_; }
  double r_macro() const noexcept { return r_macro_; }
  double r_small() const noexcept { return r_small_; }

  std::size_t sbs_count() const noexcept { return sbs_.size(); }
  std::size_t ue_count() const noexcept { return ue_.size(); }
  std::size_t bs_count() const noexcept { return sbs_.size() + 1; }

  Point bs_position(BsIndex j) const { return j == kMacro ? mbs_ : sbs_.at(j - 1); }
  Point ue_position(std::size_t i) const { return ue_.at(i); }

  BsIndex serving_bs(std::size_t ue) const { return serving_.at(ue); }
  bool associated(std::size_t ue, BsIndex bs) const { return serving_.at(ue) == bs; }

  /// Number of UEs served by BS j (column sum of the association matrix).
  std::size_t ue_count_at(BsIndex j) const {
    std::size_t n = 0;
    for (BsIndex s : serving_) n += (s == j);
    return n;
  }

  /// U x (B+1) 0/1 matrix a_ij, column 0 = MBS.
  std::vector<std::vector<std::uint8_t>> association_matrix() const {
    std::vector<std::vector<std::uint8_t>> a(ue_.size(), std::vector<std::uint8_t>(bs_count(), 0));
    for (std::size_t i = 0; i < ue_.size(); ++i) a[i][serving_[i]] = 1;
    return a;
  }

  /// Same positions, association recomputed for another small-cell radius.
  Topology with_small_radius(double r_small) const {
    return Topology(mbs_, sbs_, ue_, r_macro_, r_small);
  }

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  Point mbs_;
  std::vector<Point> sbs_;
  std::vector<Point> ue_;
  double r_macro_;
  double r_small_;
  std::vector<BsIndex> serving_;
};

namespace detail {

inline Point sample_point(std::mt19937_64& rng, Region region, double r_macro) {
  if (region == Region::Disc) {
    const double radius = r_macro * std::sqrt(uniform01(rng));
    const double angle = 2.0 * std::numbers::pi * uniform01(rng);
    return {radius * std::cos(angle), radius * std::sin(angle)};
  }
  // Square of side r_macro centred on the MBS.
  const double x = (uniform01(rng) - 0.5) * r_macro;
  const double y = (uniform01(rng) - 0.5) * r_macro;
  return {x, y};
}

}  // namespace detail

/// Random layout with the MBS at the origin. SBS and UE positions come from
/// independent streams of the same seed, so changing b_count leaves the UEs in place.
inline Topology generate_topology(std::size_t b_count, std::size_t u_count, double r_macro,
                                  double r_small, std::uint64_t seed,
                                  Region region = Region::Disc) {
  if (u_count == 0) throw std::invalid_argument("generate_topology: u_count must be >= 1");
  std::seed_seq sbs_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        0x5b5u};
  std::seed_seq ue_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       0x0e0u};
  std::mt19937_64 sbs_rng(sbs_seq);
  std::mt19937_64 ue_rng(ue_seq);

  std::vector<Point> sbs;
  sbs.reserve(b_count);
  for (std::size_t k = 0; k < b_count; ++k) sbs.push_back(detail::sample_point(sbs_rng, region, r_macro));
  std::vector<Point> ue;
  ue.reserve(u_count);
  for (std::size_t i = 0; i < u_count; ++i) ue.push_back(detail::sample_point(ue_rng, region, r_macro));
  return Topology({0.0, 0.0}, std::move(sbs), std::move(ue), r_macro, r_small);
}

}  // namespace iabcache

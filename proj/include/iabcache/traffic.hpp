#pragma once

// Zipf popularity, SBS cache placement matrix and the traffic loads derived
// from them. Loads are expected request counts: each UE carries unit popularity mass.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "topology.hpp"

namespace iabcache {

/// p_m = m^-r / sum_k k^-r, m = 1..K (stored 0-based).
inline std::vector<double> zipf(std::size_t k_files, double skew) {
  if (k_files == 0) throw std::invalid_argument("zipf: k_files must be >= 1");
  if (!(skew >= 0)) throw std::invalid_argument("zipf: skew must be >= 0");
  std::vector<double> p(k_files);
  for (std::size_t m = 0; m < k_files; ++m) p[m] = std::pow(static_cast<double>(m + 1), -skew);
  // Sum smallest-first for accuracy.
  double total = 0.0;
  for (std::size_t m = k_files; m-- > 0;) total += p[m];
  for (double& v : p) v /= total;
  return p;
}

class PopularityModel {
 public:
  PopularityModel(std::size_t k_files, double skew, double file_size_bits)
      : skew_(skew), file_size_bits_(file_size_bits), p_(zipf(k_files, skew)) {
    if (!(file_size_bits > 0)) throw std::invalid_argument("popularity: file size must be positive");
    // tail_[n] = sum_{m >= n} p_m, accumulated least popular first, the same
    // order uncached_mass() uses, so top-n placements agree bit for bit.
    tail_.assign(p_.size() + 1, 0.0);
    for (std::size_t n = p_.size(); n-- > 1;) tail_[n] = tail_[n + 1] + p_[n];
    tail_[0] = 1.0;
  }

  std::size_t file_count() const noexcept { return p_.size(); }
  double skew() const noexcept { return skew_; }
  double file_size_bits() const noexcept { return file_size_bits_; }
  const std::vector<double>& probabilities() const noexcept { return p_; }
  double probability(std::size_t file) const { return p_.at(file); }

  /// Popularity mass not covered when the n most popular files are cached.
  double tail_mass(std::size_t n) const { return tail_.at(std::min(n, p_.size())); }

  /// Popularity mass of the files with a zero in `row`. An empty row gives
  /// exactly 1 and a full row exactly 0.
  double uncached_mass(std::span<const std::uint8_t> row) const {
    std::size_t cached = 0;
    for (auto v : row) cached += v;
    if (cached == 0) return 1.0;
    if (cached == row.size()) return 0.0;
    double s = 0.0;
    for (std::size_t m = row.size(); m-- > 0;) {
      if (!row[m]) s += p_[m];
    }
    return s;
  }

 private:
  double skew_;
  double file_size_bits_;
  std::vector<double> p_;
  std::vector<double> tail_;
};

/// B x K placement matrix; row `sbs` (1-based, matching BsIndex) holds x_jm.
class CacheAllocation {
 public:
  CacheAllocation() = default;
  CacheAllocation(std::size_t sbs_count, std::size_t file_count, std::size_t capacity)
      : sbs_count_(sbs_count), file_count_(file_count), capacity_(capacity),
        x_(sbs_count * file_count, 0) {}

  /// Each SBS caches its counts[sbs - 1] most popular files.
  static CacheAllocation top_n(std::size_t file_count, std::size_t capacity,
                               std::span<const std::size_t> counts) {
    CacheAllocation c(counts.size(), file_count, capacity);
    for (std::size_t k = 0; k < counts.size(); ++k) {
      const std::size_t n = std::min(counts[k], file_count);
      std::fill_n(c.x_.begin() + static_cast<std::ptrdiff_t>(k * file_count), n, std::uint8_t{1});
    }
    return c;
  }

  /// Every SBS caches min(capacity, K) top files.
  static CacheAllocation full(std::size_t sbs_count, std::size_t file_count, std::size_t capacity) {
    std::vector<std::size_t> counts(sbs_count, std::min(capacity, file_count));
    return top_n(file_count, capacity, counts);
  }

  std::size_t sbs_count() const noexcept { return sbs_count_; }
  std::size_t file_count() const noexcept { return file_count_; }
  std::size_t capacity() const noexcept { return capacity_; }

  bool cached(BsIndex sbs, std::size_t file) const { return x_.at(index(sbs, file)) != 0; }
  void set(BsIndex sbs, std::size_t file, bool value) { x_.at(index(sbs, file)) = value ? 1 : 0; }

  std::span<const std::uint8_t> row(BsIndex sbs) const {
    check_sbs(sbs);
    return {x_.data() + (sbs - 1) * file_count_, file_count_};
  }
  std::span<std::uint8_t> row(BsIndex sbs) {
    check_sbs(sbs);
    return {x_.data() + (sbs - 1) * file_count_, file_count_};
  }

  std::size_t cached_count(BsIndex sbs) const {
    std::size_t n = 0;
    for (auto v : row(sbs)) n += v;
    return n;
  }
  std::size_t total_cached() const {
    std::size_t n = 0;
    for (auto v : x_) n += v;
    return n;
  }
  double mean_cached() const {
    return sbs_count_ == 0 ? 0.0 : static_cast<double>(total_cached()) / static_cast<double>(sbs_count_);
  }

  bool within_capacity() const {
    for (BsIndex j = 1; j <= sbs_count_; ++j) {
      if (cached_count(j) > capacity_) return false;
    }
    return true;
  }

  const std::vector<std::uint8_t>& data() const noexcept { return x_; }

  friend bool operator==(const CacheAllocation&, const CacheAllocation&) = default;

  /// Lexicographic order on the row-major flattening (SBS 1 first, most popular file first).
  friend bool lexicographically_less(const CacheAllocation& a, const CacheAllocation& b) {
    return a.x_ < b.x_;
  }

 private:
  void check_sbs(BsIndex sbs) const {
    if (sbs == kMacro || sbs > sbs_count_) throw std::out_of_range("cache: SBS index out of range");
  }
  std::size_t index(BsIndex sbs, std::size_t file) const {
    check_sbs(sbs);
    if (file >= file_count_) throw std::out_of_range("cache: file index out of range");
    return (sbs - 1) * file_count_ + file;
  }

  std::size_t sbs_count_ = 0;
  std::size_t file_count_ = 0;
  std::size_t capacity_ = 0;
  std::vector<std::uint8_t> x_;
};

/// sum_i a_ij sum_m p_m: the number of UEs served by `bs`.
inline double access_load(BsIndex bs, const Topology& topology, const PopularityModel&) {
  return static_cast<double>(topology.ue_count_at(bs));
}

/// sum_m (1 - x_jm) sum_i p_m a_ij: expected requests SBS j must fetch over the backhaul.
inline double uncached_load(BsIndex sbs, const Topology& topology, const PopularityModel& pop,
                            const CacheAllocation& cache) {
  if (sbs == kMacro) throw std::invalid_argument("uncached_load: index must be an SBS");
  const std::size_t users = topology.ue_count_at(sbs);
  if (users == 0) return 0.0;
  return static_cast<double>(users) * pop.uncached_mass(cache.row(sbs));
}

}  // namespace iabcache

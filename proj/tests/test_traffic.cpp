#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "support.hpp"

using namespace iabcache;
using namespace testing_support;

TEST(Zipf, UniformWhenSkewZero) {
  const auto p = zipf(4, 0.0);
  for (double v : p) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(Zipf, TwoFilesSkewOne) {
  const auto p = zipf(2, 1.0);
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
}

TEST(Zipf, DefaultLibrary) {
  const auto p = zipf(200, 0.8);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
  EXPECT_NEAR(p[0] / p[1], std::pow(2.0, 0.8), 1e-12);
}

TEST(Zipf, MatchesClosedFormAndIsSorted) {
  for (double r : {0.0, 0.3, 0.8, 1.0, 2.5}) {
    for (std::size_t k : {1u, 7u, 200u, 1000u}) {
      const auto p = zipf(k, r);
      double z = 0.0;
      for (std::size_t m = 1; m <= k; ++m) z += std::pow(double(m), -r);
      double sum = 0.0;
      for (std::size_t m = 0; m < k; ++m) {
        EXPECT_NEAR(p[m], std::pow(double(m + 1), -r) / z, 1e-15);
        if (m > 0) {
          EXPECT_LE(p[m], p[m - 1]);
        }
        sum += p[m];
      }
      EXPECT_NEAR(sum, 1.0, 1e-12);
    }
  }
  EXPECT_THROW(zipf(0, 1.0), std::invalid_argument);
  EXPECT_THROW(zipf(5, -1.0), std::invalid_argument);
}

TEST(Popularity, TailMassAgreesWithUncachedMass) {
  const PopularityModel pop(50, 0.9, 1e6);
  for (std::size_t n = 0; n <= 50; ++n) {
    std::vector<std::uint8_t> row(50, 0);
    std::fill_n(row.begin(), n, 1);
    EXPECT_EQ(pop.tail_mass(n), pop.uncached_mass(row)) << n;
  }
  EXPECT_EQ(pop.tail_mass(0), 1.0);
  EXPECT_EQ(pop.tail_mass(50), 0.0);
  EXPECT_EQ(pop.tail_mass(80), 0.0);
}

namespace {

// Six UEs on SBS 1, one on the MBS.
Instance six_on_one(std::size_t k, double skew, std::size_t n) {
  InstanceParams p;
  p.file_count = k;
  p.zipf_skew = skew;
  p.cache_capacity = n;
  std::vector<Point> ue;
  for (int i = 0; i < 6; ++i) ue.push_back({100.0 + 5 * std::cos(i), 5 * std::sin(i)});
  ue.push_back({-250, 0});
  return explicit_instance({{100, 0}, {0, 250}}, ue, p);
}

}  // namespace

TEST(Loads, AccessLoadCountsUes) {
  const Instance inst = six_on_one(4, 0.0, 2);
  EXPECT_EQ(access_load(1, inst.topology, inst.popularity), 6.0);
  EXPECT_EQ(access_load(2, inst.topology, inst.popularity), 0.0);
  EXPECT_EQ(access_load(0, inst.topology, inst.popularity), 1.0);
}

TEST(Loads, AccessLoadIsColumnSum) {
  const Instance inst = build_instance(InstanceParams{}, 12);
  const auto a = inst.topology.association_matrix();
  for (BsIndex j = 0; j < inst.topology.bs_count(); ++j) {
    double col = 0;
    for (const auto& row : a) col += row[j];
    EXPECT_EQ(access_load(j, inst.topology, inst.popularity), col);
  }
}

TEST(Loads, UncachedLoadExamples) {
  const Instance inst = six_on_one(4, 0.0, 4);
  CacheAllocation x = inst.empty_cache();
  EXPECT_EQ(uncached_load(1, inst.topology, inst.popularity, x), 6.0);
  x.set(1, 0, true);
  x.set(1, 1, true);
  EXPECT_NEAR(uncached_load(1, inst.topology, inst.popularity, x), 3.0, 1e-15);
  x.set(1, 2, true);
  x.set(1, 3, true);
  EXPECT_EQ(uncached_load(1, inst.topology, inst.popularity, x), 0.0);
  EXPECT_THROW(uncached_load(0, inst.topology, inst.popularity, x), std::invalid_argument);
}

TEST(Loads, UncachedNeverExceedsAccessAndShrinksWithFlips) {
  const Instance inst = six_on_one(10, 0.7, 10);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    CacheAllocation x = inst.empty_cache();
    const double access = access_load(1, inst.topology, inst.popularity);
    double prev = uncached_load(1, inst.topology, inst.popularity, x);
    EXPECT_EQ(prev, access);
    std::vector<std::size_t> order(10);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t m : order) {
      x.set(1, m, true);
      const double now = uncached_load(1, inst.topology, inst.popularity, x);
      EXPECT_LE(now, prev);
      EXPECT_LT(now, access);
      prev = now;
    }
  }
}

TEST(Loads, TopNMinimizesUncachedMassExhaustively) {
  for (std::size_t k : {5u, 8u, 12u}) {
    const PopularityModel pop(k, 0.6, 1e6);
    for (std::size_t n = 0; n <= 4; ++n) {
      double best = INFINITY;
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        if (std::popcount(mask) != static_cast<int>(n)) continue;
        std::vector<std::uint8_t> row(k);
        for (std::size_t m = 0; m < k; ++m) row[m] = (mask >> m) & 1u;
        best = std::min(best, pop.uncached_mass(row));
      }
      EXPECT_NEAR(pop.tail_mass(n), best, 1e-15) << "k " << k << " n " << n;
    }
  }
}

TEST(CacheAllocation, ShapeCountsAndCapacity) {
  const std::vector<std::size_t> counts{3, 0, 5};
  const CacheAllocation x = CacheAllocation::top_n(6, 4, counts);
  EXPECT_EQ(x.cached_count(1), 3u);
  EXPECT_EQ(x.cached_count(2), 0u);
  EXPECT_EQ(x.cached_count(3), 5u);
  EXPECT_EQ(x.total_cached(), 8u);
  EXPECT_NEAR(x.mean_cached(), 8.0 / 3.0, 1e-15);
  EXPECT_FALSE(x.within_capacity());
  EXPECT_TRUE(x.cached(1, 2));
  EXPECT_FALSE(x.cached(1, 3));
  EXPECT_THROW(x.cached(0, 0), std::out_of_range);
  EXPECT_THROW(x.cached(4, 0), std::out_of_range);
  EXPECT_THROW(x.cached(1, 6), std::out_of_range);

  const CacheAllocation f = CacheAllocation::full(2, 5, 9);
  EXPECT_EQ(f.total_cached(), 10u);
  EXPECT_TRUE(f.within_capacity());
}

TEST(CacheAllocation, LexicographicOrder) {
  CacheAllocation a(2, 3, 3), b(2, 3, 3);
  b.set(2, 2, true);
  EXPECT_TRUE(lexicographically_less(a, b));
  a.set(1, 2, true);
  EXPECT_TRUE(lexicographically_less(b, a));
}

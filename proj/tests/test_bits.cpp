#include <gtest/gtest.h>

#include <map>
#include <set>

#include "gasdicke/bits.hpp"
#include "gasdicke/random.hpp"
#include "gasdicke/search_space.hpp"

using namespace gasd;

TEST(Bits, BitstringRoundTripIsLittleEndian) {
  EXPECT_EQ(to_bitstring(0b0011, 4), "1100");
  EXPECT_EQ(from_bitstring("1001"), Bits{0b1001});
  EXPECT_EQ(from_bitstring("0001"), Bits{0b1000});
  for (Bits x = 0; x < 64; ++x) EXPECT_EQ(from_bitstring(to_bitstring(x, 6)), x);
  EXPECT_THROW(from_bitstring("0102"), std::invalid_argument);
}

TEST(Bits, BinomialMatchesPascal) {
  std::vector<std::vector<std::uint64_t>> pascal(40, std::vector<std::uint64_t>(40, 0));
  for (int n = 0; n < 40; ++n) {
    pascal[n][0] = 1;
    for (int k = 1; k <= n; ++k) pascal[n][k] = pascal[n - 1][k - 1] + (k < n ? pascal[n - 1][k] : 0);
  }
  for (int n = 0; n < 40; ++n) {
    for (int k = 0; k <= n; ++k) EXPECT_EQ(binomial(n, k), pascal[n][k]) << n << "," << k;
  }
  EXPECT_EQ(binomial(5, 7), 0u);
  EXPECT_NEAR(std::exp(log_binomial(30, 12)), static_cast<double>(binomial(30, 12)), 1e-3);
}

TEST(Bits, WeightKWordsAreSortedAndComplete) {
  for (int n = 1; n <= 10; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto words = weight_k_words(n, k);
      std::vector<Bits> expected;
      for (Bits x = 0; x < (Bits{1} << n); ++x) {
        if (popcount(x) == k) expected.push_back(x);
      }
      EXPECT_EQ(words, expected);
    }
  }
}

TEST(Random, UniformBelowIsUniform) {
  Rng rng(7);
  std::map<std::uint64_t, int> counts;
  const int draws = 120000;
  for (int i = 0; i < draws; ++i) ++counts[uniform_below(rng, 6)];
  ASSERT_EQ(counts.size(), 6u);
  for (auto [v, c] : counts) EXPECT_NEAR(c / static_cast<double>(draws), 1.0 / 6.0, 0.01);
  EXPECT_EQ(uniform_below(rng, 1), 0u);
}

TEST(Random, SeedsAreReproducibleAndDistinct) {
  Rng a(derive_seed(1, 2, 3)), b(derive_seed(1, 2, 3));
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a(), b());
  std::set<std::uint64_t> seeds;
  for (std::uint64_t t = 0; t < 100; ++t) {
    for (std::uint64_t m = 0; m < 4; ++m) seeds.insert(derive_seed(1, t, m));
  }
  EXPECT_EQ(seeds.size(), 400u);
}

TEST(SearchSpace, SizesAndMembership) {
  const auto h = SearchSpace::hadamard(5);
  EXPECT_EQ(h.size(), 32u);
  EXPECT_TRUE(h.contains(31));
  EXPECT_FALSE(h.contains(32));
  const auto d = SearchSpace::dicke(12, 6);
  EXPECT_EQ(d.size(), 924u);
  EXPECT_TRUE(d.contains(0b111111));
  EXPECT_FALSE(d.contains(0b11111));
  EXPECT_THROW(SearchSpace::dicke(4, 0), std::invalid_argument);
  EXPECT_THROW(SearchSpace::dicke(4, 5), std::invalid_argument);
}

TEST(SearchSpace, ElementUnranksInNumericOrder) {
  for (int n = 1; n <= 9; ++n) {
    for (int k = 1; k <= n; ++k) {
      const auto s = SearchSpace::dicke(n, k);
      const auto all = s.elements();
      ASSERT_EQ(all.size(), s.size());
      for (std::uint64_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.element(i), all[i]);
    }
  }
  EXPECT_THROW(SearchSpace::dicke(4, 2).element(6), std::out_of_range);
}

struct WeightObjective {
  int n() const { return 4; }
  double evaluate(Bits x) const { return -popcount(x & 0b0101); }
};

TEST(SearchSpace, BruteForceMinimumReturnsAllTies) {
  const auto m = brute_force_minimum(WeightObjective{}, SearchSpace::hadamard(4));
  EXPECT_EQ(m.value, -2.0);
  EXPECT_EQ(m.argmin, (std::vector<Bits>{0b0101, 0b0111, 0b1101, 0b1111}));
}

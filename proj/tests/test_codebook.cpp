#include <gtest/gtest.h>

#include "gasdicke/codebook.hpp"

using namespace gasd;

namespace {

std::vector<std::string> strings(const std::vector<Bits>& words, int length) {
  std::vector<std::string> out;
  for (Bits w : words) out.push_back(to_bitstring(w, length));
  return out;
}

// Best achievable minimum distance by trying every K-subset.
int brute_force_dmin(const std::vector<Bits>& words, int K) {
  int best = 0;
  const int q = static_cast<int>(words.size());
  for (Bits s = 0; s < (Bits{1} << q); ++s) {
    if (std::popcount(s) != K) continue;
    int d = 1 << 20;
    for (int i = 0; i < q; ++i)
      for (int j = i + 1; j < q; ++j)
        if ((s >> i & 1) && (s >> j & 1)) d = std::min(d, std::popcount(words[i] ^ words[j]));
    best = std::max(best, d);
  }
  return best;
}

GasConfig generous() {
  GasConfig cfg;
  cfg.max_quantum_queries = 20000;
  cfg.seed = 9;
  return cfg;
}

}  // namespace

TEST(Enumerate, Examples) {
  EXPECT_EQ(strings(enumerate_codewords({2, std::nullopt, false}), 2), (std::vector<std::string>{"00", "01", "10", "11"}));
  const CodeSpace cw{4, 2, false};
  EXPECT_EQ(cw.size(), 6u);
  EXPECT_EQ(strings(enumerate_codewords(cw), 4),
            (std::vector<std::string>{"0011", "0101", "0110", "1001", "1010", "1100"}));
  const CodeSpace im{4, 2, true};
  EXPECT_EQ(im.size(), 4u);
  EXPECT_EQ(strings(enumerate_codewords(im), 4), (std::vector<std::string>{"0011", "0101", "0110", "1001"}));
  EXPECT_THROW(enumerate_codewords({30, std::nullopt, false}), std::length_error);
  EXPECT_THROW(CodeSpace({3, 4, false}).validate(), std::invalid_argument);
}

TEST(HammingMatrix, Examples) {
  const auto D = hamming_matrix({0b000, 0b111});
  EXPECT_EQ(D(0, 1), 3.0);
  const auto E = hamming_matrix(enumerate_codewords({2, std::nullopt, false}));
  EXPECT_EQ(E.upper_triangular(), (std::vector<double>{1, 1, 2, 2, 1, 1}));
  EXPECT_THROW(hamming_matrix({1, 1}), std::invalid_argument);
}

TEST(HammingMatrix, IsAMetric) {
  const auto words = enumerate_codewords({5, std::nullopt, false});
  const auto D = hamming_matrix(words);
  for (int i = 0; i < D.n(); ++i)
    for (int j = 0; j < D.n(); ++j) {
      if (i == j) continue;
      EXPECT_GT(D(i, j), 0.0);
      EXPECT_EQ(D(i, j), D(j, i));
      for (int l = 0; l < D.n(); ++l)
        if (l != i && l != j) {
          EXPECT_LE(D(i, j), D(i, l) + D(l, j));
        }
    }
}

TEST(DesignCodebook, Examples) {
  const auto a = design_codebook({3, std::nullopt, false}, 2);
  EXPECT_EQ(a.min_distance, 3);
  ASSERT_EQ(a.codewords.size(), 2u);
  EXPECT_EQ(a.codewords[0] ^ a.codewords[1], Bits{0b111});
  const auto b = design_codebook({4, 2, false}, 2);
  EXPECT_EQ(b.min_distance, 4);
  EXPECT_EQ(b.codewords[0] ^ b.codewords[1], Bits{0b1111});
  EXPECT_THROW(design_codebook({3, std::nullopt, false}, 9), std::invalid_argument);
  EXPECT_THROW(design_codebook({3, std::nullopt, false}, 1), std::invalid_argument);
}

TEST(DesignCodebook, GasMatchesExactOnSmallSpaces) {
  std::vector<CodeSpace> spaces;
  for (int L = 2; L <= 4; ++L) {
    spaces.push_back({L, std::nullopt, false});
    for (int W = 1; W < L; ++W) {
      spaces.push_back({L, W, false});
      spaces.push_back({L, W, true});
    }
  }
  const CodebookSolver gas{CodebookSolverKind::Gas, generous()};
  for (const auto& s : spaces) {
    const auto words = enumerate_codewords(s);
    for (int K = 2; K <= static_cast<int>(words.size()); ++K) {
      const auto exact = design_codebook(s, K);
      EXPECT_EQ(exact.min_distance, brute_force_dmin(words, K));
      EXPECT_EQ(design_codebook(s, K, gas).min_distance, exact.min_distance)
          << "L=" << s.length << " W=" << s.weight.value_or(-1) << " K=" << K;
    }
  }
}

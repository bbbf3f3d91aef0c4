#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "gasdicke/dispersion.hpp"
#include "gasdicke/random.hpp"

using namespace gasd;

namespace {

DistanceMatrix four_point() { return DistanceMatrix::from_upper_triangular(4, {2, 7, 9, 6, 7, 5}); }

DistanceMatrix random_matrix(int n, int lo, int hi, Rng& rng) {
  std::vector<double> upper;
  for (int i = 0; i < n * (n - 1) / 2; ++i) upper.push_back(lo + static_cast<double>(uniform_below(rng, hi - lo + 1)));
  return DistanceMatrix::from_upper_triangular(n, upper);
}

// Brute-force oracles over raw subsets.
double subset_sum(const DistanceMatrix& D, Bits x) {
  double s = 0;
  for (int i = 0; i < D.n(); ++i)
    for (int j = i + 1; j < D.n(); ++j)
      if ((x >> i & 1) && (x >> j & 1)) s += D(i, j);
  return s;
}

double subset_min(const DistanceMatrix& D, Bits x) {
  double m = INFINITY;
  for (int i = 0; i < D.n(); ++i)
    for (int j = i + 1; j < D.n(); ++j)
      if ((x >> i & 1) && (x >> j & 1)) m = std::min(m, D(i, j));
  return m;
}

template <class F>
std::set<Bits> argmax_weight_k(int n, int k, F f) {
  double best = -INFINITY;
  std::set<Bits> out;
  for (Bits x = 0; x < (Bits{1} << n); ++x) {
    if (std::popcount(x) != k) continue;
    const double v = f(x);
    if (v > best) {
      best = v;
      out.clear();
    }
    if (v == best) out.insert(x);
  }
  return out;
}

template <class F>
std::set<Bits> argmin_all(int n, F f) {
  double best = INFINITY;
  std::set<Bits> out;
  for (Bits x = 0; x < (Bits{1} << n); ++x) {
    const double v = f(x);
    if (v < best) {
      best = v;
      out.clear();
    }
    if (v == best) out.insert(x);
  }
  return out;
}

std::set<Bits> optima_set(const ExactResult& r) {
  std::set<Bits> s;
  for (const auto& o : r.optima) s.insert(o.subset);
  return s;
}

// Full scan over every pair of distinct distances.
double lambda1_all_pairs(const DistanceMatrix& D, int k) {
  const auto u = D.upper_triangular();
  double best = 0;
  for (double a : u)
    for (double b : u)
      if (a < b) best = std::max(best, (std::log(k) + std::log(k + 1.0) - std::log(2.0)) / (std::log(b) - std::log(a)));
  return best;
}

}  // namespace

TEST(DistanceMatrix, ConstructionAndValidation) {
  const auto D = four_point();
  EXPECT_EQ(D(0, 3), 9.0);
  EXPECT_EQ(D(3, 0), 9.0);
  EXPECT_EQ(D(2, 3), 5.0);
  EXPECT_EQ(D.min(), 2.0);
  EXPECT_EQ(D.max(), 9.0);
  EXPECT_EQ(D.distinct_values(), (std::vector<double>{2, 5, 6, 7, 9}));
  EXPECT_THROW(DistanceMatrix::from_upper_triangular(4, {1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(DistanceMatrix::from_upper_triangular(3, {1, 0, 3}), std::invalid_argument);
  EXPECT_THROW(DistanceMatrix::from_upper_triangular(3, {1, -2, 3}), std::invalid_argument);
  EXPECT_THROW(DistanceMatrix::from_square({{0, 1}, {2, 0}}), std::invalid_argument);
}

TEST(DistanceMatrix, CsvIngestion) {
  std::istringstream csv("-,2,7,9\n2,-,6,7\n7,6,-,5\n9,7,5,-\n");
  EXPECT_EQ(read_distance_csv(csv), four_point());
  std::istringstream zeros("0, 3\n3, 0\n");
  EXPECT_EQ(read_distance_csv(zeros)(0, 1), 3.0);
  std::istringstream bad("0,x\nx,0\n");
  EXPECT_THROW(read_distance_csv(bad), std::invalid_argument);
}

TEST(MaxSum, Examples) {
  const auto D = four_point();
  EXPECT_EQ(max_sum_objective(D, 2, false).evaluate("1001"), -9.0);
  EXPECT_EQ(max_sum_formulation(D, 2, true).lambda2, 9.0);
  EXPECT_EQ(max_sum_formulation(D, 3, true).lambda2, 27.0);
  const auto f = max_sum_formulation(D, 2, true);
  for (Bits x = 0; x < 16; ++x) {
    if (std::popcount(x) == 2) {
      EXPECT_EQ(f.penalty(x), 0.0);
    }
    EXPECT_DOUBLE_EQ(f.to_polynomial().evaluate(x), f.evaluate(x));
    EXPECT_DOUBLE_EQ(f.evaluate(x), -subset_sum(D, x) + 9.0 * std::pow(std::popcount(x) - 2, 2));
  }
  EXPECT_THROW(max_sum_formulation(D, 1, false), std::invalid_argument);
  EXPECT_THROW(max_sum_formulation(D, 4, false), std::invalid_argument);
}

TEST(MaxSum, DefaultPenaltyFailsForPairs) {
  // Three points at mutual distance d: the triple scores -3d + d < -d.
  const auto D = DistanceMatrix::from_upper_triangular(4, {5, 5, 1, 5, 1, 1});
  const auto f = max_sum_formulation(D, 2, true);
  EXPECT_EQ(f.evaluate(0b0111), -10.0);
  EXPECT_EQ(f.evaluate(0b0011), -5.0);
}

TEST(MaxSum, DefaultPenaltyIsValidFromFourUp) {
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 8 + trial % 5;
    const int k = 4 + trial % 3;
    const auto D = random_matrix(n, 1, 20, rng);
    const auto f = max_sum_formulation(D, k, true);
    const auto minimizers = argmin_all(n, [&](Bits x) { return f.evaluate(x); });
    for (Bits x : minimizers) EXPECT_EQ(std::popcount(x), k);
    EXPECT_EQ(minimizers, argmax_weight_k(n, k, [&](Bits x) { return subset_sum(D, x); }));
  }
}

TEST(MaxMin, UniformMatrixMakesEverySubsetOptimal) {
  const auto D = DistanceMatrix::from_upper_triangular(5, std::vector<double>(10, 3.0));
  const auto l1 = compute_lambda1(D, 3);
  EXPECT_TRUE(l1.degenerate);
  EXPECT_EQ(l1.value, 1.0);
  for (double lambda : {0.5, 1.0, 4.0}) {
    const auto obj = max_min_objective(D, 3, false, lambda);
    for (const auto& t : obj.terms()) EXPECT_DOUBLE_EQ(t.coefficient, std::pow(1.0 / 3.0, lambda));
  }
  const auto r = exact_max_min(D, 3);
  EXPECT_TRUE(r.all_optimal);
  EXPECT_EQ(r.optima.size(), 10u);
}

TEST(MaxMin, FourPointTriples) {
  // Both {0,2,3} and {1,2,3} reach d_min = 5; the objective prefers the one
  // whose other two distances are larger.
  const auto D = four_point();
  auto argmin_triples = [](const DispersionObjective& f) {
    double best = INFINITY;
    std::set<Bits> arg;
    for (Bits x = 0; x < 16; ++x) {
      if (std::popcount(x) != 3) continue;
      const double v = f.evaluate(x);
      if (v < best) best = v, arg.clear();
      if (v == best) arg.insert(x);
    }
    return arg;
  };
  const auto arg = argmin_triples(max_min_formulation(D, 3, false));
  EXPECT_EQ(arg, (std::set<Bits>{0b1101}));
  EXPECT_EQ(optima_set(exact_max_min(D, 3)), (std::set<Bits>{0b1101, 0b1110}));
  const auto c = rank_compress(D, 0.01, 3);
  EXPECT_EQ(argmin_triples(max_min_formulation(c.compressed, 3, false, c.lambda1)), arg);
}

TEST(MaxMin, RequiresDistancesAtLeastOne) {
  const auto D = DistanceMatrix::from_upper_triangular(3, {0.5, 2, 3});
  EXPECT_THROW(max_min_formulation(D, 2, false), std::invalid_argument);
  EXPECT_THROW(compute_lambda1(D, 2), std::invalid_argument);
  const auto c = rank_compress(D, 1e-3, 2);
  EXPECT_NO_THROW(max_min_formulation(c.compressed, 2, false, c.lambda1));
}

TEST(MaxMin, DefaultPenaltyRule) {
  const auto D = four_point();
  const auto f = max_min_formulation(D, 3, true);
  const double l1 = compute_lambda1(D, 3).value;
  EXPECT_DOUBLE_EQ(f.lambda2, 3.0 * std::pow(0.5, l1));
  EXPECT_EQ(max_min_formulation(D, 3, true, std::nullopt, 1.0).lambda2, 1.0);
}

TEST(Lambda1, TwoDistanceExample) {
  const auto D = DistanceMatrix::from_upper_triangular(3, {2, 9, 9});
  const double expected = (std::log(3.0) + std::log(4.0) - std::log(2.0)) / (std::log(9.0) - std::log(2.0));
  EXPECT_NEAR(compute_lambda1(D, 3).value, expected, 1e-12);
  EXPECT_NEAR(expected, std::log(6.0) / std::log(4.5), 1e-12);
}

TEST(Lambda1, CompressedMatchesClosedForm) {
  const int k = 4;
  for (double delta : {1e-3, 1e-4, 1e-5}) {
    const auto c = rank_compress(four_point(), delta, k);
    const double r = c.r_max;
    const double closed = (std::log(k) + std::log(k + 1.0) - std::log(2.0)) /
                          (std::log(1 + r * delta) - std::log(1 + (r - 1) * delta));
    EXPECT_NEAR(c.lambda1 / closed, 1.0, 1e-9);
    EXPECT_NEAR(compute_lambda1(c.compressed, k).value / closed, 1.0, 1e-9);
  }
}

TEST(Lambda1, SatisfiesBoundingConditionAndEqualsFullScan) {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 2 + trial % 5;
    const auto D = random_matrix(6 + trial % 4, 1, 30, rng);
    const auto l1 = compute_lambda1(D, k);
    ASSERT_FALSE(l1.degenerate);
    EXPECT_NEAR(l1.value, lambda1_all_pairs(D, k), 1e-12 * l1.value);
    const auto v = D.distinct_values();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      EXPECT_GT(std::pow(1.0 / v[i], l1.value), static_cast<double>(binomial(k, 2)) * std::pow(1.0 / v[i + 1], l1.value));
    }
  }
}

TEST(MaxMin, MinimizersAttainBestMinimumDistance) {
  Rng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 7 + trial % 4;
    const int k = 2 + trial % 4;
    const auto D = random_matrix(n, 1, 20, rng);
    const double best = exact_max_min(D, k).best_value;
    for (bool penalized : {false, true}) {
      const auto f = max_min_formulation(D, k, penalized);
      std::set<Bits> arg;
      if (penalized) {
        arg = argmin_all(n, [&](Bits x) { return f.evaluate(x); });
      } else {
        double lo = INFINITY;
        for (Bits x = 0; x < (Bits{1} << n); ++x) {
          if (std::popcount(x) != k) continue;
          const double v = f.evaluate(x);
          if (v < lo) lo = v, arg.clear();
          if (v == lo) arg.insert(x);
        }
      }
      for (Bits x : arg) {
        EXPECT_EQ(std::popcount(x), k);
        EXPECT_EQ(subset_min(D, x), best) << "trial " << trial;
      }
    }
  }
}

TEST(RankCompress, FourPointRanksAndMatrix) {
  const double delta = 0.125;
  const auto c = rank_compress(four_point(), delta);
  EXPECT_EQ(c.ranks, (std::map<double, int>{{2, 0}, {5, 1}, {6, 2}, {7, 3}, {9, 4}}));
  EXPECT_EQ(c.r_max, 4);
  const double expected[4][4] = {{0, 1, 1 + 3 * delta, 1 + 4 * delta},
                                 {1, 0, 1 + 2 * delta, 1 + 3 * delta},
                                 {1 + 3 * delta, 1 + 2 * delta, 0, 1 + delta},
                                 {1 + 4 * delta, 1 + 3 * delta, 1 + delta, 0}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) {
        EXPECT_EQ(c.compressed(i, j), expected[i][j]);
      }
}

TEST(RankCompress, SingleDistanceCollapsesToOnes) {
  const auto c = rank_compress(DistanceMatrix::from_upper_triangular(3, {4, 4, 4}), 0.1);
  EXPECT_EQ(c.r_max, 0);
  EXPECT_TRUE(c.degenerate);
  for (double d : c.compressed.upper_triangular()) EXPECT_EQ(d, 1.0);
  EXPECT_THROW(rank_compress(four_point(), 0.0), std::invalid_argument);
}

TEST(RankCompress, PreservesOptimalSubsets) {
  Rng rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 6 + trial % 5;
    const int k = 2 + trial % 3;
    const auto D = random_matrix(n, 1, 20, rng);
    for (double delta : {1e-5, 0.5, 3.0}) {
      const auto c = rank_compress(D, delta, k);
      EXPECT_EQ(optima_set(exact_max_min(c.compressed, k)), optima_set(exact_max_min(D, k)));
      const auto u = D.upper_triangular(), v = c.compressed.upper_triangular();
      for (std::size_t a = 0; a < u.size(); ++a)
        for (std::size_t b = 0; b < u.size(); ++b) EXPECT_EQ(u[a] < u[b], v[a] < v[b]);
    }
  }
}

TEST(MinCoefficient, Examples) {
  EXPECT_NEAR(min_coefficient_limit(1, 2), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(min_coefficient(0, 0.1, 3), 1.0);
  for (int r = 2; r <= 6; ++r) {
    double prev = 0.0;
    for (double delta : {1e-1, 1e-2, 1e-3}) {
      const double f = min_coefficient(r, delta, 3);
      EXPECT_GT(f, prev);  // larger as delta shrinks
      prev = f;
    }
  }
  EXPECT_LT(std::abs(min_coefficient(5, 1e-8, 4) - min_coefficient_limit(5, 4)), 1e-4);
  // With r_max = 1 the minimum coefficient is exactly 2 / (k (k + 1)) for every delta.
  EXPECT_NEAR(min_coefficient(1, 0.37, 5), 2.0 / 30.0, 1e-14);
}

TEST(ExactSolvers, FourPointExamples) {
  const auto D = four_point();
  const auto s = exact_max_sum(D, 2);
  ASSERT_EQ(s.optima.size(), 1u);
  EXPECT_EQ(s.optima[0].subset, Bits{0b1001});
  EXPECT_EQ(s.best_value, 9.0);
  const auto m = exact_max_min(D, 3);
  EXPECT_EQ(optima_set(m), (std::set<Bits>{0b1101, 0b1110}));
  EXPECT_EQ(m.best_value, 5.0);
  const auto all = exact_max_min(D, 4);
  ASSERT_EQ(all.optima.size(), 1u);
  EXPECT_EQ(all.optima[0].subset, Bits{0b1111});
  EXPECT_EQ(all.best_value, 2.0);
  EXPECT_TRUE(all.all_optimal);
}

TEST(ExactSolvers, MatchBruteForceAndGuardBlowup) {
  Rng rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 5 + trial % 6, k = 2 + trial % 3;
    const auto D = random_matrix(n, 1, 9, rng);
    EXPECT_EQ(optima_set(exact_max_sum(D, k)), argmax_weight_k(n, k, [&](Bits x) { return subset_sum(D, x); }));
    EXPECT_EQ(optima_set(exact_max_min(D, k)), argmax_weight_k(n, k, [&](Bits x) { return subset_min(D, x); }));
  }
  const auto big = DistanceMatrix::from_upper_triangular(40, std::vector<double>(780, 1.0));
  EXPECT_THROW(exact_max_min(big, 20), std::length_error);
  EXPECT_THROW(exact_max_min(four_point(), 1), std::invalid_argument);
}

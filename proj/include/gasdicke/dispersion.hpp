#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bits.hpp"
#include "objective.hpp"

namespace gasd {

/// Symmetric matrix of positive pairwise distances. The diagonal is unused
/// and stored as zero.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;

  /// From the upper triangle in row-major order: d01, d02, ..., d12, ...
  static DistanceMatrix from_upper_triangular(int n, const std::vector<double>& upper) {
    if (n < 2 || n > 62) throw std::invalid_argument("distance matrix needs 2 <= n <= 62");
    const std::size_t need = static_cast<std::size_t>(n) * (n - 1) / 2;
    if (upper.size() != need) {
      throw std::invalid_argument("expected " + std::to_string(need) + " upper-triangular distances, got " +
                                  std::to_string(upper.size()));
    }
    DistanceMatrix m(n);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) m.set(i, j, upper[idx++]);
    }
    return m;
  }

  /// From a full square matrix; the diagonal is ignored.
  static DistanceMatrix from_square(const std::vector<std::vector<double>>& rows) {
    const int n = static_cast<int>(rows.size());
    if (n < 2 || n > 62) throw std::invalid_argument("distance matrix needs 2 <= n <= 62");
    DistanceMatrix m(n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n) throw std::invalid_argument("distance matrix is not square");
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (rows[i][j] != rows[j][i]) {
          throw std::invalid_argument("distance matrix is not symmetric at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")");
        }
        m.set(i, j, rows[i][j]);
      }
    }
    return m;
  }

  int n() const { return n_; }
  double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }

  std::vector<double> upper_triangular() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_) * (n_ - 1) / 2);
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) out.push_back((*this)(i, j));
    }
    return out;
  }

  /// Distinct off-diagonal values, ascending.
  std::vector<double> distinct_values() const {
    auto v = upper_triangular();
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  double min() const { return distinct_values().front(); }
  double max() const { return distinct_values().back(); }

  bool operator==(const DistanceMatrix&) const = default;

 private:
  explicit DistanceMatrix(int n) : n_(n), d_(static_cast<std::size_t>(n) * n, 0.0) {}

  void set(int i, int j, double v) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw std::invalid_argument("distance (" + std::to_string(i) + "," + std::to_string(j) +
                                  ") must be finite and positive");
    }
    d_[static_cast<std::size_t>(i) * n_ + j] = v;
    d_[static_cast<std::size_t>(j) * n_ + i] = v;
  }

  int n_ = 0;
  std::vector<double> d_;
};

/// Square matrix as CSV, one row per line. Diagonal cells may be empty or "-".
inline DistanceMatrix read_distance_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      cell = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      if (cell.empty() || cell == "-") {
        row.push_back(0.0);
        continue;
      }
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size()) throw std::invalid_argument("bad distance cell '" + cell + "'");
      row.push_back(v);
    }
    if (line.back() == ',') row.push_back(0.0);
    rows.push_back(std::move(row));
  }
  return DistanceMatrix::from_square(rows);
}

// ---------------------------------------------------------------------------
// Formulations

/// Pairwise objective plus an optional quadratic weight penalty
/// lambda2 * (|x| - k)^2, evaluated without expanding the penalty.
struct DispersionObjective {
  PolynomialObjective pairs;
  double lambda2 = 0.0;
  int k = 0;
  bool penalized = false;

  int n() const { return pairs.n(); }

  double penalty(Bits x) const {
    if (!penalized) return 0.0;
    const double dev = popcount(x) - k;
    return lambda2 * dev * dev;
  }

  double evaluate(Bits x) const { return pairs.evaluate(x) + penalty(x); }

  /// Multilinear expansion: lambda2 k^2 + lambda2 (1 - 2k) sum x_i + 2 lambda2 sum_{i<j} x_i x_j.
  PolynomialObjective to_polynomial() const {
    PolynomialObjective p = pairs;
    if (!penalized) return p;
    const double kk = k;
    p.add_constant(lambda2 * kk * kk);
    for (int i = 0; i < n(); ++i) p.add_term({i}, lambda2 * (1.0 - 2.0 * kk));
    for (int i = 0; i < n(); ++i) {
      for (int j = i + 1; j < n(); ++j) p.add_term({i, j}, 2.0 * lambda2);
    }
    return p;
  }
};

inline void check_subset_size(const DistanceMatrix& D, int k) {
  if (k < 2 || k >= D.n()) throw std::invalid_argument("subset size k must satisfy 2 <= k < n");
}

inline double default_max_sum_lambda2(const DistanceMatrix& D, int k) {
  return static_cast<double>(binomial(k, 2)) * D.max();
}

/// Max-sum dispersion: -sum d_ij x_i x_j, plus the weight penalty if requested.
inline DispersionObjective max_sum_formulation(const DistanceMatrix& D, int k, bool penalized,
                                               std::optional<double> lambda2 = std::nullopt) {
  check_subset_size(D, k);
  DispersionObjective f;
  f.pairs = PolynomialObjective(D.n());
  for (int i = 0; i < D.n(); ++i) {
    for (int j = i + 1; j < D.n(); ++j) f.pairs.add_term({i, j}, -D(i, j));
  }
  f.k = k;
  f.penalized = penalized;
  f.lambda2 = penalized ? lambda2.value_or(default_max_sum_lambda2(D, k)) : 0.0;
  return f;
}

inline PolynomialObjective max_sum_objective(const DistanceMatrix& D, int k, bool penalized,
                                             std::optional<double> lambda2 = std::nullopt) {
  return max_sum_formulation(D, k, penalized, lambda2).to_polynomial();
}

struct Lambda1 {
  double value = 1.0;
  bool degenerate = false;  // all distances equal: any positive value works
};

inline double lambda1_numerator(int k) {
  return std::log(static_cast<double>(k)) + std::log(k + 1.0) - std::log(2.0);
}

/// Smallest exponent making (1/d)^l1 > C(k,2) (1/d')^l1 hold for every pair
/// of distinct distances d < d'. The tightest pair is an adjacent one in
/// sorted order, so only those are scanned.
inline Lambda1 compute_lambda1(const DistanceMatrix& D, int k) {
  if (k < 2) throw std::invalid_argument("subset size k must be at least 2");
  const auto v = D.distinct_values();
  if (v.front() < 1.0) throw std::invalid_argument("the lambda1 rule needs every distance >= 1");
  if (v.size() < 2) return {1.0, true};
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double gap = std::log1p((v[i + 1] - v[i]) / v[i]);
    best = std::max(best, lambda1_numerator(k) / gap);
  }
  return {best, false};
}

inline double default_max_min_lambda2(const DistanceMatrix& D, int k, double lambda1) {
  return static_cast<double>(binomial(k, 2)) * std::pow(1.0 / D.min(), lambda1);
}

/// Max-min dispersion: sum (1/d_ij)^l1 x_i x_j, plus the weight penalty if
/// requested. Requires every distance >= 1.
inline DispersionObjective max_min_formulation(const DistanceMatrix& D, int k, bool penalized,
                                               std::optional<double> lambda1 = std::nullopt,
                                               std::optional<double> lambda2 = std::nullopt) {
  check_subset_size(D, k);
  if (D.min() < 1.0) {
    throw std::invalid_argument("max-min formulation needs every distance >= 1; rank-compress the instance first");
  }
  const double l1 = lambda1 ? *lambda1 : compute_lambda1(D, k).value;
  if (!(l1 > 0.0) || !std::isfinite(l1)) throw std::invalid_argument("lambda1 must be positive and finite");
  DispersionObjective f;
  f.pairs = PolynomialObjective(D.n());
  for (int i = 0; i < D.n(); ++i) {
    for (int j = i + 1; j < D.n(); ++j) f.pairs.add_term({i, j}, std::pow(1.0 / D(i, j), l1));
  }
  f.k = k;
  f.penalized = penalized;
  f.lambda2 = penalized ? lambda2.value_or(default_max_min_lambda2(D, k, l1)) : 0.0;
  return f;
}

inline PolynomialObjective max_min_objective(const DistanceMatrix& D, int k, bool penalized,
                                             std::optional<double> lambda1 = std::nullopt,
                                             std::optional<double> lambda2 = std::nullopt) {
  return max_min_formulation(D, k, penalized, lambda1, lambda2).to_polynomial();
}

// ---------------------------------------------------------------------------
// Rank compression

struct CompressionResult {
  std::map<double, int> ranks;  // distinct distance -> dense rank from 0
  double delta = 0.0;
  int r_max = 0;
  DistanceMatrix compressed;  // entries 1 + R(d) * delta
  double lambda1 = 1.0;
  bool degenerate = false;  // single distinct distance
};

/// lambda1 for a compressed matrix: only the top two ranks matter.
inline Lambda1 compressed_lambda1(int r_max, double delta, int k) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (r_max <= 0) return {1.0, true};
  const double gap = std::log1p(delta / (1.0 + (r_max - 1) * delta));
  return {lambda1_numerator(k) / gap, false};
}

inline CompressionResult rank_compress(const DistanceMatrix& D, double delta, int k = 2) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be positive");
  CompressionResult r;
  r.delta = delta;
  const auto values = D.distinct_values();
  for (std::size_t i = 0; i < values.size(); ++i) r.ranks[values[i]] = static_cast<int>(i);
  r.r_max = static_cast<int>(values.size()) - 1;
  std::vector<double> upper;
  for (double d : D.upper_triangular()) upper.push_back(1.0 + r.ranks.at(d) * delta);
  r.compressed = DistanceMatrix::from_upper_triangular(D.n(), upper);
  const Lambda1 l1 = compressed_lambda1(r.r_max, delta, k);
  r.lambda1 = l1.value;
  r.degenerate = l1.degenerate;
  return r;
}

/// Smallest pairwise coefficient after compression, (1 + r_max delta)^-lambda1.
inline double min_coefficient(int r_max, double delta, int k) {
  if (r_max < 0) throw std::invalid_argument("r_max must be non-negative");
  const Lambda1 l1 = compressed_lambda1(r_max, delta, k);
  if (l1.degenerate) return 1.0;
  return std::exp(-l1.value * std::log1p(r_max * delta));
}

/// Limit of min_coefficient as delta -> 0: (2 / (k (k + 1)))^r_max.
inline double min_coefficient_limit(int r_max, int k) {
  return std::exp(-r_max * lambda1_numerator(k));
}

// ---------------------------------------------------------------------------
// Exhaustive baselines

struct DispersionSolution {
  Bits subset = 0;
  double metric_value = 0.0;

  bool operator==(const DispersionSolution&) const = default;
};

struct ExactResult {
  std::vector<DispersionSolution> optima;  // ascending by subset word
  double best_value = 0.0;
  bool all_optimal = false;
  std::uint64_t evaluated = 0;
};

inline constexpr std::uint64_t kDefaultSubsetLimit = 50'000'000;

inline double sum_distance(const DistanceMatrix& D, Bits x) {
  double s = 0.0;
  for (int i = 0; i < D.n(); ++i) {
    if (!test_bit(x, i)) continue;
    for (int j = i + 1; j < D.n(); ++j) {
      if (test_bit(x, j)) s += D(i, j);
    }
  }
  return s;
}

inline double min_distance(const DistanceMatrix& D, Bits x) {
  double m = INFINITY;
  for (int i = 0; i < D.n(); ++i) {
    if (!test_bit(x, i)) continue;
    for (int j = i + 1; j < D.n(); ++j) {
      if (test_bit(x, j)) m = std::min(m, D(i, j));
    }
  }
  return m;
}

namespace detail {

template <class Metric>
ExactResult exact_maximize(const DistanceMatrix& D, int k, std::uint64_t limit, double tie_tolerance,
                           Metric&& metric) {
  if (k < 2 || k > D.n()) throw std::invalid_argument("subset size k must satisfy 2 <= k <= n");
  const std::uint64_t count = binomial(D.n(), k);
  if (count > limit) {
    throw std::length_error("exhaustive search over " + std::to_string(count) +
                            " subsets exceeds the limit of " + std::to_string(limit));
  }
  ExactResult r;
  r.best_value = -INFINITY;
  const Bits last = low_mask(D.n());
  Bits x = low_mask(k);
  for (;;) {
    const double v = metric(x);
    ++r.evaluated;
    if (v > r.best_value + tie_tolerance) {
      r.best_value = v;
      r.optima.clear();
    }
    if (v >= r.best_value - tie_tolerance) r.optima.push_back({x, v});
    if (x == (last & ~low_mask(D.n() - k))) break;
    x = next_same_weight(x);
  }
  r.all_optimal = r.optima.size() == count;
  return r;
}

}  // namespace detail

/// All weight-k subsets maximizing the sum of pairwise distances.
inline ExactResult exact_max_sum(const DistanceMatrix& D, int k, std::uint64_t limit = kDefaultSubsetLimit) {
  double scale = 0.0;
  for (double d : D.upper_triangular()) scale += d;
  return detail::exact_maximize(D, k, limit, 1e-12 * scale, [&](Bits x) { return sum_distance(D, x); });
}

/// All weight-k subsets maximizing the minimum pairwise distance.
inline ExactResult exact_max_min(const DistanceMatrix& D, int k, std::uint64_t limit = kDefaultSubsetLimit) {
  return detail::exact_maximize(D, k, limit, 0.0, [&](Bits x) { return min_distance(D, x); });
}

}  // namespace gasd

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bits.hpp"

namespace gasd {

/// Either all of {0,1}^n (Hadamard preparation) or the weight-k strings
/// (Dicke preparation).
class SearchSpace {
 public:
  enum class Mode { Hadamard, Dicke };

  static SearchSpace hadamard(int n) { return SearchSpace(Mode::Hadamard, n, 0); }
  static SearchSpace dicke(int n, int k) { return SearchSpace(Mode::Dicke, n, k); }

  Mode mode() const { return mode_; }
  bool is_dicke() const { return mode_ == Mode::Dicke; }
  int n() const { return n_; }
  int k() const { return k_; }

  std::uint64_t size() const {
    return is_dicke() ? binomial(n_, k_) : std::uint64_t{1} << n_;
  }

  bool contains(Bits x) const {
    if ((x & ~low_mask(n_)) != 0) return false;
    return !is_dicke() || popcount(x) == k_;
  }

  /// Element `index` in increasing numeric order of the words.
  Bits element(std::uint64_t index) const {
    if (index >= size()) throw std::out_of_range("search space index out of range");
    if (!is_dicke()) return index;
    // Combinatorial number system: pick the largest c with C(c, r) <= index.
    Bits x = 0;
    std::uint64_t rest = index;
    int c = n_ - 1;
    for (int r = k_; r >= 1; --r) {
      while (binomial(c, r) > rest) --c;
      x |= Bits{1} << c;
      rest -= binomial(c, r);
      --c;
    }
    return x;
  }

  std::vector<Bits> elements() const {
    if (!is_dicke()) {
      std::vector<Bits> out(size());
      for (std::uint64_t i = 0; i < out.size(); ++i) out[i] = i;
      return out;
    }
    return weight_k_words(n_, k_);
  }

  std::string describe() const {
    return is_dicke() ? "dicke(" + std::to_string(n_) + "," + std::to_string(k_) + ")"
                      : "hadamard(" + std::to_string(n_) + ")";
  }

 private:
  SearchSpace(Mode mode, int n, int k) : mode_(mode), n_(n), k_(k) {
    if (n < 1 || n > 62) throw std::invalid_argument("search space needs 1 <= n <= 62");
    if (mode == Mode::Dicke && (k < 1 || k > n)) {
      throw std::invalid_argument("Dicke search space needs 1 <= k <= n");
    }
  }

  Mode mode_;
  int n_;
  int k_;
};

struct Minimum {
  double value = 0.0;
  std::vector<Bits> argmin;  // ascending
};

/// Exhaustive minimum of any `evaluate(Bits)` objective over the space, with
/// every minimizer. Values within `tolerance` of the minimum count as ties.
template <class Objective>
Minimum brute_force_minimum(const Objective& objective, const SearchSpace& space, double tolerance = 0.0) {
  const auto xs = space.elements();
  std::vector<double> values(xs.size());
  Minimum out;
  out.value = INFINITY;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    values[i] = objective.evaluate(xs[i]);
    out.value = std::min(out.value, values[i]);
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (values[i] <= out.value + tolerance) out.argmin.push_back(xs[i]);
  }
  return out;
}

}  // namespace gasd

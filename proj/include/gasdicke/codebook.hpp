#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bits.hpp"
#include "dispersion.hpp"
#include "gas.hpp"
#include "search_space.hpp"

namespace gasd {

/// Binary codewords of a fixed length, optionally of constant weight. In
/// index-modulation mode only the first 2^floor(log2 Q) codewords are viable.
struct CodeSpace {
  int length = 1;
  std::optional<int> weight;
  bool im_mode = false;

  void validate() const {
    if (length < 1 || length > 62) throw std::invalid_argument("codeword length must lie in [1, 62]");
    if (weight && (*weight < 0 || *weight > length)) {
      throw std::invalid_argument("codeword weight must lie in [0, length]");
    }
  }

  /// Q: number of binary (or constant-weight) strings.
  std::uint64_t full_size() const {
    validate();
    return weight ? binomial(length, *weight) : std::uint64_t{1} << length;
  }

  /// Q, or 2^floor(log2 Q) in index-modulation mode.
  std::uint64_t size() const {
    const std::uint64_t q = full_size();
    return im_mode ? std::bit_floor(q) : q;
  }
};

inline constexpr std::uint64_t kMaxEnumeratedCodewords = std::uint64_t{1} << 20;

/// Codewords in lexicographic order of their strings (character j is bit j).
inline std::vector<Bits> enumerate_codewords(const CodeSpace& space,
                                             std::uint64_t limit = kMaxEnumeratedCodewords) {
  const std::uint64_t q = space.full_size();
  if (q > limit) {
    throw std::length_error("code space of " + std::to_string(q) + " words exceeds the enumeration limit");
  }
  std::vector<Bits> words;
  if (space.weight) {
    words = weight_k_words(space.length, *space.weight);
  } else {
    words.resize(q);
    for (std::uint64_t i = 0; i < q; ++i) words[i] = i;
  }
  // Reversing the bit order turns string order into numeric order.
  auto key = [&](Bits x) {
    Bits r = 0;
    for (int j = 0; j < space.length; ++j) {
      if (test_bit(x, j)) r |= Bits{1} << (space.length - 1 - j);
    }
    return r;
  };
  std::sort(words.begin(), words.end(), [&](Bits a, Bits b) { return key(a) < key(b); });
  words.resize(space.size());
  return words;
}

inline int hamming_distance(Bits a, Bits b) { return popcount(a ^ b); }

inline DistanceMatrix hamming_matrix(const std::vector<Bits>& codewords) {
  const int q = static_cast<int>(codewords.size());
  std::vector<double> upper;
  upper.reserve(static_cast<std::size_t>(q) * (q > 0 ? q - 1 : 0) / 2);
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      const int d = hamming_distance(codewords[i], codewords[j]);
      if (d == 0) throw std::invalid_argument("codewords must be pairwise distinct");
      upper.push_back(d);
    }
  }
  return DistanceMatrix::from_upper_triangular(q, upper);
}

struct Codebook {
  int length = 0;
  std::vector<Bits> codewords;
  int min_distance = 0;

  std::vector<std::string> strings() const {
    std::vector<std::string> out;
    for (Bits c : codewords) out.push_back(to_bitstring(c, length));
    return out;
  }
};

inline int codebook_min_distance(const std::vector<Bits>& codewords) {
  int best = INT32_MAX;
  for (std::size_t i = 0; i < codewords.size(); ++i) {
    for (std::size_t j = i + 1; j < codewords.size(); ++j) {
      best = std::min(best, hamming_distance(codewords[i], codewords[j]));
    }
  }
  return best;
}

enum class CodebookSolverKind { Exact, Gas };

struct CodebookSolver {
  CodebookSolverKind kind = CodebookSolverKind::Exact;
  GasConfig gas;  // used by the GAS solver
};

/// Picks K codewords maximizing the minimum pairwise Hamming distance, either
/// exhaustively or with GAS on the max-min formulation over a Dicke space.
inline Codebook design_codebook(const CodeSpace& space, int K, const CodebookSolver& solver = {}) {
  const auto words = enumerate_codewords(space);
  const auto q = static_cast<std::int64_t>(words.size());
  if (K < 2 || K > q) {
    throw std::invalid_argument("codebook size K=" + std::to_string(K) + " infeasible for " +
                                std::to_string(q) + " viable codewords");
  }
  if (q > 62) throw std::length_error("more than 62 viable codewords; the dispersion solvers cap n at 62");

  Codebook out;
  out.length = space.length;
  Bits chosen = 0;
  if (K == q) {
    chosen = low_mask(static_cast<int>(q));
  } else {
    const DistanceMatrix D = hamming_matrix(words);
    if (solver.kind == CodebookSolverKind::Exact) {
      chosen = exact_max_min(D, K).optima.front().subset;
    } else {
      const auto f = max_min_formulation(D, K, false);
      chosen = run_gas(f, SearchSpace::dicke(D.n(), K), solver.gas).best;
    }
  }
  for (int i : set_bits(chosen)) out.codewords.push_back(words[static_cast<std::size_t>(i)]);
  out.min_distance = codebook_min_distance(out.codewords);
  return out;
}

}  // namespace gasd

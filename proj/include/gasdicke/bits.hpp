#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gasd {

/// A binary assignment x = (x_0, ..., x_{n-1}); bit j of the word holds x_j.
using Bits = std::uint64_t;

inline constexpr int kMaxVariables = 64;

inline int popcount(Bits x) { return std::popcount(x); }

inline bool test_bit(Bits x, int j) { return ((x >> j) & 1U) != 0; }

inline Bits low_mask(int n) {
  return n >= 64 ? ~Bits{0} : ((Bits{1} << n) - 1);
}

/// Renders x as "x_0 x_1 ... x_{n-1}" (leftmost character is variable 0).
inline std::string to_bitstring(Bits x, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int j = 0; j < n; ++j) {
    if (test_bit(x, j)) s[static_cast<std::size_t>(j)] = '1';
  }
  return s;
}

inline Bits from_bitstring(std::string_view s) {
  if (s.size() > static_cast<std::size_t>(kMaxVariables)) {
    throw std::invalid_argument("bitstring longer than 64 characters");
  }
  Bits x = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] == '1') {
      x |= Bits{1} << j;
    } else if (s[j] != '0') {
      throw std::invalid_argument("bitstring may only contain '0' and '1'");
    }
  }
  return x;
}

inline std::vector<int> set_bits(Bits x) {
  std::vector<int> out;
  while (x != 0) {
    out.push_back(std::countr_zero(x));
    x &= x - 1;
  }
  return out;
}

/// Exact binomial coefficient; throws on 64-bit overflow.
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  __extension__ unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > UINT64_MAX) throw std::overflow_error("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

inline double log_binomial(int n, int k) {
  if (k < 0 || k > n) return -INFINITY;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Next larger word with the same popcount (Gosper's hack).
inline Bits next_same_weight(Bits x) {
  const Bits c = x & (~x + 1);
  const Bits r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

/// All n-bit words of weight k in increasing numeric order.
inline std::vector<Bits> weight_k_words(int n, int k) {
  if (n < 0 || n > 63 || k < 0 || k > n) {
    throw std::invalid_argument("weight_k_words: need 0 <= k <= n <= 63");
  }
  std::vector<Bits> out;
  out.reserve(static_cast<std::size_t>(binomial(n, k)));
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  const Bits limit = Bits{1} << n;
  for (Bits x = low_mask(k); x < limit; x = next_same_weight(x)) out.push_back(x);
  return out;
}

}  // namespace gasd

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bits.hpp"
#include "circuit.hpp"

namespace gasd {

struct DickeSpec {
  int n = 1;
  int k = 1;

  void validate() const {
    if (n < 1 || n > 63 || k < 1 || k > n) {
      throw std::invalid_argument("Dicke spec needs 1 <= k <= n <= 63");
    }
  }
};

// Conventions: a weight-l "unary" input |1^l 0^{n-l}> has qubits 0..l-1 set.

namespace detail {

// Split-and-cyclic-shift on the first p "positions" of a block, positions
// numbered 1..s with position p mapped to qubit base + s - p. It moves the
// excitation at position p to the first empty position with amplitude
// sqrt((p-l)/p), where l <= w is the unary weight ending at position p.
inline void append_scs(Circuit& c, int base, int s, int p, int w) {
  auto q = [&](int pos) { return base + s - pos; };
  {
    const double angle = 2.0 * std::acos(std::sqrt(1.0 / p));
    c.add(make_x(q(p), {q(p - 1)}));
    c.add(make_ry(q(p - 1), angle, {q(p)}));
    c.add(make_x(q(p), {q(p - 1)}));
  }
  for (int l = 2; l <= w; ++l) {
    const double angle = 2.0 * std::acos(std::sqrt(static_cast<double>(l) / p));
    c.add(make_x(q(p), {q(p - l)}));
    c.add(make_ry(q(p - l), angle, {q(p), q(p - l + 1)}));
    c.add(make_x(q(p), {q(p - l)}));
  }
}

inline void append_dicke_unitary(Circuit& c, int base, int s, int k) {
  for (int p = s; p >= 2; --p) append_scs(c, base, s, p, std::min(k, p - 1));
}

// Probability that `hits` of the l unary excitations land in the second block
// (size m) of an s-qubit register, i.e. the hypergeometric split weight.
inline double split_probability(int s, int m, int l, int hits) {
  if (hits < 0 || hits > l || hits > m || l - hits > s - m) return 0.0;
  return std::exp(log_binomial(m, hits) + log_binomial(s - m, l - hits) - log_binomial(s, l));
}

inline void append_wdb(Circuit& c, int base, int s, int m, int w) {
  const int a = s - m;
  const int steps = std::min(w, m);
  auto first = [&](int j) { return base + j; };
  auto second = [&](int t) { return base + a + t; };

  // Phase 1: unary count i of excitations destined for the second block.
  // Rotations on the same target add up along the ladder controlled by the
  // first block's unary weight, so input weight l sees the sum of the first l.
  for (int t = 0; t < steps; ++t) {
    double prev = 0.0;
    for (int j = 0; j < w; ++j) {
      const int l = j + 1;
      double angle = 0.0;
      if (l > t) {
        double tail_t = 0.0, tail_next = 0.0;
        for (int i = t; i <= l; ++i) tail_t += split_probability(s, m, l, i);
        for (int i = t + 1; i <= l; ++i) tail_next += split_probability(s, m, l, i);
        const double q = tail_t > 0.0 ? std::clamp(tail_next / tail_t, 0.0, 1.0) : 0.0;
        angle = 2.0 * std::asin(std::sqrt(q));
      }
      const double step = angle - prev;
      prev = angle;
      if (std::abs(step) < 1e-15) continue;
      std::vector<int> controls{first(j)};
      if (t > 0) controls.push_back(second(t - 1));
      c.add(make_ry(second(t), step, std::move(controls)));
    }
  }

  // Phase 2: each set count bit removes the top excitation of the first block
  // (controlled cyclic shift of the first w qubits, then clear the wrapped bit).
  for (int t = 0; t < steps; ++t) {
    const int ctrl = second(t);
    for (int j = 0; j + 1 < w; ++j) {
      const int lo = first(j), hi = first(j + 1);
      c.add(make_x(lo, {hi}));
      c.add(make_x(hi, {ctrl, lo}));
      c.add(make_x(lo, {hi}));
    }
    c.add(make_x(first(w - 1), {ctrl}));
  }
}

inline void append_dicke_tree(Circuit& c, int base, int s, int k) {
  const int w = std::min(k, s);
  if (s <= k) {
    append_dicke_unitary(c, base, s, s);
    return;
  }
  const int m = std::min(s / 2, s - w);
  append_wdb(c, base, s, m, w);
  append_dicke_tree(c, base, s - m, w);
  append_dicke_tree(c, base + s - m, m, std::min(w, m));
}

}  // namespace detail

/// Dicke-state unitary on n qubits: |1^l 0^{n-l}> -> |D^n_l> for every l <= k.
inline Circuit build_dicke_unitary(int n, int k) {
  DickeSpec{n, k}.validate();
  Circuit c(n);
  detail::append_dicke_unitary(c, 0, n, k);
  return c;
}

/// Weight distribution block on n qubits. The first n - m_split qubits form
/// block A, the rest block B. For l <= k it maps |1^l 0^{n-l}> to
/// sum_i sqrt(C(m,i) C(n-m,l-i) / C(n,l)) |1^{l-i} 0..>_A |1^i 0..>_B.
inline Circuit build_wdb(int n, int m_split, int k) {
  if (n < 2 || n > 63 || m_split < 1 || m_split >= n) {
    throw std::invalid_argument("weight distribution block needs 1 <= m_split < n");
  }
  if (k < 1 || k > n - m_split) {
    throw std::invalid_argument("weight distribution block needs 1 <= k <= n - m_split");
  }
  Circuit c(n);
  detail::append_wdb(c, 0, n, m_split, k);
  return c;
}

/// |0>_n -> |D^n_k>: X gates for the unary input, a halving tree of weight
/// distribution blocks, then Dicke unitaries on the leaf blocks.
inline Circuit build_dicke_prep(const DickeSpec& spec) {
  spec.validate();
  Circuit c(spec.n);
  for (int j = 0; j < spec.k; ++j) c.add(make_x(j));
  detail::append_dicke_tree(c, 0, spec.n, spec.k);
  return c;
}

/// Gate counts keyed by family and control count ("H", "CX", "CCR", "C3Z", ...).
/// RotY gates share the R family with phase gates.
struct GateCensus {
  std::map<std::string, std::size_t> counts;

  std::size_t operator[](const std::string& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0 : it->second;
  }

  std::size_t total() const {
    std::size_t t = 0;
    for (const auto& [_, v] : counts) t += v;
    return t;
  }
};

inline std::string census_bucket(const Gate& g) {
  std::string family;
  switch (g.kind) {
    case GateKind::H: family = "H"; break;
    case GateKind::X: family = "X"; break;
    case GateKind::Z: family = "Z"; break;
    case GateKind::PhaseR:
    case GateKind::RotY: family = "R"; break;
  }
  const std::size_t nc = g.controls.size();
  if (nc == 0) return family;
  if (nc == 1) return "C" + family;
  if (nc == 2) return "CC" + family;
  return "C" + std::to_string(nc) + family;
}

inline GateCensus census(const Circuit& c) {
  GateCensus out;
  for (const Gate& g : c) ++out.counts[census_bucket(g)];
  return out;
}

}  // namespace gasd

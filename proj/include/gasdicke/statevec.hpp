#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bits.hpp"
#include "circuit.hpp"
#include "random.hpp"

namespace gasd {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultQubitCap = 26;

/// Dense 2^q amplitude vector; index bit j is qubit j.
class StateVector {
 public:
  explicit StateVector(int qubit_count, int qubit_cap = kDefaultQubitCap) : qubit_count_(qubit_count) {
    if (qubit_count < 1) throw std::invalid_argument("state needs at least one qubit");
    if (qubit_count > qubit_cap) {
      throw std::length_error("state of " + std::to_string(qubit_count) +
                              " qubits exceeds the simulator cap of " + std::to_string(qubit_cap));
    }
    amps_.assign(std::size_t{1} << qubit_count, Amplitude{0.0, 0.0});
    amps_[0] = 1.0;
  }

  static StateVector basis(int qubit_count, std::uint64_t index, int qubit_cap = kDefaultQubitCap) {
    StateVector s(qubit_count, qubit_cap);
    if (index >= s.dimension()) throw std::out_of_range("basis index out of range");
    s.amps_[0] = 0.0;
    s.amps_[index] = 1.0;
    return s;
  }

  int qubit_count() const { return qubit_count_; }
  std::size_t dimension() const { return amps_.size(); }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }
  std::vector<Amplitude>& amplitudes() { return amps_; }
  Amplitude operator[](std::size_t i) const { return amps_[i]; }
  Amplitude& operator[](std::size_t i) { return amps_[i]; }

  double norm_squared() const {
    double sum = 0.0, comp = 0.0;
    for (const auto& a : amps_) {
      const double v = std::norm(a);
      const double t = sum + v;
      comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
      sum = t;
    }
    return sum + comp;
  }

 private:
  int qubit_count_;
  std::vector<Amplitude> amps_;
};

struct RunOptions {
  /// Worker threads for gate application; the result does not depend on it.
  int workers = 1;
};

namespace detail {

struct Matrix2 {
  Amplitude a00, a01, a10, a11;
};

inline Matrix2 gate_matrix(const Gate& g) {
  const double s = std::numbers::sqrt2 / 2.0;
  switch (g.kind) {
    case GateKind::H: return {s, s, s, -s};
    case GateKind::X: return {0.0, 1.0, 1.0, 0.0};
    case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
    case GateKind::PhaseR: return {1.0, 0.0, 0.0, std::polar(1.0, g.angle)};
    case GateKind::RotY: {
      const double c = std::cos(g.angle / 2.0), sn = std::sin(g.angle / 2.0);
      return {c, -sn, sn, c};
    }
  }
  return {1.0, 0.0, 0.0, 1.0};
}

// Inserts a zero bit at position `bit` of `v`.
inline std::uint64_t insert_zero(std::uint64_t v, int bit) {
  const std::uint64_t low = v & ((std::uint64_t{1} << bit) - 1);
  return ((v >> bit) << (bit + 1)) | low;
}

template <class Body>
void parallel_range(std::uint64_t count, int workers, Body&& body) {
  if (workers <= 1 || count < (std::uint64_t{1} << 14)) {
    body(std::uint64_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + static_cast<std::uint64_t>(workers) - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::uint64_t lo = chunk * static_cast<std::uint64_t>(w);
    const std::uint64_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Applies one gate in place. Only amplitude pairs differing in the target bit
/// (with all control bits set) are touched.
inline void apply_gate(StateVector& state, const Gate& g, const RunOptions& opts = {}) {
  if (g.target >= state.qubit_count()) throw std::invalid_argument("gate target outside state");
  std::uint64_t cmask = 0;
  for (int c : g.controls) {
    if (c >= state.qubit_count()) throw std::invalid_argument("gate control outside state");
    cmask |= std::uint64_t{1} << c;
  }
  const auto m = detail::gate_matrix(g);
  const std::uint64_t tbit = std::uint64_t{1} << g.target;
  auto& amps = state.amplitudes();
  const std::uint64_t pairs = state.dimension() / 2;
  const bool diagonal = g.kind == GateKind::Z || g.kind == GateKind::PhaseR;

  detail::parallel_range(pairs, opts.workers, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t p = lo; p < hi; ++p) {
      const std::uint64_t i0 = detail::insert_zero(p, g.target);
      if ((i0 & cmask) != cmask) continue;
      const std::uint64_t i1 = i0 | tbit;
      if (diagonal) {
        amps[i1] *= m.a11;
      } else {
        const Amplitude x0 = amps[i0], x1 = amps[i1];
        amps[i0] = m.a00 * x0 + m.a01 * x1;
        amps[i1] = m.a10 * x0 + m.a11 * x1;
      }
    }
  });
}

inline void run_in_place(const Circuit& circuit, StateVector& state, const RunOptions& opts = {}) {
  if (circuit.qubit_count() != state.qubit_count()) {
    throw std::invalid_argument("circuit and state qubit counts differ");
  }
  for (const Gate& g : circuit) apply_gate(state, g, opts);
}

inline StateVector run(const Circuit& circuit, StateVector initial, const RunOptions& opts = {}) {
  run_in_place(circuit, initial, opts);
  return initial;
}

inline StateVector run(const Circuit& circuit, const RunOptions& opts = {},
                       int qubit_cap = kDefaultQubitCap) {
  StateVector s(circuit.qubit_count(), qubit_cap);
  run_in_place(circuit, s, opts);
  return s;
}

/// Sum of |amplitude|^2 over indices accepted by `pred`, compensated.
inline double probability_of(const StateVector& state,
                             const std::function<bool(std::uint64_t)>& pred) {
  double sum = 0.0, comp = 0.0;
  const auto& amps = state.amplitudes();
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    if (!pred(i)) continue;
    const double v = std::norm(amps[i]);
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  return std::clamp(sum + comp, 0.0, 1.0);
}

/// Repeated basis-state sampling from a fixed state.
class BasisSampler {
 public:
  explicit BasisSampler(const StateVector& state) {
    cumulative_.resize(state.dimension());
    double acc = 0.0;
    for (std::size_t i = 0; i < cumulative_.size(); ++i) {
      acc += std::norm(state[i]);
      cumulative_[i] = acc;
    }
    total_ = acc;
  }

  std::uint64_t sample(Rng& rng) const {
    const double u = uniform01(rng) * total_;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    // upper_bound never lands on a zero-probability entry.
    if (it == cumulative_.end()) --it;
    return static_cast<std::uint64_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
  double total_ = 0.0;
};

/// One projective measurement of every qubit; returns the basis index.
inline std::uint64_t measure_all(const StateVector& state, Rng& rng) {
  return BasisSampler(state).sample(rng);
}

/// Probabilities of the low `n` qubits, marginalised over the rest.
inline std::vector<double> low_marginal(const StateVector& state, int n) {
  if (n < 0 || n > state.qubit_count()) throw std::invalid_argument("marginal width out of range");
  std::vector<double> p(std::size_t{1} << n, 0.0);
  const std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t i = 0; i < state.dimension(); ++i) p[i & mask] += std::norm(state[i]);
  return p;
}

/// CSV dump (index,re,im). A positive `threshold` keeps only amplitudes with larger modulus.
inline void write_csv(const StateVector& state, std::ostream& os, double threshold = 0.0) {
  os << "index,re,im\n";
  char buf[96];
  for (std::uint64_t i = 0; i < state.dimension(); ++i) {
    const auto a = state[i];
    if (threshold > 0.0 && std::abs(a) <= threshold) continue;
    std::snprintf(buf, sizeof buf, "%llu,%.17g,%.17g\n", static_cast<unsigned long long>(i),
                  a.real(), a.imag());
    os << buf;
  }
}

}  // namespace gasd

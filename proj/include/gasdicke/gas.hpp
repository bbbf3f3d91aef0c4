#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "bits.hpp"
#include "gas_circuit.hpp"
#include "objective.hpp"
#include "random.hpp"
#include "search_space.hpp"
#include "statevec.hpp"

namespace gasd {

/// Anything evaluable on a binary assignment.
template <class T>
concept BinaryObjective = requires(const T& obj, Bits x) {
  { obj.evaluate(x) } -> std::convertible_to<double>;
  { obj.n() } -> std::convertible_to<int>;
};

enum class Backend { Analytic, GateLevel };

inline const char* backend_name(Backend b) { return b == Backend::Analytic ? "analytic" : "gate"; }

inline Backend parse_backend(const std::string& s) {
  if (s == "analytic") return Backend::Analytic;
  if (s == "gate" || s == "gate-level") return Backend::GateLevel;
  throw std::invalid_argument("unknown backend '" + s + "' (expected gate or analytic)");
}

struct GasConfig {
  double lambda_growth = 8.0 / 7.0;
  Backend backend = Backend::Analytic;
  std::optional<double> target_value;      // stop once best <= target
  std::uint64_t max_quantum_queries = 10000;  // QD budget; 0 disables
  std::uint64_t max_classical_queries = 1000000;  // CD budget; 0 disables
  std::uint64_t max_consecutive_failures = 0;  // 0 disables
  std::uint64_t seed = 1;
  double quantize_error = 1e-4;  // gate-level backend only: per-coefficient relative rounding error
  int qubit_cap = kDefaultQubitCap;

  void validate() const {
    if (!(lambda_growth > 1.0)) throw std::invalid_argument("lambda_growth must exceed 1");
    if (max_quantum_queries == 0 && max_classical_queries == 0 && max_consecutive_failures == 0 &&
        !target_value) {
      throw std::invalid_argument("GAS needs at least one termination condition");
    }
  }
};

struct QueryCounters {
  std::uint64_t qd = 0;  // cumulative Grover iterations, sum of L_i
  std::uint64_t cd = 0;  // measurements
};

struct GasEvent {
  std::uint64_t qd = 0;
  std::uint64_t cd = 0;
  double y = 0.0;  // threshold after the event
  bool improved = false;
  std::uint64_t rotations = 0;  // L_i
};

struct GasTrace {
  std::vector<GasEvent> events;
};

struct GasResult {
  Bits best = 0;
  double best_value = 0.0;
  GasTrace trace;
  QueryCounters counters;
  bool reached_target = false;
  std::string stop_reason;
};

/// L drawn uniformly from {0, ..., ceil(k - 1)}.
inline std::uint64_t sample_rotation_count(double k, Rng& rng) {
  if (!(k >= 1.0)) throw std::invalid_argument("rotation scale k must be at least 1");
  const auto top = static_cast<std::uint64_t>(std::ceil(k - 1.0 - 1e-12));
  return uniform_below(rng, top + 1);
}

inline double grow_rotation_scale(double k, double lambda, std::uint64_t space_size) {
  return std::min(lambda * k, std::sqrt(static_cast<double>(space_size)));
}

/// Probability that an ideal amplitude-amplification run with t of N marked
/// states returns a marked state after L iterations.
inline double amplified_probability(std::uint64_t t, std::uint64_t n, std::uint64_t L) {
  if (t == 0) return 0.0;
  if (t == n) return 1.0;
  const double theta = std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(n)));
  const double s = std::sin((2.0 * static_cast<double>(L) + 1.0) * theta);
  return s * s;
}

/// Ideal-circuit measurement model. Sorts the space by objective value once;
/// each measurement then counts marked states (E < y) by binary search.
class AnalyticSampler {
 public:
  template <BinaryObjective Obj>
  AnalyticSampler(const Obj& objective, const SearchSpace& space) {
    if (objective.n() != space.n()) throw std::invalid_argument("objective and space sizes differ");
    const auto xs = space.elements();
    std::vector<std::pair<double, Bits>> rows;
    rows.reserve(xs.size());
    for (Bits x : xs) rows.emplace_back(static_cast<double>(objective.evaluate(x)), x);
    std::sort(rows.begin(), rows.end());
    values_.reserve(rows.size());
    elements_.reserve(rows.size());
    for (const auto& [v, x] : rows) {
      values_.push_back(v);
      elements_.push_back(x);
    }
  }

  std::uint64_t size() const { return values_.size(); }
  double min_value() const { return values_.front(); }

  std::uint64_t marked_count(double y) const {
    return static_cast<std::uint64_t>(std::lower_bound(values_.begin(), values_.end(), y) -
                                      values_.begin());
  }

  double marked_probability(double y, std::uint64_t L) const {
    return amplified_probability(marked_count(y), size(), L);
  }

  Bits measure(double y, std::uint64_t L, Rng& rng) const {
    const std::uint64_t t = marked_count(y);
    const std::uint64_t n = size();
    if (t == 0) return elements_[uniform_below(rng, n)];
    const double p = amplified_probability(t, n, L);
    if (t == n || uniform01(rng) < p) return elements_[uniform_below(rng, t)];
    return elements_[t + uniform_below(rng, n - t)];
  }

  /// Exact outcome distribution keyed by element, in the sampler's order.
  std::vector<std::pair<Bits, double>> distribution(double y, std::uint64_t L) const {
    const std::uint64_t t = marked_count(y), n = size();
    std::vector<std::pair<Bits, double>> out;
    out.reserve(n);
    const double p = amplified_probability(t, n, L);
    for (std::uint64_t i = 0; i < n; ++i) {
      double q;
      if (t == 0) {
        q = 1.0 / static_cast<double>(n);
      } else if (i < t) {
        q = p / static_cast<double>(t);
      } else {
        q = (1.0 - p) / static_cast<double>(n - t);
      }
      out.emplace_back(elements_[i], q);
    }
    return out;
  }

 private:
  std::vector<double> values_;
  std::vector<Bits> elements_;
};

template <BinaryObjective Obj>
Bits measure_analytic(const Obj& objective, double y, std::uint64_t L, const SearchSpace& space,
                      Rng& rng) {
  return AnalyticSampler(objective, space).measure(y, L, rng);
}

/// Gate-level measurement: simulates G^L A_y |0> and samples the data qubits.
class GateLevelSampler {
 public:
  GateLevelSampler(const PolynomialObjective& integer_objective, double y, std::uint64_t L,
                   const SearchSpace& space, std::optional<int> register_size = std::nullopt,
                   int qubit_cap = kDefaultQubitCap, RunOptions opts = {})
      : n_(integer_objective.n()),
        m_(register_size ? *register_size : required_register_size(integer_objective, y)),
        state_(1) {
    if (n_ + m_ > qubit_cap) {
      throw std::length_error("gate-level backend needs " + std::to_string(n_ + m_) +
                              " qubits, above the cap of " + std::to_string(qubit_cap) +
                              "; use the analytic backend");
    }
    const Circuit prep = build_state_prep(integer_objective, y, space, m_);
    const Circuit grover = build_grover_operator(prep, m_);
    state_ = run(prep, opts, qubit_cap);
    for (std::uint64_t i = 0; i < L; ++i) run_in_place(grover, state_, opts);
    sampler_.emplace(state_);
  }

  int register_size() const { return m_; }
  const StateVector& state() const { return state_; }

  Bits measure(Rng& rng) const { return sampler_->sample(rng) & low_mask(n_); }

  std::vector<double> distribution() const { return low_marginal(state_, n_); }

 private:
  int n_;
  int m_;
  StateVector state_;
  std::optional<BasisSampler> sampler_;
};

inline Bits measure_gate_level(const EncodedObjective& objective, double y, std::uint64_t L,
                               const SearchSpace& space, Rng& rng, int qubit_cap = kDefaultQubitCap) {
  return GateLevelSampler(objective.base, y, L, space, std::nullopt, qubit_cap).measure(rng);
}

/// The adaptive search loop. `evaluate(x)` scores a measured assignment and
/// `measure(best_x, best_value, L, rng)` returns one measurement of
/// G^L A_y |0> with the threshold y set by the incumbent.
template <class Evaluate, class Measure>
GasResult run_gas_loop(const SearchSpace& space, const GasConfig& cfg, Evaluate&& evaluate,
                       Measure&& measure) {
  cfg.validate();
  Rng rng(cfg.seed);
  const std::uint64_t N = space.size();
  GasResult res;

  res.best = space.element(uniform_below(rng, N));
  res.best_value = evaluate(res.best);
  res.counters.cd = 1;
  res.trace.events.push_back({0, 1, res.best_value, true, 0});

  auto target_hit = [&] { return cfg.target_value && res.best_value <= *cfg.target_value; };
  if (target_hit()) {
    res.reached_target = true;
    res.stop_reason = "target";
    return res;
  }
  if (N == 1) {
    res.stop_reason = "exhausted";
    return res;
  }

  double k = 1.0;
  std::uint64_t failures = 0;
  for (;;) {
    const std::uint64_t L = sample_rotation_count(k, rng);
    const Bits x = measure(res.best, res.best_value, L, rng);
    res.counters.qd += L;
    res.counters.cd += 1;
    const double v = evaluate(x);
    const bool improved = v < res.best_value;
    if (improved) {
      res.best = x;
      res.best_value = v;
      k = 1.0;
      failures = 0;
    } else {
      k = grow_rotation_scale(k, cfg.lambda_growth, N);
      ++failures;
    }
    res.trace.events.push_back({res.counters.qd, res.counters.cd, res.best_value, improved, L});

    if (target_hit()) {
      res.reached_target = true;
      res.stop_reason = "target";
      break;
    }
    if (cfg.max_quantum_queries && res.counters.qd >= cfg.max_quantum_queries) {
      res.stop_reason = "qd-budget";
      break;
    }
    if (cfg.max_classical_queries && res.counters.cd >= cfg.max_classical_queries) {
      res.stop_reason = "cd-budget";
      break;
    }
    if (cfg.max_consecutive_failures && failures >= cfg.max_consecutive_failures) {
      res.stop_reason = "failures";
      break;
    }
  }
  return res;
}

/// GAS over `space`. The analytic backend works for any objective; the
/// gate-level backend needs a polynomial form (directly or via
/// `to_polynomial()`), which it quantizes to integers for the circuit.
/// Measured candidates are always scored with `objective.evaluate`.
template <BinaryObjective Obj>
GasResult run_gas(const Obj& objective, const SearchSpace& space, const GasConfig& cfg) {
  if (objective.n() != space.n()) throw std::invalid_argument("objective and space sizes differ");
  auto eval = [&](Bits x) { return static_cast<double>(objective.evaluate(x)); };
  if (cfg.backend == Backend::GateLevel) {
    PolynomialObjective poly;
    if constexpr (std::is_same_v<Obj, PolynomialObjective>) {
      poly = objective;
    } else if constexpr (requires { { objective.to_polynomial() } -> std::same_as<PolynomialObjective>; }) {
      poly = objective.to_polynomial();
    } else {
      throw std::invalid_argument("the gate-level backend needs a polynomial objective");
    }
    const EncodedObjective enc = quantize(poly, cfg.quantize_error);
    auto meas = [&](Bits best, double, std::uint64_t L, Rng& rng) {
      const double y = enc.base.evaluate(best);
      return GateLevelSampler(enc.base, y, L, space, std::nullopt, cfg.qubit_cap).measure(rng);
    };
    return run_gas_loop(space, cfg, eval, meas);
  }
  const AnalyticSampler sampler(objective, space);
  auto meas = [&](Bits, double y, std::uint64_t L, Rng& rng) { return sampler.measure(y, L, rng); };
  return run_gas_loop(space, cfg, eval, meas);
}

inline void write_trace_csv_header(std::ostream& os) { os << "run_id,event_index,qd,cd,y,improved,L\n"; }

inline void write_trace_csv(const GasTrace& trace, std::ostream& os, std::uint64_t run_id = 0,
                            bool header = true) {
  if (header) write_trace_csv_header(os);
  char buf[160];
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    const auto& e = trace.events[i];
    std::snprintf(buf, sizeof buf, "%llu,%zu,%llu,%llu,%.17g,%d,%llu\n",
                  static_cast<unsigned long long>(run_id), i, static_cast<unsigned long long>(e.qd),
                  static_cast<unsigned long long>(e.cd), e.y, e.improved ? 1 : 0,
                  static_cast<unsigned long long>(e.rotations));
    os << buf;
  }
}

}  // namespace gasd

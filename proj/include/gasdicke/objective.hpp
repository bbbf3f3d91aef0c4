#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bits.hpp"

namespace gasd {

/// coefficient * prod_{v in vars} x_v, with vars sorted and distinct.
struct Monomial {
  std::vector<int> vars;
  double coefficient = 0.0;

  Bits mask() const {
    Bits m = 0;
    for (int v : vars) m |= Bits{1} << v;
    return m;
  }

  bool operator==(const Monomial&) const = default;
};

/// Multilinear polynomial over n binary variables. Terms with equal variable
/// sets are merged (x^2 = x), and terms are kept in lexicographic order of
/// their variable lists.
class PolynomialObjective {
 public:
  PolynomialObjective() = default;

  explicit PolynomialObjective(int n, double constant = 0.0) : n_(n), constant_(constant) {
    if (n < 0 || n > kMaxVariables) throw std::invalid_argument("variable count must lie in [0, 64]");
    if (!std::isfinite(constant)) throw std::invalid_argument("constant must be finite");
  }

  PolynomialObjective(int n, const std::vector<Monomial>& terms, double constant = 0.0)
      : PolynomialObjective(n, constant) {
    for (const auto& t : terms) add_term(t.vars, t.coefficient);
  }

  /// Adds coefficient * prod x_v. Repeated variables collapse; an empty
  /// variable list adds to the constant.
  PolynomialObjective& add_term(std::vector<int> vars, double coefficient) {
    if (!std::isfinite(coefficient)) throw std::invalid_argument("term coefficient must be finite");
    for (int v : vars) {
      if (v < 0 || v >= n_) throw std::invalid_argument("term variable out of range");
    }
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (vars.empty()) {
      constant_ += coefficient;
      return *this;
    }
    auto it = std::lower_bound(terms_.begin(), terms_.end(), vars,
                               [](const Monomial& m, const std::vector<int>& v) { return m.vars < v; });
    if (it != terms_.end() && it->vars == vars) {
      it->coefficient += coefficient;
    } else {
      terms_.insert(it, Monomial{std::move(vars), coefficient});
    }
    return *this;
  }

  PolynomialObjective& add_constant(double c) {
    if (!std::isfinite(c)) throw std::invalid_argument("constant must be finite");
    constant_ += c;
    return *this;
  }

  int n() const { return n_; }
  double constant() const { return constant_; }
  const std::vector<Monomial>& terms() const { return terms_; }

  double evaluate(Bits x) const {
    double e = constant_;
    for (const auto& t : terms_) {
      const Bits m = t.mask();
      if ((x & m) == m) e += t.coefficient;
    }
    return e;
  }

  double evaluate(const std::string& bits) const {
    if (static_cast<int>(bits.size()) != n_) {
      throw std::invalid_argument("assignment length does not match variable count");
    }
    return evaluate(from_bitstring(bits));
  }

  bool has_integer_coefficients() const {
    auto integral = [](double c) { return std::nearbyint(c) == c; };
    if (!integral(constant_)) return false;
    return std::all_of(terms_.begin(), terms_.end(),
                       [&](const Monomial& t) { return integral(t.coefficient); });
  }

  bool operator==(const PolynomialObjective&) const = default;

 private:
  int n_ = 0;
  std::vector<Monomial> terms_;
  double constant_ = 0.0;
};

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Interval bounds from coefficient signs; brackets E over all of {0,1}^n.
inline Bounds safe_bounds(const PolynomialObjective& obj) {
  Bounds b{obj.constant(), obj.constant()};
  for (const auto& t : obj.terms()) {
    b.lower += std::min(0.0, t.coefficient);
    b.upper += std::max(0.0, t.coefficient);
  }
  return b;
}

inline constexpr int kMaxRegisterQubits = 62;

/// Smallest m with -2^{m-1} <= lower - y and upper - y < 2^{m-1}.
inline int register_size_for(Bounds b, double y = 0.0) {
  const double lo = b.lower - y, hi = b.upper - y;
  for (int m = 1; m <= kMaxRegisterQubits; ++m) {
    const double half = std::ldexp(1.0, m - 1);
    if (-half <= lo && hi < half) return m;
  }
  throw std::overflow_error("objective range needs more than 62 register qubits");
}

inline int required_register_size(const PolynomialObjective& obj, double y = 0.0) {
  return register_size_for(safe_bounds(obj), y);
}

/// Integer-coefficient version of a real objective: base ~ scale * original.
struct EncodedObjective {
  PolynomialObjective base;
  double scale = 1.0;  // power of two
  int m = 1;

  double to_original(double scaled_value) const { return scaled_value / scale; }
};

struct QuantizeOptions {
  int max_register_qubits = 32;
  int max_scale_exponent = 52;
};

/// Scales by the smallest S = 2^p that gives every nonzero coefficient a
/// relative rounding error below `relative_error`, then rounds.
inline EncodedObjective quantize(const PolynomialObjective& obj, double relative_error,
                                 const QuantizeOptions& opts = {}) {
  if (!(relative_error > 0.0)) throw std::invalid_argument("relative error must be positive");
  std::vector<double> coeffs;
  coeffs.reserve(obj.terms().size() + 1);
  if (obj.constant() != 0.0) coeffs.push_back(obj.constant());
  for (const auto& t : obj.terms()) {
    if (t.coefficient != 0.0) coeffs.push_back(t.coefficient);
  }
  auto fits = [&](double scale) {
    for (double c : coeffs) {
      const double v = c * scale;
      if (std::abs(std::nearbyint(v) - v) >= relative_error * std::abs(v)) return false;
    }
    return true;
  };
  int p = 0;
  while (!fits(std::ldexp(1.0, p))) {
    if (++p > opts.max_scale_exponent) {
      throw std::overflow_error("coefficients cannot be quantized within the scale cap; use a larger relative error");
    }
  }
  const double scale = std::ldexp(1.0, p);
  PolynomialObjective base(obj.n(), std::nearbyint(obj.constant() * scale));
  for (const auto& t : obj.terms()) {
    const double v = std::nearbyint(t.coefficient * scale);
    if (v != 0.0) base.add_term(t.vars, v);
  }
  const int m = required_register_size(base);
  if (m > opts.max_register_qubits) {
    throw std::overflow_error("quantized objective needs " + std::to_string(m) +
                              " register qubits (cap " + std::to_string(opts.max_register_qubits) +
                              "); use a larger relative error");
  }
  return {std::move(base), scale, m};
}

}  // namespace gasd

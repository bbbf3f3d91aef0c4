#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "circuit.hpp"
#include "dicke.hpp"
#include "objective.hpp"
#include "search_space.hpp"

namespace gasd {

inline constexpr std::uint64_t kMaxRangeCheckSize = std::uint64_t{1} << 26;

/// Exact min/max of E over the space (enumerated).
inline Bounds range_over(const PolynomialObjective& obj, const SearchSpace& space) {
  if (space.size() > kMaxRangeCheckSize) return safe_bounds(obj);
  Bounds b{INFINITY, -INFINITY};
  for (std::uint64_t i = 0; i < space.size(); ++i) {
    const double e = obj.evaluate(space.element(i));
    b.lower = std::min(b.lower, e);
    b.upper = std::max(b.upper, e);
  }
  return b;
}

/// A_y on n + m qubits: data preparation (H^n or the Dicke preparation) and
/// H^m on the register, one U_G per term of E - y (constant first), then the
/// inverse QFT on the register. Register qubit n is the two's-complement LSB
/// and qubit n + m - 1 the sign bit.
inline Circuit build_state_prep(const PolynomialObjective& objective, double y,
                                const SearchSpace& space, int m) {
  const int n = objective.n();
  if (space.n() != n) throw std::invalid_argument("objective and search space sizes differ");
  if (m < 1 || n + m > 63) throw std::invalid_argument("register size out of range");
  const Bounds r = range_over(objective, space);
  const double half = std::ldexp(1.0, m - 1);
  if (!(-half <= r.lower - y && r.upper - y < half)) {
    throw std::overflow_error("E(x) - y does not fit a " + std::to_string(m) +
                              "-qubit two's-complement register");
  }

  Circuit c(n + m);
  if (space.is_dicke()) {
    c.append(build_dicke_prep({n, space.k()}), 0);
  } else {
    for (int j = 0; j < n; ++j) c.add(make_h(j));
  }
  for (int j = 0; j < m; ++j) c.add(make_h(n + j));

  c.append(build_ug_term(objective.constant() - y, {}, n, m));
  for (const auto& t : objective.terms()) c.append(build_ug_term(t.coefficient, t.vars, n, m));
  c.append(build_iqft(m), n);
  return c;
}

/// G = A_y F A_y^H O. O is Z on the sign qubit; F is X^{n+m}, a Z on qubit 0
/// controlled by every other qubit, X^{n+m} (the reflection about |0>, up to
/// a global phase).
inline Circuit build_grover_operator(const Circuit& state_prep, int m) {
  const int q = state_prep.qubit_count();
  if (m < 1 || m > q) throw std::invalid_argument("register size out of range");
  Circuit g(q);
  g.add(make_z(q - 1));
  g.append(state_prep.adjoint());
  for (int j = 0; j < q; ++j) g.add(make_x(j));
  std::vector<int> others;
  for (int j = 1; j < q; ++j) others.push_back(j);
  g.add(make_z(0, others));
  for (int j = 0; j < q; ++j) g.add(make_x(j));
  g.append(state_prep);
  return g;
}

}  // namespace gasd

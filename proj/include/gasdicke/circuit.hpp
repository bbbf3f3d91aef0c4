#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gasd {

enum class GateKind { H, X, Z, PhaseR, RotY };

inline const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Z: return "Z";
    case GateKind::PhaseR: return "R";
    case GateKind::RotY: return "RY";
  }
  return "?";
}

/// One (possibly multi-controlled) single-target gate. Controls fire on |1>.
struct Gate {
  GateKind kind = GateKind::H;
  double angle = 0.0;  // radians; only PhaseR and RotY read it
  int target = 0;
  std::vector<int> controls;

  bool has_angle() const { return kind == GateKind::PhaseR || kind == GateKind::RotY; }

  Gate adjoint() const {
    Gate g = *this;
    if (has_angle()) g.angle = -angle;
    return g;
  }

  bool operator==(const Gate&) const = default;
};

inline Gate make_h(int t) { return {GateKind::H, 0.0, t, {}}; }
inline Gate make_x(int t, std::vector<int> c = {}) { return {GateKind::X, 0.0, t, std::move(c)}; }
inline Gate make_z(int t, std::vector<int> c = {}) { return {GateKind::Z, 0.0, t, std::move(c)}; }
inline Gate make_phase(int t, double a, std::vector<int> c = {}) {
  return {GateKind::PhaseR, a, t, std::move(c)};
}
inline Gate make_ry(int t, double a, std::vector<int> c = {}) {
  return {GateKind::RotY, a, t, std::move(c)};
}

/// Ordered gate list over a fixed number of qubits. Qubit 0 is the least
/// significant bit of a basis-state index.
class Circuit {
 public:
  explicit Circuit(int qubit_count) : qubit_count_(qubit_count) {
    if (qubit_count < 1 || qubit_count > 63) {
      throw std::invalid_argument("circuit qubit count must lie in [1, 63]");
    }
  }

  int qubit_count() const { return qubit_count_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }
  auto begin() const { return gates_.begin(); }
  auto end() const { return gates_.end(); }

  Circuit& add(Gate g) {
    validate(g);
    gates_.push_back(std::move(g));
    return *this;
  }

  /// Appends `other` with every qubit index shifted by `offset`.
  Circuit& append(const Circuit& other, int offset = 0) {
    if (offset < 0 || offset + other.qubit_count() > qubit_count_) {
      throw std::invalid_argument("appended circuit does not fit at the given offset");
    }
    gates_.reserve(gates_.size() + other.size());
    for (Gate g : other.gates_) {
      g.target += offset;
      for (int& c : g.controls) c += offset;
      gates_.push_back(std::move(g));
    }
    return *this;
  }

  /// Structural inverse: reversed order, each gate replaced by its adjoint.
  Circuit adjoint() const {
    Circuit out(qubit_count_);
    out.gates_.reserve(gates_.size());
    for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) out.gates_.push_back(it->adjoint());
    return out;
  }

  bool operator==(const Circuit&) const = default;

 private:
  void validate(const Gate& g) const {
    auto in_range = [this](int q) { return q >= 0 && q < qubit_count_; };
    if (!in_range(g.target)) throw std::invalid_argument("gate target out of range");
    for (std::size_t i = 0; i < g.controls.size(); ++i) {
      const int c = g.controls[i];
      if (!in_range(c)) throw std::invalid_argument("gate control out of range");
      if (c == g.target) throw std::invalid_argument("gate target listed among its controls");
      if (std::find(g.controls.begin(), g.controls.begin() + static_cast<long>(i), c) !=
          g.controls.begin() + static_cast<long>(i)) {
        throw std::invalid_argument("duplicate control qubit");
      }
    }
    if (g.has_angle() && !std::isfinite(g.angle)) {
      throw std::invalid_argument("gate angle must be finite");
    }
  }

  int qubit_count_;
  std::vector<Gate> gates_;
};

/// Debug text: one gate per line, `KIND(angle) target [c0,c1]`.
inline std::string format_gate(const Gate& g) {
  std::ostringstream os;
  os << kind_name(g.kind);
  if (g.has_angle()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "(%.12g)", g.angle);
    os << buf;
  }
  os << ' ' << g.target;
  if (!g.controls.empty()) {
    os << " [";
    for (std::size_t i = 0; i < g.controls.size(); ++i) os << (i ? "," : "") << g.controls[i];
    os << ']';
  }
  return os.str();
}

inline void dump(const Circuit& c, std::ostream& os) {
  for (const Gate& g : c) os << format_gate(g) << '\n';
}

inline std::string dump(const Circuit& c) {
  std::ostringstream os;
  dump(c, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Builders for the phase-encoding pieces of the state preparation operator.

/// Controlled U_G(theta) for one polynomial term, theta = 2*pi*a / 2^m.
/// Register qubit j (circuit qubit data_qubits + j) gets phase 2^j * theta,
/// controlled on every variable of the term.
inline Circuit build_ug_term(double coefficient, const std::vector<int>& control_vars,
                             int data_qubits, int m) {
  if (!std::isfinite(coefficient)) throw std::invalid_argument("term coefficient must be finite");
  if (m < 1) throw std::invalid_argument("register size must be at least 1");
  if (data_qubits < 0 || static_cast<int>(control_vars.size()) > data_qubits) {
    throw std::invalid_argument("more control variables than data qubits");
  }
  for (int v : control_vars) {
    if (v < 0 || v >= data_qubits) throw std::invalid_argument("control variable out of range");
  }
  Circuit c(data_qubits + m);
  const double theta = 2.0 * std::numbers::pi * coefficient / std::ldexp(1.0, m);
  for (int j = m - 1; j >= 0; --j) {
    c.add(make_phase(data_qubits + j, std::ldexp(theta, j), control_vars));
  }
  return c;
}

/// Inverse QFT on m qubits: maps 2^{-m/2} sum_i e^{2 pi i v i / 2^m} |i> to |v>.
inline Circuit build_iqft(int m) {
  if (m < 1) throw std::invalid_argument("register size must be at least 1");
  // Forward QFT, then take its structural adjoint.
  Circuit qft(m);
  for (int j = m - 1; j >= 0; --j) {
    qft.add(make_h(j));
    for (int k = j - 1; k >= 0; --k) {
      qft.add(make_phase(j, std::numbers::pi / std::ldexp(1.0, j - k), {k}));
    }
  }
  for (int j = 0; j < m / 2; ++j) {
    const int a = j, b = m - 1 - j;
    qft.add(make_x(b, {a})).add(make_x(a, {b})).add(make_x(b, {a}));
  }
  return qft.adjoint();
}

}  // namespace gasd

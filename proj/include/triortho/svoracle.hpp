#pragma once

// Dense state-vector simulator capped at 16 qubits. This is a test oracle:
// it settles logical-action claims (encoder circuits, transversal S acting as
// logical CZ, gadget outputs) by brute amplitude arithmetic. Nothing here is
// meant to be fast, only unarguable.
//
// Convention: qubit q is bit q of the basis-state index, and when a state is
// prepared from a code, column j of the generator matrix lands on qubit j.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "triortho/bits.hpp"
#include "triortho/checkcodes.hpp"

namespace triortho {

class StateVector {
 public:
  // |0...0> on n qubits.
  explicit StateVector(int n_qubits) : n_(check_cap(n_qubits)), amp_(std::size_t{1} << n_qubits) {
    amp_[0] = 1.0;
  }

  int n_qubits() const { return n_; }
  std::size_t dim() const { return amp_.size(); }
  std::complex<double>& amp(std::size_t i) { return amp_[i]; }
  const std::complex<double>& amp(std::size_t i) const { return amp_[i]; }

  void x(int q) {
    const std::size_t b = bit(q);
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if (i & b) std::swap(amp_[i], amp_[i ^ b]);
  }

  void z(int q) { phase_if(bit(q), -1.0); }

  void h(int q) {
    const std::size_t b = bit(q);
    const double s = std::numbers::sqrt2 / 2;
    for (std::size_t i = 0; i < amp_.size(); ++i) {
      if (i & b) continue;
      const std::complex<double> a0 = amp_[i], a1 = amp_[i | b];
      amp_[i] = s * (a0 + a1);
      amp_[i | b] = s * (a0 - a1);
    }
  }

  // S = diag(1, i); exponent -1 gives the inverse.
  void s(int q, int exponent = 1) {
    phase_if(bit(q), exponent >= 0 ? std::complex<double>(0, 1) : std::complex<double>(0, -1));
  }

  // T = diag(1, e^{i pi/4}); exponent -1 gives the inverse.
  void t(int q, int exponent = 1) { phase_if(bit(q), omega(exponent)); }

  void cx(int control, int target) {
    const std::size_t bc = bit(control), bt = bit(target);
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if ((i & bc) && (i & bt)) std::swap(amp_[i], amp_[i ^ bt]);
  }

  void cz(int a, int b) { phase_if(bit(a) | bit(b), -1.0); }

  void ccz(int a, int b, int c) { phase_if(bit(a) | bit(b) | bit(c), -1.0); }

  // Controlled e^{i pi/4}: the control picks up the phase regardless of any
  // target, so this is T on the control qubit. Kept as its own entry point
  // because gadget identities name it separately from data-qubit T gates.
  void cphase_pi4(int control, int exponent = 1) { t(control, exponent); }

  double norm() const {
    double s = 0;
    for (const auto& a : amp_) s += std::norm(a);
    return std::sqrt(s);
  }

  std::complex<double> inner(const StateVector& o) const {
    if (o.n_ != n_) throw std::invalid_argument("inner: qubit count mismatch");
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < amp_.size(); ++i) s += std::conj(amp_[i]) * o.amp_[i];
    return s;
  }

 private:
  static int check_cap(int n) {
    if (n < 1 || n > 16) throw std::invalid_argument("StateVector: need 1 <= n_qubits <= 16");
    return n;
  }
  std::size_t bit(int q) const {
    if (q < 0 || q >= n_) throw std::out_of_range("StateVector: qubit index");
    return std::size_t{1} << q;
  }
  // Multiplies amplitudes whose index contains all bits of `mask`.
  void phase_if(std::size_t mask, std::complex<double> ph) {
    for (std::size_t i = 0; i < amp_.size(); ++i)
      if ((i & mask) == mask) amp_[i] *= ph;
  }
  static std::complex<double> omega(int exponent) {
    const double a = std::numbers::pi / 4 * (exponent >= 0 ? 1 : -1);
    return {std::cos(a), std::sin(a)};
  }

  int n_;
  std::vector<std::complex<double>> amp_;
};

// Equality up to a global phase: |<a|b>| = 1 within tol (both states unit
// norm, which the tolerance also enforces implicitly).
inline bool phase_equal(const StateVector& a, const StateVector& b, double tol = 1e-9) {
  return std::abs(std::abs(a.inner(b)) - 1.0) <= tol;
}

// Uniform superposition over the span of the rows of m, one qubit per column.
inline StateVector prepare_code_superposition(const BitMatrix& m) {
  if (m.n_cols() < 1 || m.n_cols() > 16)
    throw cap_exceeded("prepare_code_superposition: need 1..16 columns");
  Rref e = rref(m);
  StateVector sv(static_cast<int>(m.n_cols()));
  sv.amp(0) = 0;
  const double a = std::pow(0.5, 0.5 * static_cast<double>(e.rank));
  // Gray walk over the span: one row XOR per step.
  std::size_t idx = 0;
  sv.amp(0) = a;
  const std::size_t total = std::size_t{1} << e.rank;
  for (std::size_t g = 1; g < total; ++g) {
    const std::size_t flip = static_cast<std::size_t>(std::countr_zero(g));
    const BitVec& r = e.r.row(flip);
    for (std::size_t j = 0; j < m.n_cols(); ++j)
      if (r.get(j)) idx ^= std::size_t{1} << j;
    sv.amp(idx) = a;
  }
  return sv;
}

// Checks that transversal S^{t_i} acts on the code spanned by s with logical
// basis `basis` as the product of CZ gates over consecutive basis pairs
// (1,2), (3,4), ...: for every logical basis state the phase picked up must
// be (-1)^{sum_a x_{2a-1} x_{2a}}, with unit overlap (the coset maps to
// itself with one common phase). t entries are +1 or -1.
inline bool verify_logical_cz(const BitMatrix& s, const BitMatrix& basis, const std::vector<int>& t,
                              double tol = 1e-9) {
  const std::size_t n = s.n_cols() ? s.n_cols() : basis.n_cols();
  if (n < 1 || n > 16) throw cap_exceeded("verify_logical_cz: need 1..16 qubits");
  if (t.size() != n) throw std::invalid_argument("verify_logical_cz: t length mismatch");
  if (basis.n_rows() % 2 != 0) throw std::invalid_argument("verify_logical_cz: odd basis size");
  const std::size_t k = basis.n_rows();
  for (std::size_t x = 0; x < (std::size_t{1} << k); ++x) {
    BitVec shift(n);
    for (std::size_t a = 0; a < k; ++a)
      if ((x >> a) & 1) shift ^= basis.row(a);
    // Logical basis state: uniform over shift + span(s).
    StateVector st(static_cast<int>(n));
    st.amp(0) = 0;
    const double ampv = std::pow(0.5, 0.5 * static_cast<double>(rank(s)));
    for_each_in_span(s, [&](const BitVec& sp) {
      BitVec f = shift;
      if (sp.size() == n) f ^= sp;  // empty spans visit one size-0 vector
      std::size_t idx = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (f.get(j)) idx |= std::size_t{1} << j;
      st.amp(idx) = ampv;
    });
    StateVector in = st;
    for (std::size_t q = 0; q < n; ++q) st.s(static_cast<int>(q), t[q]);
    int par = 0;
    for (std::size_t a = 0; a + 1 < k; a += 2) par ^= static_cast<int>((x >> a) & (x >> (a + 1)) & 1);
    const std::complex<double> expected = par ? -1.0 : 1.0;
    if (std::abs(in.inner(st) - expected) > tol) return false;
  }
  return true;
}

// Replays a check circuit's gate list exactly. A listed T-slot fault inserts
// a Z at that point in time; an injected-CCZ fault inserts Z on the slot's
// designated target, matching the linearized frame model.
inline void apply_circuit(StateVector& sv, const CheckCircuit& c,
                          const std::vector<std::size_t>& error_slots = {}) {
  if (static_cast<std::size_t>(sv.n_qubits()) != c.n_qubits)
    throw std::invalid_argument("apply_circuit: qubit count mismatch");
  std::vector<char> err(c.t_slot_count, 0);
  for (std::size_t s : error_slots) err.at(s) = 1;
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::cx:
        sv.cx(g.q[0], g.q[1]);
        break;
      case GateKind::cz:
        sv.cz(g.q[0], g.q[1]);
        break;
      case GateKind::x:
        sv.x(g.q[0]);
        break;
      case GateKind::s:
        sv.s(g.q[0], g.exponent);
        break;
      case GateKind::t_slot:
        sv.t(g.q[0], g.exponent);
        if (err[static_cast<std::size_t>(g.slot)]) sv.z(g.q[0]);
        break;
      case GateKind::ccz_inject:
        sv.ccz(g.q[0], g.q[1], g.q[2]);
        for (int i = 0; i < 4; ++i)
          if (g.inject_slots[i] >= 0 && err[static_cast<std::size_t>(g.inject_slots[i])])
            sv.z(g.inject_targets[i]);
        break;
    }
  }
}

}  // namespace triortho

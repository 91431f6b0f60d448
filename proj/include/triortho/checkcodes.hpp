#pragma once

// Weakly self-dual CSS codes used as the inner check in CCZ distillation, and
// the Clifford check circuits built on them.
//
// Throughout, a check code is given by a binary row space S with every row
// even weight and all rows pairwise orthogonal, so span(S) is contained in its
// own dual. Physical qubits carry X stabilizers from S; Z errors are tracked
// as binary frames. Codes split into two classes by whether the all-ones
// vector lies in span(S):
//
//   hyperbolic:  1 in span(S). The quotient dual(S)/S carries a nondegenerate
//                alternating form and splits into k hyperbolic pairs; the
//                circuit built here measures a product of logical CZ gates on
//                those pairs using one ancilla and 2n T gates.
//   normal:      1 not in span(S). The quotient has an orthonormal basis and
//                the circuit measures a CCZ-type stabilizer across three code
//                blocks with three ancillas and 8n T gates.
//
// Circuits are emitted as flat gate lists with numbered T slots. A fault at a
// T slot is a Z error injected at that point in time; everything downstream
// (frame propagation, accept checks, logical detectors) is linear over F2, so
// Monte Carlo and exhaustive fault enumeration share one code path.

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "triortho/bits.hpp"
#include "triortho/enumeration.hpp"
#include "triortho/reedmuller.hpp"

namespace triortho {

struct not_self_orthogonal : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct not_hyperbolic : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct unsolvable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class WscClass { hyperbolic, normal };

struct WscCode {
  BitMatrix s{0};        // reduced row basis of the stabilizer space
  std::size_t n_inner = 0;
  std::size_t rank = 0;
  std::size_t k_inner = 0;  // n_inner - 2 * rank
  WscClass cls = WscClass::normal;
};

// Validates self-orthogonality and classifies by membership of the all-ones
// vector. The stored basis is the rref of the input rows.
inline WscCode classify_wsc(const BitMatrix& rows) {
  const std::size_t n = rows.n_cols();
  for (std::size_t i = 0; i < rows.n_rows(); ++i) {
    if (rows.row(i).weight() % 2 != 0)
      throw not_self_orthogonal("classify_wsc: row " + std::to_string(i) + " has odd weight");
    for (std::size_t j = i + 1; j < rows.n_rows(); ++j)
      if (rows.row(i).dot(rows.row(j)))
        throw not_self_orthogonal("classify_wsc: rows " + std::to_string(i) + " and " +
                                  std::to_string(j) + " are not orthogonal");
  }
  Rref e = rref(rows);
  WscCode c;
  c.s = BitMatrix(n);
  for (std::size_t i = 0; i < e.rank; ++i) c.s.append_row(e.r.row(i));
  c.n_inner = n;
  c.rank = e.rank;
  if (2 * e.rank > n)
    throw not_self_orthogonal("classify_wsc: rank exceeds n/2");  // unreachable for valid input
  c.k_inner = n - 2 * e.rank;
  c.cls = e.contains(BitVec::ones(n)) ? WscClass::hyperbolic : WscClass::normal;
  return c;
}

namespace detail {

// Coset representatives for a basis of dual(S)/S: rows of the kernel basis,
// reduced mod S, keeping a maximal independent set. Deterministic given the
// kernel_basis row order.
inline std::vector<BitVec> quotient_reps(const WscCode& code) {
  Rref se = rref(code.s);
  BitMatrix grow = code.s;
  std::vector<BitVec> out;
  BitMatrix dual = kernel_basis(code.s);
  for (std::size_t i = 0; i < dual.n_rows(); ++i) {
    BitVec r = se.reduce(dual.row(i));
    if (r.is_zero() || in_span(grow, r)) continue;
    grow.append_row(r);
    out.push_back(std::move(r));
  }
  return out;
}

inline BitVec embed(const BitVec& v, std::size_t n_total, std::size_t offset) {
  BitVec out(n_total);
  for (std::size_t i : v.support()) out.set(offset + i, true);
  return out;
}

}  // namespace detail

// Symplectic basis of the quotient for a hyperbolic code: 2k rows in k pairs,
// where consecutive rows (2a, 2a+1) pair to 1 and everything else pairs to 0.
// Built by pairing off the first candidate with a nonzero pairing, then
// cancelling both new basis vectors out of the rest; representatives are kept
// reduced mod S so the output is deterministic.
inline BitMatrix hyperbolic_basis(const WscCode& code) {
  if (code.cls != WscClass::hyperbolic)
    throw not_hyperbolic("hyperbolic_basis: all-ones vector not in the stabilizer span");
  Rref se = rref(code.s);
  std::vector<BitVec> pool = detail::quotient_reps(code);
  BitMatrix out(code.n_inner);
  while (!pool.empty()) {
    std::size_t ui = pool.size(), vi = pool.size();
    for (std::size_t i = 0; i + 1 < pool.size() && ui == pool.size(); ++i)
      for (std::size_t j = i + 1; j < pool.size(); ++j)
        if (pool[i].dot(pool[j])) {
          ui = i;
          vi = j;
          break;
        }
    if (ui == pool.size())
      throw not_hyperbolic("hyperbolic_basis: degenerate pairing on the quotient");
    BitVec u = pool[ui], v = pool[vi];
    pool.erase(pool.begin() + vi);
    pool.erase(pool.begin() + ui);
    for (BitVec& w : pool) {
      // w' = w + (w.v) u + (w.u) v kills both pairings; u.u = v.v = 0 because
      // every dual vector has even weight when 1 is a stabilizer
      const bool a = w.dot(v), b = w.dot(u);
      if (a) w ^= u;
      if (b) w ^= v;
      w = se.reduce(w);
    }
    out.append_row(se.reduce(u));
    out.append_row(se.reduce(v));
  }
  return out;
}

// True when basis rows pair as hyperbolic pairs: row i . row j = 1 exactly
// when {i, j} is {2a, 2a+1}, and every row has even weight.
inline bool hyperbolic_pairing_holds(const BitMatrix& basis) {
  if (basis.n_rows() % 2 != 0) return false;
  for (std::size_t i = 0; i < basis.n_rows(); ++i) {
    if (basis.row(i).weight() % 2 != 0) return false;
    for (std::size_t j = i + 1; j < basis.n_rows(); ++j) {
      const bool want = (j == (i ^ 1));
      if (basis.row(i).dot(basis.row(j)) != want) return false;
    }
  }
  return true;
}

// Orthonormal basis of the quotient for a normal code: k rows with
// row i . row j = delta_ij (every row odd weight). First odd-weight candidate
// is extracted and cancelled out of the rest.
inline BitMatrix normal_quotient_basis(const WscCode& code) {
  if (code.cls != WscClass::normal)
    throw std::invalid_argument("normal_quotient_basis: code is hyperbolic");
  Rref se = rref(code.s);
  std::vector<BitVec> pool = detail::quotient_reps(code);
  BitMatrix out(code.n_inner);
  while (!pool.empty()) {
    std::size_t vi = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (pool[i].weight() % 2 != 0) {
        vi = i;
        break;
      }
    if (vi == pool.size())
      // all-even candidates would force 1 into span(S), contradicting normal
      throw std::logic_error("normal_quotient_basis: no odd-weight candidate");
    BitVec v = pool[vi];
    pool.erase(pool.begin() + vi);
    for (BitVec& w : pool) {
      if (w.dot(v)) {
        w ^= v;
        w = se.reduce(w);
      }
    }
    out.append_row(se.reduce(v));
  }
  return out;
}

// Sign exponents t_i in {+1, -1} with sum_i w_i t_i = 0 mod 4 for every w in
// span(S) and every basis row. Writing t_i = 1 - 2 s_i turns each constraint
// into the F2 equation sum_i w_i s_i = |w|/2 mod 2, and satisfying the basis
// rows of the span is enough for the whole span.
inline std::vector<int> solve_t_exponents(const BitMatrix& s, const BitMatrix& basis) {
  const std::size_t n = s.n_cols();
  if (basis.n_rows() > 0 && basis.n_cols() != n)
    throw std::invalid_argument("solve_t_exponents: column count mismatch");
  BitMatrix a(n);
  std::vector<bool> rhs_bits;
  auto add_constraint = [&](const BitVec& w) {
    if (w.weight() % 2 != 0)
      throw std::invalid_argument("solve_t_exponents: odd-weight constraint row");
    a.append_row(w);
    rhs_bits.push_back((w.weight() / 2) % 2 != 0);
  };
  for (std::size_t i = 0; i < s.n_rows(); ++i) add_constraint(s.row(i));
  for (std::size_t i = 0; i < basis.n_rows(); ++i) add_constraint(basis.row(i));
  BitVec rhs(rhs_bits.size());
  for (std::size_t i = 0; i < rhs_bits.size(); ++i)
    if (rhs_bits[i]) rhs.set(i, true);
  auto sol = solve(a, rhs);
  if (!sol) throw unsolvable("solve_t_exponents: mod-4 sign constraints are inconsistent");
  std::vector<int> t(n, 1);
  for (std::size_t i = 0; i < n; ++i)
    if (sol->particular.get(i)) t[i] = -1;
  return t;
}

// Checks sum_i w_i t_i = 0 mod 4 directly.
inline bool t_constraint_holds(const BitVec& w, const std::vector<int>& t) {
  long long sum = 0;
  for (std::size_t i : w.support()) sum += t.at(i);
  return ((sum % 4) + 4) % 4 == 0;
}

// For a 0/1 vector y with W = sum y_i:
//   W - 2 sum_{i<j} y_i y_j           = W mod 2   (mod 4)
//   W - 2 sum_{i<j} + 4 sum_{i<j<k}   = W mod 2   (mod 8)
// The multilinear sums are computed literally; these predicates exist to be
// property-tested, and back the reduction used by solve_t_exponents.
inline bool mod4_identity(const std::vector<int>& y) {
  long long w = 0, pairs = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw std::invalid_argument("mod4_identity: entries must be 0 or 1");
    w += v;
  }
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = i + 1; j < y.size(); ++j) pairs += y[i] * y[j];
  return (((w - 2 * pairs) % 4) + 4) % 4 == (w % 2);
}

inline bool mod8_identity(const std::vector<int>& y) {
  long long w = 0, pairs = 0, triples = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw std::invalid_argument("mod8_identity: entries must be 0 or 1");
    w += v;
  }
  for (std::size_t i = 0; i < y.size(); ++i)
    for (std::size_t j = i + 1; j < y.size(); ++j) {
      pairs += y[i] * y[j];
      for (std::size_t k = j + 1; k < y.size(); ++k) triples += y[i] * y[j] * y[k];
    }
  return (((w - 2 * pairs + 4 * triples) % 8) + 8) % 8 == (w % 2);
}

// ---------------------------------------------------------------------------
// Weight data for the inner code: counts for span(S) by direct enumeration and
// for dual(S) by the MacWilliams transform (rank is small for every code this
// is used on, so 2^rank enumeration is the cheap side).
// ---------------------------------------------------------------------------

struct WscWeightProfile {
  std::vector<BigInt> span;  // index = weight
  std::vector<BigInt> dual;
  int d = 0;           // least w >= 1 with dual[w] > span[w]; 0 if none
  BigInt a_d = 0;      // dual[d] - span[d]
};

inline WscWeightProfile wsc_weight_profile(const WscCode& code) {
  WscWeightProfile p;
  WeightEnumerator we = enumerate_span(code.s);
  std::vector<BigInt> dual = macwilliams_prefix(we, code.n_inner);
  p.span.assign(code.n_inner + 1, 0);
  for (std::size_t w = 0; w < we.counts.size(); ++w) p.span[w] = we.counts[w];
  p.dual = std::move(dual);
  for (std::size_t w = 1; w <= code.n_inner; ++w)
    if (p.dual[w] > p.span[w]) {
      p.d = static_cast<int>(w);
      p.a_d = p.dual[w] - p.span[w];
      break;
    }
  return p;
}

// ---------------------------------------------------------------------------
// Check circuits
// ---------------------------------------------------------------------------

enum class GateKind { cx, cz, x, s, t_slot, ccz_inject };

struct Gate {
  GateKind kind = GateKind::cx;
  std::array<int, 3> q{-1, -1, -1};  // operands; cx is (control, target)
  int exponent = 1;                  // s / t_slot: +1 or -1
  int slot = -1;                     // t_slot: global T-slot id
  // ccz_inject: one injected CCZ state consumed by 4 T gates. A fault at
  // inject_slots[i] is modelled as Z on inject_targets[i] at this time step.
  std::array<int, 4> inject_slots{-1, -1, -1, -1};
  std::array<int, 4> inject_targets{-1, -1, -1, -1};
};

struct CheckCircuit {
  std::size_t n_qubits = 0;
  std::vector<Gate> gates;  // time order
  std::size_t t_slot_count = 0;
  // A final Z frame is accepted iff orthogonal to every row.
  BitMatrix accept_checks{0};
  // One row per output qubit, in output order: frame . row = 1 means the
  // output carries a residual Z error.
  BitMatrix logical_detectors{0};
  int inner_distance = 0;  // Z distance of the inner code; 0 = not computed
};

namespace detail {

inline Gate cx_gate(int control, int target) {
  Gate g;
  g.kind = GateKind::cx;
  g.q = {control, target, -1};
  return g;
}

inline Gate t_slot_gate(int qubit, int exponent, int slot) {
  Gate g;
  g.kind = GateKind::t_slot;
  g.q = {qubit, -1, -1};
  g.exponent = exponent;
  g.slot = slot;
  return g;
}

// The controlled-S block from the T + CX identity, acting on one code qubit.
// For t = +1 the |1> control branch applies T X Tdag X = w^-1 S, for t = -1 it
// applies Tdag X T X = w S^-1; the leftover controlled phases cancel across
// the whole code because sum t_i = 0 mod 4.
inline void append_cs_gadget(CheckCircuit& c, int control, int qubit, int t, int& slot) {
  c.gates.push_back(cx_gate(control, qubit));
  c.gates.push_back(t_slot_gate(qubit, -t, slot++));
  c.gates.push_back(cx_gate(control, qubit));
  c.gates.push_back(t_slot_gate(qubit, t, slot++));
}

inline int small_inner_distance(const WscCode& code) {
  if (code.rank > 20 || code.k_inner == 0) return 0;
  return wsc_weight_profile(code).d;
}

}  // namespace detail

// Fixed 4-qubit factory for one CCZ state: qubit 0 is the control (first CCZ
// output), qubits 1..4 the inner code with stabilizer 1111, logical pair
// carried by 1100 and 0110, signs (+, -, +, -). Output order: control,
// logical 1, logical 2. Every choice is re-verified at construction.
inline CheckCircuit build_quadratic_ccz() {
  const std::size_t n = 4;
  BitMatrix s(n);
  s.append_row(BitVec::from_string("1111"));
  BitMatrix basis(n);
  basis.append_row(BitVec::from_string("1100"));
  basis.append_row(BitVec::from_string("0110"));
  const std::vector<int> t{1, -1, 1, -1};

  WscCode code = classify_wsc(s);
  if (code.cls != WscClass::hyperbolic || !hyperbolic_pairing_holds(basis) ||
      basis.row(0).dot(s.row(0)) || basis.row(1).dot(s.row(0)) ||
      in_span(s, basis.row(0)) || in_span(s, basis.row(1)) ||
      !t_constraint_holds(s.row(0), t) || !t_constraint_holds(basis.row(0), t) ||
      !t_constraint_holds(basis.row(1), t))
    throw std::logic_error("build_quadratic_ccz: hardcoded data failed verification");

  CheckCircuit c;
  c.n_qubits = 5;
  int slot = 0;
  for (int i = 0; i < 4; ++i) detail::append_cs_gadget(c, 0, 1 + i, t[i], slot);
  c.t_slot_count = static_cast<std::size_t>(slot);

  c.accept_checks = BitMatrix(c.n_qubits);
  c.accept_checks.append_row(detail::embed(s.row(0), c.n_qubits, 1));
  c.logical_detectors = BitMatrix(c.n_qubits);
  c.logical_detectors.append_row(BitVec::unit(c.n_qubits, 0));
  c.logical_detectors.append_row(detail::embed(basis.row(0), c.n_qubits, 1));
  c.logical_detectors.append_row(detail::embed(basis.row(1), c.n_qubits, 1));
  c.inner_distance = detail::small_inner_distance(code);
  return c;
}

// One round of the hyperbolic CZ check. Layout: qubit 0 the measured ancilla,
// qubits 1..k the separated CCZ qubits (plain controlled-X), qubits
// k+1..k+n_inner the inner code block. Detector order: the k separated qubits
// first, then the 2k logical pairs of the embedded block.
inline CheckCircuit build_hyperbolic_cz_check(const WscCode& code) {
  if (code.cls != WscClass::hyperbolic)
    throw not_hyperbolic("build_hyperbolic_cz_check: inner code is not hyperbolic");
  if (code.k_inner == 0)
    throw std::invalid_argument("build_hyperbolic_cz_check: inner code has no logical qubits");
  BitMatrix basis = hyperbolic_basis(code);
  std::vector<int> t = solve_t_exponents(code.s, basis);
  const std::size_t k = code.k_inner / 2;
  const std::size_t n = code.n_inner;
  const std::size_t off = 1 + k;

  CheckCircuit c;
  c.n_qubits = 1 + k + n;
  for (std::size_t j = 0; j < k; ++j)
    c.gates.push_back(detail::cx_gate(0, static_cast<int>(1 + j)));
  int slot = 0;
  for (std::size_t i = 0; i < n; ++i)
    detail::append_cs_gadget(c, 0, static_cast<int>(off + i), t[i], slot);
  c.t_slot_count = static_cast<std::size_t>(slot);

  c.accept_checks = BitMatrix(c.n_qubits);
  c.accept_checks.append_row(BitVec::unit(c.n_qubits, 0));
  for (std::size_t r = 0; r < code.s.n_rows(); ++r)
    c.accept_checks.append_row(detail::embed(code.s.row(r), c.n_qubits, off));

  c.logical_detectors = BitMatrix(c.n_qubits);
  for (std::size_t j = 0; j < k; ++j)
    c.logical_detectors.append_row(BitVec::unit(c.n_qubits, 1 + j));
  for (std::size_t a = 0; a < basis.n_rows(); ++a)
    c.logical_detectors.append_row(detail::embed(basis.row(a), c.n_qubits, off));
  c.inner_distance = detail::small_inner_distance(code);
  return c;
}

// The normal-code CCZ stabilizer measurement. Layout: qubits 0,1,2 the three
// ancillas, then blocks A, B, C of n_inner code qubits each. At every
// position one injected CCZ state is consumed before and one after the three
// controlled-X gates. Detector order: block A logicals, then B, then C.
inline CheckCircuit build_normal_ccz_check(const WscCode& code) {
  if (code.cls != WscClass::normal)
    throw std::invalid_argument("build_normal_ccz_check: inner code is not normal");
  if (code.k_inner == 0)
    throw std::invalid_argument("build_normal_ccz_check: inner code has no logical qubits");
  BitMatrix basis = normal_quotient_basis(code);
  const std::size_t n = code.n_inner;
  const std::size_t k = code.k_inner;

  // transversal X acts as the product of all logical X: 1 + sum of basis rows
  // must be a stabilizer (always true; checked because the circuit relies on it)
  BitVec x1 = BitVec::ones(n);
  for (std::size_t j = 0; j < k; ++j) x1 ^= basis.row(j);
  if (!in_span(code.s, x1))
    throw std::logic_error("build_normal_ccz_check: transversal X identity failed");

  CheckCircuit c;
  c.n_qubits = 3 + 3 * n;
  const std::array<std::size_t, 3> off{3, 3 + n, 3 + 2 * n};
  int slot = 0;
  auto inject = [&](std::size_t i) {
    Gate g;
    g.kind = GateKind::ccz_inject;
    g.q = {static_cast<int>(off[0] + i), static_cast<int>(off[1] + i),
           static_cast<int>(off[2] + i)};
    // 4 T gates consume the state; the extra fourth slot is charged to the
    // third target
    g.inject_slots = {slot, slot + 1, slot + 2, slot + 3};
    g.inject_targets = {g.q[0], g.q[1], g.q[2], g.q[2]};
    slot += 4;
    c.gates.push_back(g);
  };
  for (std::size_t i = 0; i < n; ++i) {
    inject(i);
    for (int b = 0; b < 3; ++b)
      c.gates.push_back(detail::cx_gate(b, static_cast<int>(off[b] + i)));
    inject(i);
  }
  c.t_slot_count = static_cast<std::size_t>(slot);

  c.accept_checks = BitMatrix(c.n_qubits);
  for (int b = 0; b < 3; ++b) c.accept_checks.append_row(BitVec::unit(c.n_qubits, b));
  for (int b = 0; b < 3; ++b)
    for (std::size_t r = 0; r < code.s.n_rows(); ++r)
      c.accept_checks.append_row(detail::embed(code.s.row(r), c.n_qubits, off[b]));

  c.logical_detectors = BitMatrix(c.n_qubits);
  for (int b = 0; b < 3; ++b)
    for (std::size_t j = 0; j < k; ++j)
      c.logical_detectors.append_row(detail::embed(basis.row(j), c.n_qubits, off[b]));
  c.inner_distance = detail::small_inner_distance(code);
  return c;
}

// First-order Reed-Muller stabilizers give a [[2^m, 2^m - 2m - 2, 4]]
// hyperbolic code for every m >= 4.
inline WscCode rm_hyperbolic(int m) {
  if (m < 4) throw std::invalid_argument("rm_hyperbolic: need m >= 4");
  WscCode c = classify_wsc(rm_generator(1, m));
  if (c.cls != WscClass::hyperbolic)
    throw std::logic_error("rm_hyperbolic: classification failed");
  return c;
}

// ---------------------------------------------------------------------------
// Composed quartic protocol: k CCZ states from the 4-qubit factory, then three
// rounds of the hyperbolic CZ check on a [[n, 2k, 4]] inner code. State qubit
// 3j + q is position q of CCZ state j; round r separates position r and embeds
// the other two positions of every state into the logical pairs.
// ---------------------------------------------------------------------------

struct CheckProtocol {
  CheckCircuit gadget;  // the CCZ factory (accept-resampled on rejection)
  CheckCircuit round;   // one check round; run three times with wiring below
  std::size_t k = 0;
  std::size_t n_inner = 0;
  // [r][j] = state qubit measured through the separated input j in round r
  std::vector<std::vector<std::size_t>> separated_by_round;
  // [r][a] = state qubit carried by embedded logical a in round r
  std::vector<std::vector<std::size_t>> embedded_by_round;
};

inline CheckProtocol build_quartic_hyperbolic_protocol(const WscCode& inner) {
  if (inner.cls != WscClass::hyperbolic)
    throw not_hyperbolic("build_quartic_hyperbolic_protocol: inner code is not hyperbolic");
  if (inner.k_inner == 0 || inner.k_inner % 2 != 0)
    throw std::invalid_argument("build_quartic_hyperbolic_protocol: need an even positive k");
  CheckProtocol p;
  p.gadget = build_quadratic_ccz();
  p.round = build_hyperbolic_cz_check(inner);
  p.k = inner.k_inner / 2;
  p.n_inner = inner.n_inner;
  for (std::size_t r = 0; r < 3; ++r) {
    std::vector<std::size_t> sep(p.k), emb(2 * p.k);
    for (std::size_t j = 0; j < p.k; ++j) {
      sep[j] = 3 * j + r;
      std::size_t e = 0;
      for (std::size_t q = 0; q < 3; ++q)
        if (q != r) emb[2 * j + e++] = 3 * j + q;
    }
    p.separated_by_round.push_back(std::move(sep));
    p.embedded_by_round.push_back(std::move(emb));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Frame propagation: inject Z errors at the listed T slots (plus an optional
// input frame), walk the gate list, and report acceptance and residual
// logical content. Everything here is F2-linear in (input frame, slot set).
// ---------------------------------------------------------------------------

struct FrameResult {
  BitVec frame{0};
  bool accepted = true;
  BitVec detector_bits{0};
  bool logical_error = false;
};

inline FrameResult pauli_frame_run(const CheckCircuit& c,
                                   const std::vector<std::size_t>& error_slots,
                                   const BitVec* input_frame = nullptr) {
  std::vector<char> err(c.t_slot_count, 0);
  for (std::size_t s : error_slots) err.at(s) = 1;
  FrameResult r;
  r.frame = input_frame ? *input_frame : BitVec(c.n_qubits);
  if (r.frame.size() != c.n_qubits)
    throw std::invalid_argument("pauli_frame_run: input frame size mismatch");
  for (const Gate& g : c.gates) {
    switch (g.kind) {
      case GateKind::cx:
        // Z on the target commutes back through CX onto the control as well
        if (r.frame.get(static_cast<std::size_t>(g.q[1])))
          r.frame.flip(static_cast<std::size_t>(g.q[0]));
        break;
      case GateKind::t_slot:
        if (err[static_cast<std::size_t>(g.slot)])
          r.frame.flip(static_cast<std::size_t>(g.q[0]));
        break;
      case GateKind::ccz_inject:
        for (int i = 0; i < 4; ++i)
          if (g.inject_slots[i] >= 0 && err[static_cast<std::size_t>(g.inject_slots[i])])
            r.frame.flip(static_cast<std::size_t>(g.inject_targets[i]));
        break;
      default:
        break;  // diagonal and X gates do not move Z frames
    }
  }
  for (std::size_t i = 0; i < c.accept_checks.n_rows(); ++i)
    if (r.frame.dot(c.accept_checks.row(i))) {
      r.accepted = false;
      break;
    }
  r.detector_bits = BitVec(c.logical_detectors.n_rows());
  for (std::size_t i = 0; i < c.logical_detectors.n_rows(); ++i)
    if (r.frame.dot(c.logical_detectors.row(i))) {
      r.detector_bits.set(i, true);
      r.logical_error = true;
    }
  return r;
}

}  // namespace triortho

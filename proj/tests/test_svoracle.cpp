#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <cstddef>

#include "triortho/checkcodes.hpp"
#include "triortho/reedmuller.hpp"
#include "triortho/rng.hpp"
#include "triortho/svoracle.hpp"

using namespace triortho;

namespace {

std::size_t embed_idx(const BitVec& v, std::size_t offset) {
  std::size_t idx = 0;
  for (std::size_t j : v.support()) idx |= std::size_t{1} << (offset + j);
  return idx;
}

void clear(StateVector& sv) {
  for (std::size_t i = 0; i < (std::size_t{1} << sv.n_qubits()); ++i) sv.amp(i) = 0;
}

// |+>_0 (x) uniform over rowspan(rows) on qubits 1..: the gadget input, a
// bare control plus the inner code in the all-plus logical state.
StateVector gadget_input() {
  StateVector sv(5);
  clear(sv);
  BitMatrix sp(4);
  sp.append_row(BitVec::from_string("1111"));
  sp.append_row(BitVec::from_string("1100"));
  sp.append_row(BitVec::from_string("0110"));
  const double a = 0.25;  // 16 basis states
  for_each_in_span(sp, [&](const BitVec& v) {
    for (std::size_t c = 0; c < 2; ++c) sv.amp(c | embed_idx(v, 1)) = a;
  });
  return sv;
}

// The matching output: a CCZ state on (control, logical 1, logical 2) with
// the two logical qubits carried by cosets of 1100 and 0110.
StateVector gadget_output() {
  StateVector sv(5);
  clear(sv);
  const BitVec b0 = BitVec::from_string("1100"), b1 = BitVec::from_string("0110");
  const BitVec s0 = BitVec::from_string("1111");
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t x1 = 0; x1 < 2; ++x1)
      for (std::size_t x2 = 0; x2 < 2; ++x2)
        for (std::size_t s = 0; s < 2; ++s) {
          BitVec v(4);
          if (x1) v ^= b0;
          if (x2) v ^= b1;
          if (s) v ^= s0;
          const double ph = (c & x1 & x2) ? -0.25 : 0.25;
          sv.amp(c | embed_idx(v, 1)) = ph;
        }
  return sv;
}

}  // namespace

TEST_CASE("single-qubit gate algebra on random states") {
  StateVector sv(3);
  clear(sv);
  CounterRng rng(417, 0);
  double n2 = 0;
  for (std::size_t i = 0; i < 8; ++i) {
    sv.amp(i) = {rng.next_double() - 0.5, rng.next_double() - 0.5};
    n2 += std::norm(sv.amp(i));
  }
  for (std::size_t i = 0; i < 8; ++i) sv.amp(i) /= std::sqrt(n2);
  StateVector ref = sv;

  SECTION("T^4 = Z, S^2 = Z, H^2 = 1") {
    StateVector a = sv;
    for (int i = 0; i < 4; ++i) a.t(1, +1);
    StateVector b = sv;
    b.z(1);
    REQUIRE(std::abs(a.inner(b) - 1.0) < 1e-12);
    StateVector c = sv;
    c.s(2, +1);
    c.s(2, +1);
    StateVector d = sv;
    d.z(2);
    REQUIRE(std::abs(c.inner(d) - 1.0) < 1e-12);
    StateVector e = sv;
    e.h(0);
    REQUIRE(std::abs(e.norm() - 1.0) < 1e-12);
    e.h(0);
    REQUIRE(std::abs(e.inner(ref) - 1.0) < 1e-12);
  }

  SECTION("T and Tdag invert; S and Sdag invert") {
    StateVector a = sv;
    a.t(0, +1);
    a.t(0, -1);
    a.s(1, -1);
    a.s(1, +1);
    REQUIRE(std::abs(a.inner(ref) - 1.0) < 1e-12);
  }

  SECTION("CX and CZ are self-inverse and preserve norm") {
    StateVector a = sv;
    a.cx(0, 2);
    REQUIRE(std::abs(a.norm() - 1.0) < 1e-12);
    a.cx(0, 2);
    a.cz(1, 2);
    a.cz(1, 2);
    REQUIRE(std::abs(a.inner(ref) - 1.0) < 1e-12);
  }
}

TEST_CASE("CCZ on the all-plus state leaves overlap 3/4") {
  StateVector sv(3);
  clear(sv);
  for (std::size_t i = 0; i < 8; ++i) sv.amp(i) = std::sqrt(0.125);
  StateVector in = sv;
  sv.ccz(0, 1, 2);
  REQUIRE(std::abs(sv.amp(7) + std::sqrt(0.125)) < 1e-12);
  REQUIRE(std::abs(in.inner(sv) - 0.75) < 1e-12);
}

TEST_CASE("code superposition is invariant under row operations") {
  BitMatrix a = rm_generator(1, 3);
  BitMatrix b(8);
  b.append_row(a.row(2) ^ a.row(0));
  b.append_row(a.row(3));
  b.append_row(a.row(1) ^ a.row(3));
  b.append_row(a.row(0));
  b.append_row(a.row(2) ^ a.row(1) ^ a.row(0));
  StateVector sa = prepare_code_superposition(a);
  StateVector sb = prepare_code_superposition(b);
  REQUIRE(std::abs(sa.inner(sb) - 1.0) < 1e-12);
}

TEST_CASE("encoder schedules produce the code superposition") {
  for (auto [r, m] : {std::pair<int, int>{0, 2}, {1, 3}, {1, 4}}) {
    CAPTURE(r, m);
    EncoderSchedule sch = encoder_schedule(r, m);
    StateVector sv(static_cast<int>(sch.n_qubits()));
    for (std::size_t q : sch.plus_qubits) sv.h(static_cast<int>(q));
    for (const auto& g : sch.cnots) sv.cx(static_cast<int>(g[0]), static_cast<int>(g[1]));
    StateVector want = prepare_code_superposition(rm_generator(r, m));
    REQUIRE(std::abs(sv.inner(want) - 1.0) < 1e-9);
  }
}

TEST_CASE("transversal S with alternating signs acts as the logical CZ") {
  BitMatrix s(4);
  s.append_row(BitVec::from_string("1111"));
  BitMatrix basis(4);
  basis.append_row(BitVec::from_string("1100"));
  basis.append_row(BitVec::from_string("0110"));
  REQUIRE(verify_logical_cz(s, basis, {1, -1, 1, -1}));
  REQUIRE_FALSE(verify_logical_cz(s, basis, {1, 1, 1, 1}));

  SECTION("no logical qubits is vacuously a CZ") {
    REQUIRE(verify_logical_cz(s, BitMatrix(4), {1, 1, 1, 1}));
  }

  SECTION("the solved exponents for the 16-qubit inner code pass") {
    WscCode code = rm_hyperbolic(4);
    BitMatrix b = hyperbolic_basis(code);
    std::vector<int> t = solve_t_exponents(code.s, b);
    REQUIRE(verify_logical_cz(code.s, b, t));
  }
}

TEST_CASE("the factory circuit turns all-plus logicals into a CCZ state") {
  CheckCircuit c = build_quadratic_ccz();
  StateVector sv = gadget_input();
  apply_circuit(sv, c);
  StateVector want = gadget_output();
  REQUIRE(std::abs(sv.inner(want) - 1.0) < 1e-9);
}

TEST_CASE("frame propagation matches the state vector on every fault set") {
  CheckCircuit c = build_quadratic_ccz();
  REQUIRE(c.t_slot_count == 8);
  const StateVector in = gadget_input();
  StateVector clean = in;
  apply_circuit(clean, c);
  for (std::size_t mask = 1; mask < 256; ++mask) {
    std::vector<std::size_t> slots;
    for (std::size_t s = 0; s < 8; ++s)
      if ((mask >> s) & 1) slots.push_back(s);
    StateVector faulty = in;
    apply_circuit(faulty, c, slots);
    FrameResult fr = pauli_frame_run(c, slots);
    StateVector framed = clean;
    for (std::size_t q : fr.frame.support()) framed.z(static_cast<int>(q));
    CAPTURE(mask);
    REQUIRE(phase_equal(faulty, framed));
  }
}

TEST_CASE("one check round fixes a CCZ state and flags a separated error") {
  BitMatrix s(4);
  s.append_row(BitVec::from_string("1111"));
  WscCode code = classify_wsc(s);
  CheckCircuit rc = build_hyperbolic_cz_check(code);
  REQUIRE(rc.n_qubits == 6);  // ancilla, one separated qubit, four code qubits
  BitMatrix basis = hyperbolic_basis(code);

  // |+>_anc (x) CCZ state on (separated, logical 1, logical 2)
  auto encoded = [&](int anc_sign, int sep_z) {
    StateVector sv(6);
    clear(sv);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t cq = 0; cq < 2; ++cq)
        for (std::size_t x1 = 0; x1 < 2; ++x1)
          for (std::size_t x2 = 0; x2 < 2; ++x2)
            for (std::size_t t = 0; t < 2; ++t) {
              BitVec v(4);
              if (x1) v ^= basis.row(0);
              if (x2) v ^= basis.row(1);
              if (t) v ^= s.row(0);
              double ph = (cq & x1 & x2) ? -1.0 : 1.0;
              if (anc_sign < 0 && a) ph = -ph;
              if (sep_z && cq) ph = -ph;
              sv.amp(a | (cq << 1) | embed_idx(v, 2)) = ph / std::sqrt(32.0);
            }
    return sv;
  };

  StateVector good = encoded(+1, 0);
  StateVector out = good;
  apply_circuit(out, rc);
  REQUIRE(std::abs(out.inner(good) - 1.0) < 1e-9);

  StateVector bad = encoded(+1, 1);  // Z on the separated qubit
  apply_circuit(bad, rc);
  REQUIRE(std::abs(bad.inner(encoded(-1, 1)) - 1.0) < 1e-9);  // ancilla lands in |->
  REQUIRE(std::abs(bad.inner(encoded(+1, 1))) < 1e-9);

  SECTION("frame model agrees on random fault sets") {
    StateVector clean = good;
    apply_circuit(clean, rc);
    CounterRng rng(90, 1);
    for (int rep = 0; rep < 40; ++rep) {
      std::vector<std::size_t> slots;
      for (std::size_t sl = 0; sl < rc.t_slot_count; ++sl)
        if (rng.bernoulli(0.4)) slots.push_back(sl);
      StateVector faulty = good;
      apply_circuit(faulty, rc, slots);
      FrameResult fr = pauli_frame_run(rc, slots);
      StateVector framed = clean;
      for (std::size_t q : fr.frame.support()) framed.z(static_cast<int>(q));
      REQUIRE(phase_equal(faulty, framed));
    }
  }
}

TEST_CASE("the triple-block measurement passes good CCZ pairs untouched") {
  BitMatrix s(4);
  s.append_row(BitVec::from_string("1100"));
  WscCode code = classify_wsc(s);
  REQUIRE(code.cls == WscClass::normal);
  REQUIRE(code.k_inner == 2);
  CheckCircuit c = build_normal_ccz_check(code);
  REQUIRE(c.n_qubits == 15);
  REQUIRE(c.t_slot_count == 32);  // 8 per position
  BitMatrix basis = normal_quotient_basis(code);

  // ancillas |+++> (x) two CCZ states spread over blocks A, B, C
  auto encoded = [&](const BitVec* zerr, int flip_anc) {
    StateVector sv(15);
    clear(sv);
    const std::array<std::size_t, 3> off{3, 7, 11};
    for (std::size_t anc = 0; anc < 8; ++anc)
      for (std::size_t x = 0; x < 64; ++x)
        for (std::size_t cs = 0; cs < 8; ++cs) {
          // x bits: (A1, A2, B1, B2, C1, C2)
          std::size_t idx = anc;
          int sign = 1;
          for (int blk = 0; blk < 3; ++blk) {
            BitVec v(4);
            if ((x >> (2 * blk)) & 1) v ^= basis.row(0);
            if ((x >> (2 * blk + 1)) & 1) v ^= basis.row(1);
            if ((cs >> blk) & 1) v ^= s.row(0);
            if (zerr && blk == 0 && (static_cast<int>(zerr->dot(v)) & 1)) sign = -sign;
            idx |= embed_idx(v, off[static_cast<std::size_t>(blk)]);
          }
          const std::size_t j1 = (x & 1) & ((x >> 2) & 1) & ((x >> 4) & 1);
          const std::size_t j2 = ((x >> 1) & 1) & ((x >> 3) & 1) & ((x >> 5) & 1);
          if ((j1 ^ j2) & 1) sign = -sign;
          if (flip_anc >= 0 && ((anc >> flip_anc) & 1)) sign = -sign;
          sv.amp(idx) = sign / 64.0;
        }
    return sv;
  };

  StateVector good = encoded(nullptr, -1);
  StateVector out = good;
  apply_circuit(out, c);
  REQUIRE(std::abs(out.inner(good) - 1.0) < 1e-9);

  SECTION("a logical Z on block A flips the first ancilla") {
    const BitVec g1 = basis.row(0);
    StateVector in = encoded(&g1, -1);
    apply_circuit(in, c);
    REQUIRE(std::abs(in.inner(encoded(&g1, 0)) - 1.0) < 1e-9);
    REQUIRE(std::abs(in.inner(encoded(&g1, -1))) < 1e-9);

    BitVec frame(15);
    for (std::size_t j : g1.support()) frame.set(3 + j, true);
    FrameResult fr = pauli_frame_run(c, {}, &frame);
    REQUIRE_FALSE(fr.accepted);
    REQUIRE(fr.frame.dot(c.accept_checks.row(0)));
  }

  SECTION("a logical Z on block C is rejected and hits detector 5") {
    BitVec frame(15);
    for (std::size_t j : basis.row(1).support()) frame.set(11 + j, true);
    FrameResult fr = pauli_frame_run(c, {}, &frame);
    REQUIRE_FALSE(fr.accepted);
    REQUIRE(fr.detector_bits.get(5));
  }
}

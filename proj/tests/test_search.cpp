#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "triortho/cczsearch.hpp"
#include "triortho/randtrio.hpp"
#include "triortho/reedmuller.hpp"
#include "triortho/trio.hpp"

using namespace triortho;

TEST_CASE("constraint systems line up rows, wedges, then the weight row") {
  BitMatrix prev(6);
  prev.append_row(BitVec::from_string("110000"));
  prev.append_row(BitVec::from_string("001100"));

  SECTION("even row: all parities zero") {
    ConstraintSystem cs = build_constraints(prev, {RowKind::even});
    REQUIRE(cs.lhs.n_rows() == 2 + 1 + 1);
    REQUIRE(cs.rhs.is_zero());
    REQUIRE(cs.lhs.row(2) == wedge(prev.row(0), prev.row(1)));
    REQUIRE(cs.lhs.row(3) == BitVec::ones(6));
  }
  SECTION("odd row: only the weight parity is set") {
    ConstraintSystem cs = build_constraints(prev, {RowKind::t});
    REQUIRE(cs.rhs.weight() == 1);
    REQUIRE(cs.rhs.get(3));
  }
  SECTION("pair completion: odd overlap against the partner only") {
    ConstraintSystem cs = build_constraints(prev, {RowKind::cs_second, 0});
    REQUIRE(cs.rhs.weight() == 1);
    REQUIRE(cs.rhs.get(0));
  }
  SECTION("triple completion: odd parity against the partners' wedge") {
    ConstraintSystem cs = build_constraints(prev, {RowKind::ccz_last, 0, 1});
    REQUIRE(cs.rhs.weight() == 1);
    REQUIRE(cs.rhs.get(2));
  }
  SECTION("out-of-range partners are rejected") {
    REQUIRE_THROWS_AS(build_constraints(prev, {RowKind::cs_second, 2}), std::invalid_argument);
    REQUIRE_THROWS_AS(build_constraints(prev, {RowKind::ccz_last, 0, 5}), std::invalid_argument);
  }
}

TEST_CASE("row sampling is uniform over the solution set") {
  // lone constraint: odd weight on 3 bits; solutions are the 4 odd vectors
  ConstraintSystem cs = build_constraints(BitMatrix(3), {RowKind::t});
  CounterRng rng(7);
  std::set<std::string> seen;
  for (int i = 0; i < 200; ++i) {
    auto draw = sample_row(cs, rng);
    REQUIRE(draw.has_value());
    REQUIRE(draw->row.weight() % 2 == 1);
    REQUIRE(draw->kernel_dim == 2);
    seen.insert(draw->row.to_string());
  }
  REQUIRE(seen.size() == 4);
}

TEST_CASE("an unsatisfiable parity comes back empty") {
  BitMatrix prev(4);
  prev.append_row(BitVec(4));  // zero row: odd overlap against it is impossible
  ConstraintSystem cs = build_constraints(prev, {RowKind::cs_second, 0});
  CounterRng rng(1);
  REQUIRE_FALSE(sample_row(cs, rng).has_value());
}

TEST_CASE("plain generation verifies and replays deterministically") {
  GenerateResult r = generate(16, 2, 3, 42);
  REQUIRE(r.ok());
  REQUIRE(r.code->k_t() == 2);
  REQUIRE(r.code->k_0() == 3);
  REQUIRE(r.log.size() == 5);
  REQUIRE(verify_triorthogonal(*r.code).ok());

  GenerateResult again = generate(16, 2, 3, 42);
  REQUIRE(again.ok());
  REQUIRE(*again.code == *r.code);
  GenerateResult other = generate(16, 2, 3, 43);
  REQUIRE((!other.ok() || !(*other.code == *r.code)));
}

TEST_CASE("generation reports the step where constraints go infeasible") {
  // two odd rows on one bit must overlap oddly; the second draw fails
  GenerateResult r = generate(1, 2, 0, 5);
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.failed_step == 1);
  REQUIRE(r.log.size() == 1);
}

TEST_CASE("generalized generation produces valid pattern blocks") {
  bool found = false;
  for (std::uint64_t seed = 1; seed <= 20 && !found; ++seed) {
    GenerateResult r = generate_generalized(32, 1, 1, 1, 2, seed);
    if (!r.ok()) continue;
    found = true;
    REQUIRE(r.code->k_t() == 1);
    REQUIRE(r.code->k_cs() == 1);
    REQUIRE(r.code->k_ccz() == 1);
    REQUIRE(r.code->k_0() == 2);
    REQUIRE(verify_generalized(*r.code).ok());
  }
  REQUIRE(found);
}

TEST_CASE("medium-size draws nearly always succeed") {
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    GenerateResult r = generate(64, 3, 3, seed);
    if (r.ok() && verify_triorthogonal(*r.code).ok()) ++ok;
  }
  REQUIRE(ok >= 4);
}

TEST_CASE("the default row budget splits theta sqrt(n) evenly") {
  RowBudget b = default_row_budget(256);
  REQUIRE(b.k_t == 4);
  REQUIRE(b.k_0 == 4);
  RowBudget wide = default_row_budget(256, 1.0);
  REQUIRE(wide.k_t + wide.k_0 == 16);
}

TEST_CASE("closed-form patterns split the variables three ways") {
  auto t3 = analytic_triples(3);
  REQUIRE(t3.size() == 1);
  REQUIRE(t3[0].a == monomial_mask(3, 1));
  REQUIRE(t3[0].b == monomial_mask(3, 2));
  REQUIRE(t3[0].c == monomial_mask(3, 3));

  auto t6 = analytic_triples(6);
  REQUIRE(t6.size() == 2);
  for (const auto& t : t6) check_triple(6, t);
  REQUIRE_FALSE(violation_scan(6, t6).has_value());

  auto t9 = analytic_triples(9);
  REQUIRE(t9.size() == 6);
  for (const auto& t : t9) check_triple(9, t);
  REQUIRE_FALSE(violation_scan(9, t9).has_value());

  REQUIRE_THROWS_AS(analytic_triples(4), std::invalid_argument);
}

TEST_CASE("closed-form patterns assemble into verifying codes") {
  GenTrioMatrix g3 = ccz_code(3, analytic_triples(3), ccz_base_g0(3));
  REQUIRE(g3.n() == 8);
  REQUIRE(g3.k_ccz() == 1);
  REQUIRE(verify_generalized(g3).ok());

  GenTrioMatrix g6 = ccz_code(6, analytic_triples(6), ccz_base_g0(6));
  REQUIRE(verify_generalized(g6).ok());

  GenTrioMatrix g9 = ccz_code(9, analytic_triples(9), ccz_base_g0(9));
  REQUIRE(g9.n() == 512);
  REQUIRE(g9.k() == 18);
  REQUIRE(verify_generalized(g9).ok());
}

TEST_CASE("cover scans find the first offending row trio") {
  // two copies of the same pattern always cover across patterns
  std::vector<Triple> twice = {analytic_triples(3)[0], analytic_triples(3)[0]};
  auto wit = violation_scan(3, twice);
  REQUIRE(wit.has_value());
  REQUIRE(*wit == std::array<std::size_t, 3>{0, 1, 5});
}

TEST_CASE("triple validation rejects overlap, gaps, and wrong sizes") {
  REQUIRE_THROWS_AS(check_triple(6, Triple{0b110000, 0b110000, 0b001111}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(check_triple(6, Triple{0b110000, 0b001100, 0b000010}),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(check_triple(6, Triple{0b111000, 0b000110, 0b000001}),
                    std::invalid_argument);
  REQUIRE_NOTHROW(check_triple(6, Triple{0b110000, 0b001100, 0b000011}));
}

TEST_CASE("random restarts settle two patterns on six variables") {
  MtResult r = moser_tardos(6, 2, 11);
  REQUIRE(r.ok());
  REQUIRE(r.triples->size() == 2);
  REQUIRE_FALSE(violation_scan(6, *r.triples).has_value());
  for (const auto& t : *r.triples) check_triple(6, t);
  REQUIRE(verify_generalized(ccz_code(6, *r.triples, ccz_base_g0(6))).ok());

  MtResult again = moser_tardos(6, 2, 11);
  REQUIRE(*again.triples == *r.triples);
}

TEST_CASE("two patterns can never share three variables") {
  MtResult r = moser_tardos(3, 2, 1, {.max_resamples = 50});
  REQUIRE_FALSE(r.ok());
  REQUIRE(r.resamples == 50);
  REQUIRE(r.last_violation.has_value());
}

TEST_CASE("exact local-lemma accounting matches the hand computation") {
  LllBudget b9 = lll_budget(9);
  REQUIRE(b9.p3 == BigRat(15, 196));
  REQUIRE(b9.p2 == BigRat(3, 14));
  REQUIRE_FALSE(b9.condition_holds(10));
  REQUIRE(b9.n_max == Catch::Approx(38.443359375).epsilon(1e-9));

  LllBudget b3 = lll_budget(3);
  REQUIRE(b3.p2 == BigRat(6));  // vacuous bound
  REQUIRE_FALSE(b3.condition_holds(1));
}

TEST_CASE("stabilizer completion is a fixpoint and confirms shipped maximality") {
  BitMatrix ccz3(8);
  for (int j = 1; j <= 3; ++j) ccz3.append_row(monomial_codeword(3, monomial_mask(3, j)));
  BitMatrix g0(8);
  g0.append_row(BitVec::ones(8));
  GenTrioMatrix g3 = GenTrioMatrix::make(BitMatrix(8), BitMatrix(8), ccz3, g0);

  ExtendReport rep = extend_g0(g3);
  REQUIRE(rep.added.empty());
  REQUIRE(rep.final_dual_dim == 1);
  REQUIRE(rep.extended == g3);
}

TEST_CASE("stabilizer completion grows a thin block and keeps the code valid") {
  GenTrioMatrix g6 = ccz_code(6, analytic_triples(6), ccz_base_g0(6));
  ExtendReport rep = extend_g0(g6);
  REQUIRE_FALSE(rep.added.empty());
  REQUIRE(rank(rep.extended.g_0()) == rep.final_dual_dim);
  REQUIRE(verify_generalized(rep.extended).ok());
  // completing again changes nothing
  ExtendReport again = extend_g0(rep.extended);
  REQUIRE(again.added.empty());
}

TEST_CASE("random pattern draws are always well-formed") {
  CounterRng rng(3);
  for (int i = 0; i < 100; ++i) check_triple(9, detail::random_triple(9, rng));
}

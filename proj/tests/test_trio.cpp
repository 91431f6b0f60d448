#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "triortho/codefile.hpp"
#include "triortho/reedmuller.hpp"
#include "triortho/trio.hpp"

using namespace triortho;

namespace {

// [[8,3]]: one CCZ pattern x1,x2,x3 over the all-ones stabilizer.
GenTrioMatrix toy8() {
  BitMatrix ccz(8);
  for (int j = 1; j <= 3; ++j) ccz.append_row(monomial_codeword(3, monomial_mask(3, j)));
  BitMatrix g0(8);
  g0.append_row(BitVec::ones(8));
  return GenTrioMatrix::make(BitMatrix(8), BitMatrix(8), std::move(ccz), std::move(g0));
}

// [[64,6,4]]: patterns {x1x2,x3x4,x5x6} and {x2x3,x4x5,x1x6} over an 11-row
// stabilizer block (degree <= 1 plus x1x3, x3x5, x1x5, x1x3x5).
GenTrioMatrix code64() {
  auto mono = [](std::vector<int> vars) { return monomial_codeword(6, vars); };
  BitMatrix ccz(64);
  ccz.append_row(mono({1, 2}));
  ccz.append_row(mono({3, 4}));
  ccz.append_row(mono({5, 6}));
  ccz.append_row(mono({2, 3}));
  ccz.append_row(mono({4, 5}));
  ccz.append_row(mono({1, 6}));
  BitMatrix g0 = rm_generator(1, 6);
  g0.append_row(mono({1, 3}));
  g0.append_row(mono({3, 5}));
  g0.append_row(mono({1, 5}));
  g0.append_row(mono({1, 3, 5}));
  return GenTrioMatrix::make(BitMatrix(64), BitMatrix(64), std::move(ccz), std::move(g0));
}

const std::vector<std::size_t> kPunctureA = {3,  10, 19,  20,  64,  66,  72,
                                             96, 99, 104, 110, 114, 115, 124};

}  // namespace

TEST_CASE("the 8-qubit CCZ code satisfies the generalized case table") {
  GenTrioMatrix g = toy8();
  REQUIRE(g.n() == 8);
  REQUIRE(g.k() == 3);
  REQUIRE(g.k_ccz() == 1);
  REQUIRE(g.k_t() == 0);
  REQUIRE(verify_generalized(g).ok());
  REQUIRE_THROWS_AS(verify_triorthogonal(g), std::invalid_argument);
}

TEST_CASE("a lone even stabilizer row verifies") {
  BitMatrix g0(6);
  g0.append_row(BitVec::from_string("011011"));
  REQUIRE(verify_generalized(GenTrioMatrix::plain(BitMatrix(6), std::move(g0))).ok());
}

TEST_CASE("degree-1 rows on 8 points fail with the offending row triple") {
  auto rep = verify_generalized(GenTrioMatrix::plain(BitMatrix(8), rm_generator(1, 3)));
  REQUIRE_FALSE(rep.ok());
  // rows 1,2,3 are x1,x2,x3; their common support is the single point 111
  REQUIRE(rep.violation->rows == std::array<std::size_t, 3>{1, 2, 3});
  REQUIRE_FALSE(rep.violation->expected);
  REQUIRE_FALSE(rep.violation->describe().empty());
}

TEST_CASE("degree caps make spaces all-even") {
  REQUIRE(verify_generalized(GenTrioMatrix::plain(BitMatrix(64), rm_generator(1, 6))).ok());
  REQUIRE(verify_triorthogonal_space(rm_generator(2, 7)).ok());
  REQUIRE_FALSE(verify_triorthogonal_space(rm_generator(1, 3)).ok());
}

TEST_CASE("the 64-qubit code verifies and lands on distance 4 with 2944 patterns") {
  GenTrioMatrix g = code64();
  REQUIRE(g.k() == 6);
  REQUIRE(g.k_0() == 11);
  REQUIRE(verify_generalized(g).ok());

  // identity-transform counts on the two spans
  auto stab = macwilliams_prefix(enumerate_span(g.g_0()), 4);
  auto full = macwilliams_prefix(enumerate_span(g.full()), 4);
  REQUIRE(enumerate_span(g.g_0()).dimension() == 11);
  REQUIRE(enumerate_span(g.full()).dimension() == 17);
  REQUIRE(stab[4] == 3248);
  REQUIRE(full[4] == 304);
  REQUIRE(stab[4] - full[4] == 2944);

  CodeSummary s = z_distance(g);
  REQUIRE(s.d == 4);
  REQUIRE(s.a_d == 2944);
  REQUIRE(s.d_method == "macwilliams");

  DistanceOptions ex;
  ex.method = DistanceMethod::exhaustive;
  CodeSummary s2 = z_distance(g, ex);
  REQUIRE(s2.d == 4);
  REQUIRE(s2.a_d == 2944);
  REQUIRE(s2.d_method == "exhaustive");
}

TEST_CASE("padding the single odd row gives the doubled row") {
  BitMatrix t(1);
  t.append_row(BitVec::ones(1));
  BitMatrix padded = pad(GenTrioMatrix::plain(std::move(t), BitMatrix(1)));
  REQUIRE(padded.n_rows() == 1);
  REQUIRE(padded.row(0).to_string() == "11");
  REQUIRE(verify_triorthogonal_space(padded).ok());
  REQUIRE_THROWS_AS(pad(toy8()), std::invalid_argument);
}

TEST_CASE("a 1-point puncture of the degree-1 space on 16 points is the distance-3 code") {
  GenTrioMatrix g = puncture(rm_generator(1, 4), {0}, 1);
  REQUIRE(g.n() == 15);
  REQUIRE(g.k_t() == 1);
  REQUIRE(g.k_0() == 4);
  REQUIRE(verify_triorthogonal(g).ok());
  REQUIRE(g.g_t().row(0).weight() % 8 == 7);

  CodeSummary s = z_distance(g);
  REQUIRE(s.d == 3);

  auto rep = weight_mod_properties(g);
  REQUIRE(rep.ok());
  REQUIRE_FALSE(rep.stab_sampled);

  // puncture output is already canonical, so pad round-trips exactly
  REQUIRE(canonicalize(g) == g);
  REQUIRE(puncture(pad(g), {0}, 1) == g);
}

TEST_CASE("pad round-trip lands on the canonical form") {
  BitMatrix t(4), g0(4);
  t.append_row(BitVec::from_string("1110"));
  g0.append_row(BitVec::from_string("0110"));
  GenTrioMatrix g = GenTrioMatrix::plain(std::move(t), std::move(g0));
  REQUIRE(verify_triorthogonal(g).ok());

  GenTrioMatrix c = canonicalize(g);
  REQUIRE_FALSE(c == g);
  REQUIRE(c.g_t().row(0).to_string() == "1000");
  REQUIRE(canonicalize(c) == c);
  REQUIRE(verify_triorthogonal(c).ok());
  REQUIRE(puncture(pad(g), {0}, 1) == c);
}

TEST_CASE("puncturing at no coordinates reduces the space") {
  GenTrioMatrix g = puncture(rm_generator(1, 3), {}, 0);
  REQUIRE(g.k() == 0);
  REQUIRE(g.g_0() == rref(rm_generator(1, 3)).r);
}

TEST_CASE("puncture rejects bad coordinate lists and wrong partitions") {
  REQUIRE_THROWS_AS(puncture(rm_generator(1, 3), {8}, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(puncture(rm_generator(1, 3), {1, 1}, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(puncture(rm_generator(1, 3), {0, 1}, 1), std::invalid_argument);
}

TEST_CASE("any 3-point puncture of the degree-2 space on 128 points has distance 5") {
  GenTrioMatrix g = puncture(rm_generator(2, 7), {0, 1, 2}, 3);
  REQUIRE(g.n() == 125);
  REQUIRE(g.k_t() == 3);
  REQUIRE(verify_triorthogonal(g).ok());
  CodeSummary s = z_distance(g);
  REQUIRE(s.d == 5);
}

TEST_CASE("the first quick-tier table row comes out [[114,14,3]] with 30 patterns") {
  GenTrioMatrix g = puncture(rm_generator(2, 7), kPunctureA, 14);
  REQUIRE(g.n() == 114);
  REQUIRE(g.k_t() == 14);
  REQUIRE(g.k_0() == 15);
  REQUIRE(verify_triorthogonal(g).ok());

  CodeSummary s = z_distance(g);
  REQUIRE(s.d == 3);
  REQUIRE(s.a_d == 30);

  DistanceOptions ex;
  ex.method = DistanceMethod::exhaustive;
  CodeSummary s2 = z_distance(g, ex);
  REQUIRE(s2.d == 3);
  REQUIRE(s2.a_d == 30);
  REQUIRE(s2.d_method == "exhaustive");

  REQUIRE(weight_mod_properties(g).ok());
}

TEST_CASE("weight classes fail on a non-punctured stabilizer block") {
  auto rep = weight_mod_properties(toy8());
  REQUIRE(rep.stabilizers_mod8);  // the all-ones row has weight 8
  REQUIRE_FALSE(rep.logicals_mod8_7);
  REQUIRE_FALSE(rep.ok());
}

TEST_CASE("combining a code with itself doubles the length into an all-even space") {
  GenTrioMatrix g = toy8();
  BitMatrix combined = combine_pad(g, g);
  REQUIRE(combined.n_cols() == 16);
  REQUIRE(combined.n_rows() == 5);
  REQUIRE(verify_triorthogonal_space(combined).ok());

  GenTrioMatrix other = puncture(rm_generator(1, 4), {0}, 1);
  REQUIRE_THROWS_AS(combine_pad(g, other), std::invalid_argument);
}

TEST_CASE("combining against a bare identity block reproduces pad") {
  GenTrioMatrix g = puncture(rm_generator(1, 4), {0}, 1);
  GenTrioMatrix f = GenTrioMatrix::plain(BitMatrix::identity(1), BitMatrix(1));
  REQUIRE(combine_pad(g, f) == pad(g));
}

TEST_CASE("combining two empty-logical codes is a direct sum of stabilizer spaces") {
  GenTrioMatrix g = puncture(rm_generator(1, 6), {}, 0);
  GenTrioMatrix f = puncture(rm_generator(0, 3), {}, 0);
  BitMatrix combined = combine_pad(g, f);
  REQUIRE(combined.n_cols() == 64 + 8);
  REQUIRE(combined.n_rows() == g.k_0() + f.k_0());
  REQUIRE(verify_triorthogonal_space(combined).ok());
}

TEST_CASE("the 8-qubit code has 28 weight-2 error patterns under either route") {
  GenTrioMatrix g = toy8();
  CodeSummary s = z_distance(g);
  REQUIRE(s.d == 2);
  REQUIRE(s.a_d == 28);
  REQUIRE(s.d_method == "macwilliams");

  DistanceOptions ex;
  ex.method = DistanceMethod::exhaustive;
  CodeSummary s2 = z_distance(g, ex);
  REQUIRE(s2.d == 2);
  REQUIRE(s2.a_d == 28);
  REQUIRE(s2.d_method == "exhaustive");

  REQUIRE(count_logical_z(g, 2) == 28);
  REQUIRE_THROWS_AS(count_logical_z(g, 3), infeasible);
}

TEST_CASE("minimum-weight patterns are genuine logicals") {
  GenTrioMatrix g = toy8();
  auto wits = min_weight_logicals(g);
  REQUIRE(wits.size() == 28);
  for (const auto& v : wits) {
    REQUIRE(v.weight() == 2);
    REQUIRE(v.dot(g.g_0().row(0)) == 0);
    bool anti = false;
    for (const auto& r : g.g_ccz().rows()) anti = anti || v.dot(r);
    REQUIRE(anti);
  }
}

TEST_CASE("catching logicals is deterministic and prefers early rows on ties") {
  GenTrioMatrix g = toy8();
  // points 0 and 1 differ only in the last variable: row 2 catches it alone
  BitVec l01(8);
  l01.set(0, true);
  l01.set(1, true);
  BitMatrix gp = greedy_catch(g, {l01});
  REQUIRE(gp.n_rows() == 1);
  REQUIRE(gp.row(0) == g.g_ccz().row(2));
  // points 0 and 3 differ in the last two variables: rows 1 and 2 tie
  BitVec l03(8);
  l03.set(0, true);
  l03.set(3, true);
  gp = greedy_catch(g, {l03});
  REQUIRE(gp.n_rows() == 1);
  REQUIRE(gp.row(0) == g.g_ccz().row(1));

  REQUIRE_THROWS_AS(greedy_catch(g, {BitVec::ones(8)}), uncatchable_logical);
  REQUIRE_THROWS_AS(greedy_catch(g, {}), std::invalid_argument);
}

TEST_CASE("catching every weight-2 pattern and absorbing the rows kills them all") {
  GenTrioMatrix g = toy8();
  auto wits = min_weight_logicals(g);
  BitMatrix gp = greedy_catch(g, wits);
  REQUIRE(gp.n_rows() <= 3);

  GenTrioMatrix up = unpuncture(g, gp);
  REQUIRE(up.n() == 8 + gp.n_rows());
  REQUIRE(up.k() == 0);  // the whole pattern went into the stabilizer block
  REQUIRE(up.k_0() == gp.n_rows() + 1);

  DistanceOptions low;
  low.weight_cap = 3;
  CodeSummary s = z_distance(up, low);
  REQUIRE_FALSE(s.d.has_value());
  REQUIRE(s.d_lower == 4);
}

TEST_CASE("unpuncture with no caught rows shifts nothing") {
  GenTrioMatrix g = puncture(rm_generator(1, 4), {0}, 1);
  GenTrioMatrix up = unpuncture(g, BitMatrix(g.n()));
  REQUIRE(up.n() == g.n());
  REQUIRE(up.k_t() == 1);
  REQUIRE(up.k_0() == g.k_0());
  REQUIRE(verify_triorthogonal(up).ok());
}

TEST_CASE("unpuncture refuses a partially caught pattern") {
  GenTrioMatrix g = toy8();
  BitMatrix gp(8);
  gp.append_row(g.g_ccz().row(0));  // one row of a three-row pattern
  REQUIRE_THROWS_AS(unpuncture(g, gp), std::invalid_argument);
}

TEST_CASE("code files round-trip bit-exactly") {
  CodeFile cf{toy8(), std::nullopt};
  std::ostringstream out;
  serialize_code(cf, out);
  std::istringstream in(out.str());
  CodeFile back = parse_code(in);
  REQUIRE(back.code == cf.code);
  REQUIRE_FALSE(back.provenance.has_value());
}

TEST_CASE("code files carry reconstruction provenance") {
  GenTrioMatrix g = puncture(rm_generator(1, 4), {0}, 1);
  CodeFile cf{g, CodeProvenance{1, 4, {0}}};
  std::ostringstream out;
  serialize_code(cf, out);

  SECTION("rows plus provenance agree") {
    std::istringstream in(out.str());
    CodeFile back = parse_code(in);
    REQUIRE(back.code == g);
    REQUIRE(back.provenance->r == 1);
    REQUIRE(back.provenance->coords == std::vector<std::size_t>{0});
  }
  SECTION("provenance alone reconstructs the code") {
    std::istringstream in(
        "triortho-code v1\nn 15\nkt 1\nkcs 0\nkccz 0\nk0 4\n"
        "base rm 1 4\npuncture 0\nend\n");
    CodeFile back = parse_code(in);
    REQUIRE(back.code == g);
  }
  SECTION("disagreeing provenance is rejected") {
    std::string text = out.str();
    auto at = text.find("puncture 0");
    text.replace(at, 10, "puncture 3");
    std::istringstream in(text);
    REQUIRE_THROWS_AS(parse_code(in), std::invalid_argument);
  }
}

TEST_CASE("malformed code files are rejected") {
  auto reject = [](const std::string& text) {
    std::istringstream in(text);
    REQUIRE_THROWS_AS(parse_code(in), std::invalid_argument);
  };
  reject("not a code file\n");
  reject("triortho-code v1\nn 4\nkt 0\nkcs 0\nkccz 0\nk0 1\nrows\n01\nend\n");  // short row
  reject("triortho-code v1\nn 4\nkt 0\nkcs 0\nkccz 0\nk0 2\nrows\n0110\n");     // truncated
  reject("triortho-code v1\nn 4\nkt 0\nkcs 0\nkccz 0\nk0 0\nend\n");            // no content
  reject("triortho-code v1\nn 8\nkt 1\nkcs 0\nkccz 0\nk0 4\nbase rm 1 3\npuncture 0\nend\n");
}

#pragma once

// Search for CCZ-type generalized triorthogonal codes on 2^m points.
//
// A triple is three pairwise-disjoint variable sets of size m/3 covering all
// m variables. Its three rows are the indicator codewords of the cubic-free
// monomial products; the only odd triple overlaps the case table allows are
// exactly the row triples whose variable masks union to everything, so over
// a degree-capped stabilizer base the whole generalized verification
// collapses to one combinatorial condition: no three rows from distinct
// patterns may cover all m variables.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "triortho/bigint.hpp"
#include "triortho/bits.hpp"
#include "triortho/reedmuller.hpp"
#include "triortho/rng.hpp"
#include "triortho/trio.hpp"

namespace triortho {

// Variable masks in monomial_mask convention: x_j is bit m-j.
struct Triple {
  std::uint32_t a = 0, b = 0, c = 0;
  bool operator==(const Triple&) const = default;
};

inline void check_triple(int m, const Triple& t) {
  if (m % 3) throw std::invalid_argument("triples need m divisible by 3");
  std::uint32_t full = (m == 32) ? ~0u : ((1u << m) - 1);
  if ((t.a & t.b) || (t.a & t.c) || (t.b & t.c) || (t.a | t.b | t.c) != full)
    throw std::invalid_argument("triple parts must be disjoint and cover all variables");
  int mu = m / 3;
  for (std::uint32_t part : {t.a, t.b, t.c})
    if (std::popcount(part) != mu)
      throw std::invalid_argument("triple parts must have size m/3");
}

// Flattened mask list, three per triple, pattern order preserved.
inline std::vector<std::uint32_t> triple_masks(const std::vector<Triple>& ts) {
  std::vector<std::uint32_t> out;
  for (const auto& t : ts) {
    out.push_back(t.a);
    out.push_back(t.b);
    out.push_back(t.c);
  }
  return out;
}

inline BitMatrix triple_rows(int m, const std::vector<Triple>& ts) {
  BitMatrix rows(std::size_t{1} << m);
  for (const auto& t : ts) {
    check_triple(m, t);
    rows.append_row(monomial_codeword(m, t.a));
    rows.append_row(monomial_codeword(m, t.b));
    rows.append_row(monomial_codeword(m, t.c));
  }
  return rows;
}

// Code assembly: the triples' rows as the CCZ block over a stabilizer block.
inline GenTrioMatrix ccz_code(int m, const std::vector<Triple>& ts, const BitMatrix& g0) {
  std::size_t n = std::size_t{1} << m;
  if (g0.n_cols() != n) throw std::invalid_argument("ccz_code: stabilizer length mismatch");
  return GenTrioMatrix::make(BitMatrix(n), BitMatrix(n), triple_rows(m, ts), g0);
}

// Degree-capped stabilizer base that keeps every cross term even.
inline BitMatrix ccz_base_g0(int m) { return rm_generator(m / 3 - 1, m); }

// The closed-form family: split the variables into three blocks of m/3. For
// a block-sized word u outside {0, all-ones} take
//   a = (u, ~u, 0),  b = (0, u, ~u),  c = (~u, 0, u).
// Any cross-pattern cover forces u = v = w along a cyclic chain of
// inclusions, so the family is violation-free; 2^(m/3) - 2 patterns. m = 3
// has no admissible u and uses the single pattern x1, x2, x3.
inline std::vector<Triple> analytic_triples(int m) {
  if (m % 3 || m < 3 || m > 30) throw std::invalid_argument("analytic_triples: bad m");
  const int mu = m / 3;
  // block b, slot t (0-based inside the block) -> variable x_{b*mu+t+1}
  auto place = [&](std::uint32_t u, int block) {
    std::uint32_t mask = 0;
    for (int t = 0; t < mu; ++t)
      if ((u >> (mu - 1 - t)) & 1) mask |= monomial_mask(m, block * mu + t + 1);
    return mask;
  };
  std::vector<Triple> out;
  if (m == 3) {
    out.push_back({monomial_mask(3, 1), monomial_mask(3, 2), monomial_mask(3, 3)});
    return out;
  }
  const std::uint32_t top = (1u << mu) - 1;
  for (std::uint32_t u = 1; u < top; ++u) {
    std::uint32_t v = top & ~u;
    out.push_back({place(u, 0) | place(v, 1), place(u, 1) | place(v, 2),
                   place(v, 0) | place(u, 2)});
  }
  return out;
}

// First (lexicographic in row indices) trio of rows from distinct patterns
// whose masks cover all m variables; nullopt when none exists. Rows from one
// pattern never cover by disjointness, so only cross-pattern trios matter.
inline std::optional<std::array<std::size_t, 3>> violation_scan(
    int m, const std::vector<std::uint32_t>& masks) {
  const std::uint32_t full = (m == 32) ? ~0u : ((1u << m) - 1);
  for (std::size_t i = 0; i < masks.size(); ++i)
    for (std::size_t j = i + 1; j < masks.size(); ++j)
      for (std::size_t l = j + 1; l < masks.size(); ++l) {
        if (i / 3 == j / 3 && j / 3 == l / 3) continue;
        if ((masks[i] | masks[j] | masks[l]) == full) return {{i, j, l}};
      }
  return std::nullopt;
}

inline std::optional<std::array<std::size_t, 3>> violation_scan(
    int m, const std::vector<Triple>& ts) {
  return violation_scan(m, triple_masks(ts));
}

struct MtOptions {
  std::uint64_t max_resamples = 1000000;
  bool shuffle = false;  // resample the hit patterns in random order
};

struct MtResult {
  std::optional<std::vector<Triple>> triples;
  std::uint64_t resamples = 0;
  std::optional<std::array<std::size_t, 3>> last_violation;
  bool ok() const { return triples.has_value(); }
  explicit operator bool() const { return ok(); }
};

namespace detail {

// Uniform triple: a uniform among size-mu subsets, b uniform in the
// complement, c the rest.
inline Triple random_triple(int m, CounterRng& rng) {
  std::vector<int> vars(m);
  for (int i = 0; i < m; ++i) vars[i] = i + 1;
  // partial Fisher-Yates: the first 2*mu entries become a then b
  const int mu = m / 3;
  for (int i = 0; i < 2 * mu; ++i) {
    auto j = i + static_cast<int>(rng.next_below(std::uint64_t(m - i)));
    std::swap(vars[i], vars[j]);
  }
  Triple t;
  for (int i = 0; i < mu; ++i) t.a |= monomial_mask(m, vars[i]);
  for (int i = mu; i < 2 * mu; ++i) t.b |= monomial_mask(m, vars[i]);
  std::uint32_t full = (m == 32) ? ~0u : ((1u << m) - 1);
  t.c = full & ~(t.a | t.b);
  return t;
}

}  // namespace detail

// Moser-Tardos style resampling: start from independent uniform patterns,
// and while some cross-pattern cover exists, redraw just the patterns
// containing its rows (ascending pattern index, or shuffled under the flag).
// Giving up at the budget is a normal outcome for infeasible (m, k).
inline MtResult moser_tardos(int m, std::size_t k, std::uint64_t seed, MtOptions opts = {}) {
  if (m % 3 || m < 3 || m > 30) throw std::invalid_argument("moser_tardos: bad m");
  CounterRng rng(seed);
  std::vector<Triple> ts;
  for (std::size_t i = 0; i < k; ++i) ts.push_back(detail::random_triple(m, rng));
  MtResult out;
  for (;;) {
    auto wit = violation_scan(m, ts);
    if (!wit) {
      out.triples = std::move(ts);
      return out;
    }
    out.last_violation = wit;
    if (out.resamples >= opts.max_resamples) return out;
    ++out.resamples;
    std::vector<std::size_t> hit;
    for (auto row : *wit) hit.push_back(row / 3);
    std::sort(hit.begin(), hit.end());
    hit.erase(std::unique(hit.begin(), hit.end()), hit.end());
    if (opts.shuffle) {
      for (std::size_t i = hit.size(); i > 1; --i)
        std::swap(hit[i - 1], hit[rng.next_below(i)]);
    }
    for (auto pat : hit) ts[pat] = detail::random_triple(m, rng);
  }
}

// Symmetric local-lemma accounting for the resampling process. p3 bounds the
// probability that three independent patterns cover (27 ordered part choices
// against two uniform size-m/3 draws), p2 the two-pattern analogue. The
// sufficient condition n^2 p3 + n p2 <= 1/4 holds up to roughly
// 2^(m (H(1/3) - 1/3)) patterns; both sides are exact rationals here.
struct LllBudget {
  BigRat p3;
  BigRat p2;
  long double n_max;  // 2^(m(H(1/3)-1/3)) = (3/2)^m
  bool condition_holds(std::size_t n_patterns) const {
    BigRat n(n_patterns);
    return n * n * p3 + n * p2 <= BigRat(1, 4);
  }
};

inline LllBudget lll_budget(int m) {
  if (m % 3 || m < 3) throw std::invalid_argument("lll_budget: bad m");
  const int mu = m / 3;
  LllBudget out;
  BigInt choose_mu = binomial(std::size_t(m), std::size_t(mu));
  out.p3 = BigRat(27 * binomial(std::size_t(2 * mu), std::size_t(mu)), choose_mu * choose_mu);
  out.p2 = BigRat(18, choose_mu);
  out.n_max = std::pow(1.5L, m);
  return out;
}

// ---------------------------------------------------------------------------
// Stabilizer completion.
//
// A vector z can join G_0 exactly when it is orthogonal to every wedge
// g_a ^ g_b (a <= b) of the current stack and to the all-ones row: the
// wedges encode all pair and triple parities involving z, and all-ones its
// weight. That dual space always contains span(G_0), so the completion loop
// adds dual basis vectors (lightest first, then lexicographic) and recomputes
// the wedge span until the dual collapses onto span(G_0). The result is
// maximal by construction; `added` is empty exactly when the input already
// was.
// ---------------------------------------------------------------------------

struct ExtendReport {
  GenTrioMatrix extended;
  std::vector<BitVec> added;
  std::size_t final_dual_dim = 0;  // == rank of the extended G_0
};

inline ExtendReport extend_g0(const GenTrioMatrix& g) {
  const std::size_t n = g.n();
  auto wedge_dual = [&](const BitMatrix& rows) {
    BitMatrix wedges(n);
    for (std::size_t a = 0; a < rows.n_rows(); ++a)
      for (std::size_t b = a; b < rows.n_rows(); ++b)
        wedges.append_row(wedge(rows.row(a), rows.row(b)));
    wedges.append_row(BitVec::ones(n));
    return kernel_basis(wedges);
  };

  BitMatrix g0 = g.g_0();
  ExtendReport rep{g, {}, 0};
  for (;;) {
    BitMatrix stack = g.logical_rows();
    stack.append_rows(g0);
    BitMatrix dual = wedge_dual(stack);
    rep.final_dual_dim = dual.n_rows();
    Rref have = rref(g0);
    std::vector<BitVec> cands;
    for (const auto& r : dual.rows())
      if (!have.contains(r)) cands.push_back(r);
    if (cands.empty()) break;
    auto best = std::min_element(cands.begin(), cands.end(), [](const BitVec& x, const BitVec& y) {
      if (x.weight() != y.weight()) return x.weight() < y.weight();
      return x.lex_less(y);
    });
    rep.added.push_back(*best);
    g0.append_row(std::move(*best));
  }
  rep.extended = GenTrioMatrix::make(g.g_t(), g.g_cs(), g.g_ccz(), std::move(g0));
  return rep;
}

}  // namespace triortho

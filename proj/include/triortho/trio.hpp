#pragma once

// Generalized triorthogonal matrices.
//
// A GenTrioMatrix stacks four row blocks over the same n columns:
//   G_T    k_T rows, odd weight, one T-type logical each
//   G_CS   2*k_CS rows in consecutive pairs (CS-type logical pairs)
//   G_CCZ  3*k_CCZ rows in consecutive triples (CCZ-type logical triples)
//   G_0    k_0 rows, the X-stabilizer generators
// The defining case table, with F the full stack and indices a,b,c into it:
//   sum_i F_a,i F_b,i F_c,i  mod 2
//     = 1  if a=b=c is a T row,
//          or the multiset is {a,a,b} with {a,b} a CS pair,
//          or a,b,c distinct forming a CCZ triple;
//     = 0  otherwise.
// Squaring bits is the identity over F2, so the {a,a,b} case is exactly the
// pairwise overlap condition and a=b=c is row weight.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "triortho/bigint.hpp"
#include "triortho/bits.hpp"
#include "triortho/enumeration.hpp"

namespace triortho {

struct infeasible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct uncatchable_logical : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class GenTrioMatrix {
 public:
  GenTrioMatrix() = default;

  static GenTrioMatrix make(BitMatrix t, BitMatrix cs, BitMatrix ccz, BitMatrix zero) {
    if (cs.n_rows() % 2) throw std::invalid_argument("GenTrioMatrix: CS rows must come in pairs");
    if (ccz.n_rows() % 3)
      throw std::invalid_argument("GenTrioMatrix: CCZ rows must come in triples");
    std::size_t n = t.n_cols();
    for (const BitMatrix* b : {&cs, &ccz, &zero})
      if (b->n_cols() != n) throw std::invalid_argument("GenTrioMatrix: column count mismatch");
    GenTrioMatrix g;
    g.g_t_ = std::move(t);
    g.g_cs_ = std::move(cs);
    g.g_ccz_ = std::move(ccz);
    g.g_0_ = std::move(zero);
    return g;
  }

  static GenTrioMatrix plain(BitMatrix t, BitMatrix zero) {
    std::size_t n = t.n_cols();
    return make(std::move(t), BitMatrix(n), BitMatrix(n), std::move(zero));
  }

  std::size_t n() const { return g_t_.n_cols(); }
  std::size_t k_t() const { return g_t_.n_rows(); }
  std::size_t k_cs() const { return g_cs_.n_rows() / 2; }
  std::size_t k_ccz() const { return g_ccz_.n_rows() / 3; }
  std::size_t k() const { return k_t() + 2 * k_cs() + 3 * k_ccz(); }
  std::size_t k_0() const { return g_0_.n_rows(); }

  const BitMatrix& g_t() const { return g_t_; }
  const BitMatrix& g_cs() const { return g_cs_; }
  const BitMatrix& g_ccz() const { return g_ccz_; }
  const BitMatrix& g_0() const { return g_0_; }

  // G_T, G_CS, G_CCZ stacked: one row per logical qubit factor.
  BitMatrix logical_rows() const {
    BitMatrix m(n());
    m.append_rows(g_t_);
    m.append_rows(g_cs_);
    m.append_rows(g_ccz_);
    return m;
  }

  // All four blocks stacked in order.
  BitMatrix full() const {
    BitMatrix m = logical_rows();
    m.append_rows(g_0_);
    return m;
  }

  bool operator==(const GenTrioMatrix& o) const {
    return g_t_ == o.g_t_ && g_cs_ == o.g_cs_ && g_ccz_ == o.g_ccz_ && g_0_ == o.g_0_;
  }

 private:
  BitMatrix g_t_, g_cs_, g_ccz_, g_0_;
};

// A failed case-table entry: the row multiset {a,b,c} (indices into full()),
// and the parity the table demanded there.
struct TrioViolation {
  std::array<std::size_t, 3> rows;
  bool expected;

  std::string describe() const {
    return "rows {" + std::to_string(rows[0]) + "," + std::to_string(rows[1]) + "," +
           std::to_string(rows[2]) + "} have triple overlap " + (expected ? "0" : "1") +
           ", need " + (expected ? "1" : "0");
  }
};

struct VerifyReport {
  std::optional<TrioViolation> violation;
  bool ok() const { return !violation.has_value(); }
  explicit operator bool() const { return ok(); }
};

namespace detail {

// Case-table membership helpers over full() row indices.
struct BlockIndex {
  std::size_t kt, kcs2, kccz3;  // raw row counts per block
  bool is_t(std::size_t a) const { return a < kt; }
  bool is_cs_pair(std::size_t a, std::size_t b) const {
    if (a < kt || a >= kt + kcs2 || b < kt || b >= kt + kcs2) return false;
    return (a - kt) / 2 == (b - kt) / 2 && a != b;
  }
  bool is_ccz_triple(std::size_t a, std::size_t b, std::size_t c) const {
    std::size_t lo = kt + kcs2;
    if (a < lo || a >= lo + kccz3 || b < lo || b >= lo + kccz3 || c < lo || c >= lo + kccz3)
      return false;
    return (a - lo) / 3 == (b - lo) / 3 && (b - lo) / 3 == (c - lo) / 3 && a != b && b != c &&
           a != c;
  }
};

}  // namespace detail

// Checks the full generalized case table; the first failing multiset becomes
// the witness. Runs the weight, pair, and triple loops separately.
inline VerifyReport verify_generalized(const GenTrioMatrix& g) {
  BitMatrix f = g.full();
  detail::BlockIndex bi{g.k_t(), 2 * g.k_cs(), 3 * g.k_ccz()};
  const std::size_t m = f.n_rows();

  for (std::size_t a = 0; a < m; ++a) {
    bool want = bi.is_t(a);
    if ((f.row(a).weight() % 2 == 1) != want) return {TrioViolation{{a, a, a}, want}};
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      bool want = bi.is_cs_pair(a, b);
      if ((f.row(a).overlap_weight(f.row(b)) % 2 == 1) != want)
        return {TrioViolation{{a, a, b}, want}};
    }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t c = b + 1; c < m; ++c) {
        bool want = bi.is_ccz_triple(a, b, c);
        if (triple_overlap(f.row(a), f.row(b), f.row(c)) != want)
          return {TrioViolation{{a, b, c}, want}};
      }
  return {};
}

// Plain triorthogonality: the same table with no CS/CCZ blocks allowed.
inline VerifyReport verify_triorthogonal(const GenTrioMatrix& g) {
  if (g.k_cs() || g.k_ccz())
    throw std::invalid_argument("verify_triorthogonal: CS/CCZ blocks present; use verify_generalized");
  return verify_generalized(g);
}

// A matrix spans a triorthogonal SPACE when every row weight, pairwise
// overlap, and triple overlap of a generating set is even. (Padding and
// combining produce these.)
inline VerifyReport verify_triorthogonal_space(const BitMatrix& f) {
  const std::size_t m = f.n_rows();
  for (std::size_t a = 0; a < m; ++a)
    if (f.row(a).weight() % 2) return {TrioViolation{{a, a, a}, false}};
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      if (f.row(a).overlap_weight(f.row(b)) % 2) return {TrioViolation{{a, a, b}, false}};
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      for (std::size_t c = b + 1; c < m; ++c)
        if (triple_overlap(f.row(a), f.row(b), f.row(c))) return {TrioViolation{{a, b, c}, false}};
  return {};
}

// Pads a plain triorthogonal matrix to the triorthogonal space
//   [ I G_T ]
//   [ 0 G_0 ]
// with k_T fresh coordinates prepended. Every row weight turns even and the
// identity block cancels the odd pair/triple overlaps of the logical rows.
inline BitMatrix pad(const GenTrioMatrix& g) {
  if (g.k_cs() || g.k_ccz())
    throw std::invalid_argument("pad: only plain triorthogonal matrices; see combine_pad");
  const std::size_t kt = g.k_t();
  const std::size_t n2 = kt + g.n();
  BitMatrix out(n2);
  for (std::size_t i = 0; i < kt; ++i) {
    BitVec r(n2);
    r.set(i, true);
    for (auto c : g.g_t().row(i).support()) r.set(kt + c, true);
    out.append_row(std::move(r));
  }
  for (std::size_t i = 0; i < g.k_0(); ++i) {
    BitVec r(n2);
    for (auto c : g.g_0().row(i).support()) r.set(kt + c, true);
    out.append_row(std::move(r));
  }
  return out;
}

// Combines two generalized triorthogonal matrices with identical block
// shapes into one triorthogonal space over n_F + n_G columns:
//   [ F_T   G_T   ]
//   [ F_CS  G_CS  ]
//   [ F_CCZ G_CCZ ]
//   [ 0     G_0   ]
//   [ F_0   0     ]
// Odd terms in the case tables pair up across the two halves and cancel.
inline BitMatrix combine_pad(const GenTrioMatrix& g, const GenTrioMatrix& f) {
  if (f.k_t() != g.k_t() || f.k_cs() != g.k_cs() || f.k_ccz() != g.k_ccz())
    throw std::invalid_argument("combine_pad: block shapes differ");
  const std::size_t nf = f.n();
  const std::size_t n2 = nf + g.n();
  BitMatrix out(n2);
  BitMatrix fl = f.logical_rows();
  BitMatrix gl = g.logical_rows();
  for (std::size_t i = 0; i < gl.n_rows(); ++i) {
    BitVec r(n2);
    for (auto c : fl.row(i).support()) r.set(c, true);
    for (auto c : gl.row(i).support()) r.set(nf + c, true);
    out.append_row(std::move(r));
  }
  for (std::size_t i = 0; i < g.k_0(); ++i) {
    BitVec r(n2);
    for (auto c : g.g_0().row(i).support()) r.set(nf + c, true);
    out.append_row(std::move(r));
  }
  for (std::size_t i = 0; i < f.k_0(); ++i) {
    BitVec r(n2);
    for (auto c : f.g_0().row(i).support()) r.set(c, true);
    out.append_row(std::move(r));
  }
  return out;
}

// Punctures a triorthogonal space at the given coordinates. The space is put
// in rref with the punctured coordinates ordered first (in the order given),
// which forces every non-pivot-block row to vanish on ALL punctured columns:
// a row's entries before its pivot are zero by definition of echelon form.
// Pivot rows landing in the punctured block become logical rows, split into
// T/CS/CCZ blocks by the caller's partition; the rest become G_0.
inline GenTrioMatrix puncture(const BitMatrix& space, const std::vector<std::size_t>& coords,
                              std::size_t k_t, std::size_t k_cs = 0, std::size_t k_ccz = 0) {
  const std::size_t n = space.n_cols();
  std::vector<bool> mark(n, false);
  for (auto c : coords) {
    if (c >= n) throw std::invalid_argument("puncture: coordinate out of range");
    if (mark[c]) throw std::invalid_argument("puncture: duplicate coordinate");
    mark[c] = true;
  }
  std::vector<std::size_t> perm(coords);
  for (std::size_t j = 0; j < n; ++j)
    if (!mark[j]) perm.push_back(j);

  Rref e = rref(space.select_columns(perm));
  const std::size_t p = coords.size();
  std::vector<std::size_t> tail_cols;
  for (std::size_t j = p; j < n; ++j) tail_cols.push_back(j);

  BitMatrix logical(n - p), zero(n - p);
  std::size_t found_k = 0;
  for (std::size_t i = 0; i < e.rank; ++i) {
    BitVec tail(n - p);
    for (std::size_t j = p; j < n; ++j)
      if (e.r.row(i).get(j)) tail.set(j - p, true);
    if (e.pivots[i] < p) {
      logical.append_row(std::move(tail));
      ++found_k;
    } else {
      zero.append_row(std::move(tail));
    }
  }
  if (k_t + 2 * k_cs + 3 * k_ccz != found_k)
    throw std::invalid_argument("puncture: block partition covers " +
                                std::to_string(k_t + 2 * k_cs + 3 * k_ccz) + " rows, pivots give " +
                                std::to_string(found_k));
  BitMatrix t(n - p), cs(n - p), ccz(n - p);
  for (std::size_t i = 0; i < found_k; ++i) {
    if (i < k_t)
      t.append_row(logical.row(i));
    else if (i < k_t + 2 * k_cs)
      cs.append_row(logical.row(i));
    else
      ccz.append_row(logical.row(i));
  }
  return GenTrioMatrix::make(std::move(t), std::move(cs), std::move(ccz), std::move(zero));
}

// Canonical form: G_0 in rref, logical rows reduced modulo span(G_0).
// Reduction by even-overlap rows preserves every case-table parity, and
// puncture(pad(g)) lands exactly on this form.
inline GenTrioMatrix canonicalize(const GenTrioMatrix& g) {
  Rref z = rref(g.g_0());
  auto reduce_block = [&](const BitMatrix& b) {
    BitMatrix out(g.n());
    for (const auto& r : b.rows()) out.append_row(z.reduce(r));
    return out;
  };
  return GenTrioMatrix::make(reduce_block(g.g_t()), reduce_block(g.g_cs()),
                             reduce_block(g.g_ccz()), z.r);
}

// Moves the logicals caught by g_prime into the stabilizer block behind one
// fresh coordinate each:
//   [ 0 G''   ]   G'' = logical rows independent of span(G' + G_0)
//   [ I G'    ]
//   [ 0 G_0   ]
// Contract: rows of g_prime are representatives drawn from the logical
// blocks (as greedy_catch returns); arbitrary combinations of several rows
// can break the even-overlap conditions against the remaining logicals. A
// CS/CCZ pattern must be caught whole or not at all.
inline GenTrioMatrix unpuncture(const GenTrioMatrix& g, const BitMatrix& g_prime) {
  if (g_prime.n_cols() != g.n()) throw std::invalid_argument("unpuncture: column count mismatch");
  const std::size_t r = g_prime.n_rows();
  const std::size_t n2 = r + g.n();

  BitMatrix caught_space(g.n());
  caught_space.append_rows(g_prime);
  caught_space.append_rows(g.g_0());
  Rref caught = rref(caught_space);

  auto shifted = [&](const BitVec& v, std::size_t lead = SIZE_MAX) {
    BitVec row(n2);
    if (lead != SIZE_MAX) row.set(lead, true);
    for (auto c : v.support()) row.set(r + c, true);
    return row;
  };
  // successive independence against the growing caught span, original order
  auto filter_block = [&](const BitMatrix& block, std::size_t pattern, const char* what) {
    BitMatrix out(n2);
    std::size_t kept = 0;
    for (std::size_t i = 0; i < block.n_rows(); ++i) {
      if (caught.contains(block.row(i))) continue;
      caught_space.append_row(block.row(i));
      caught = rref(caught_space);
      out.append_row(shifted(block.row(i)));
      ++kept;
    }
    if (kept % pattern)
      throw std::invalid_argument(std::string("unpuncture: partially caught ") + what +
                                  " pattern");
    return out;
  };
  BitMatrix t = filter_block(g.g_t(), 1, "T");
  BitMatrix cs = filter_block(g.g_cs(), 2, "CS");
  BitMatrix ccz = filter_block(g.g_ccz(), 3, "CCZ");

  BitMatrix zero(n2);
  for (std::size_t i = 0; i < r; ++i) zero.append_row(shifted(g_prime.row(i), i));
  for (std::size_t i = 0; i < g.k_0(); ++i) zero.append_row(shifted(g.g_0().row(i)));
  return GenTrioMatrix::make(std::move(t), std::move(cs), std::move(ccz), std::move(zero));
}

// Selects logical rows that together anticommute with every listed logical:
// repeatedly the row catching the most so-far-uncaught ones (ties to the
// lowest row index). Throws if some logical evades every row, which cannot
// happen for genuine Z-logicals.
inline BitMatrix greedy_catch(const GenTrioMatrix& g, const std::vector<BitVec>& logicals) {
  if (logicals.empty()) throw std::invalid_argument("greedy_catch: empty logical list");
  BitMatrix cand = g.logical_rows();
  std::vector<bool> caught(logicals.size(), false);
  std::size_t remaining = logicals.size();
  BitMatrix out(g.n());
  std::vector<bool> used(cand.n_rows(), false);
  while (remaining) {
    std::size_t best = cand.n_rows();
    std::size_t best_count = 0;
    for (std::size_t i = 0; i < cand.n_rows(); ++i) {
      if (used[i]) continue;
      std::size_t c = 0;
      for (std::size_t j = 0; j < logicals.size(); ++j)
        if (!caught[j] && cand.row(i).dot(logicals[j])) ++c;
      if (c > best_count) {
        best_count = c;
        best = i;
      }
    }
    if (best == cand.n_rows())
      throw uncatchable_logical("greedy_catch: remaining logicals commute with every row");
    used[best] = true;
    out.append_row(cand.row(best));
    for (std::size_t j = 0; j < logicals.size(); ++j)
      if (!caught[j] && cand.row(best).dot(logicals[j])) {
        caught[j] = true;
        --remaining;
      }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Z-distance and logical counting.
//
// A weight-w Z-logical is a vector orthogonal to every G_0 row but not to all
// logical rows; A_w counts them. Per weight the engine picks a route:
//   * MacWilliams on span(G_0), exact at any weight, when dim G_0 is small;
//   * meet-in-the-middle count, valid while no lighter G_0-orthogonal
//     vector exists;
//   * a direct streamed scan over all C(n,w) supports as last resort.
// The subtraction term (vectors orthogonal to the whole stack) uses the same
// routes; when the full span is too big for MacWilliams, the ascending walk
// itself certifies the term is zero until the first full-orthogonal hit.
// ---------------------------------------------------------------------------

enum class DistanceMethod {
  automatic,    // cheapest valid route per weight
  exhaustive,   // low-weight scans only, never the identity transform
  macwilliams,  // identity-transform counts only; throws when spans are too big
};

struct DistanceOptions {
  DistanceMethod method = DistanceMethod::automatic;
  std::size_t weight_cap = 16;   // give up (bound-only) past this weight
  double scan_budget = 3e9;      // meet-in-the-middle cost ceiling per weight
  double naive_budget = 3e8;     // direct C(n,w) stream ceiling
  unsigned mw_cap_bits = 30;     // span enumeration cap for MacWilliams
  std::size_t witness_cap = 0;   // collect up to this many logicals at d
};

struct CodeSummary {
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<std::size_t> d;
  std::string d_method;       // "exhaustive" | "macwilliams" | "bound-only"
  std::size_t d_lower = 1;    // certified: no logical of weight < d_lower
  BigInt a_d = 0;             // logical count at d when known
  std::vector<BitVec> witnesses;
};

namespace detail {

// Streamed weight-w pass over the full stack: counts G_0-orthogonal supports
// and how many of those are also orthogonal to every logical row.
struct NaiveCounts {
  std::uint64_t g0_orth = 0;
  std::uint64_t full_orth = 0;
};

inline NaiveCounts naive_weight_scan(const GenTrioMatrix& g, std::size_t w, std::size_t wit_cap,
                                     std::vector<BitVec>* wits) {
  BitMatrix stack = g.full();  // logical rows first, then G_0
  const std::size_t kl = g.k();
  auto cs = column_syndromes(stack);
  NaiveCounts out;
  const std::size_t lw = kl / kWordBits;  // words fully inside the logical prefix
  const Word lmask = (kl % kWordBits) ? ((Word{1} << (kl % kWordBits)) - 1) : 0;
  for_each_subset_xor(cs, w, [&](const std::vector<std::size_t>& c, const Word* x) {
    // G_0 bits live above the logical prefix inside the packed syndrome
    bool g0_zero = true;
    for (std::size_t i = 0; i < cs.sw; ++i) {
      Word v = x[i];
      if (i < lw)
        continue;  // entire word is logical bits
      if (i == lw && lmask) v &= ~lmask;
      if (v) {
        g0_zero = false;
        break;
      }
    }
    if (!g0_zero) return;
    ++out.g0_orth;
    bool log_zero = true;
    for (std::size_t i = 0; i <= lw && i < cs.sw; ++i) {
      Word v = x[i];
      if (i == lw) v &= lmask;
      if (v) {
        log_zero = false;
        break;
      }
    }
    if (log_zero)
      ++out.full_orth;
    else if (wits && wits->size() < wit_cap) {
      BitVec v(g.n());
      for (auto idx : c) v.set(idx, true);
      wits->push_back(std::move(v));
    }
  });
  return out;
}

}  // namespace detail

// Walks w = 1, 2, ... until the first weight with Z-logicals. See the section
// comment for routing; result records which route decided the landing weight.
inline CodeSummary z_distance(const GenTrioMatrix& g, const DistanceOptions& opts = {}) {
  CodeSummary out;
  out.n = g.n();
  out.k = g.k();

  BitMatrix logical = g.logical_rows();
  BitMatrix fullm = g.full();

  const bool allow_mac = opts.method != DistanceMethod::exhaustive;
  const bool allow_scan = opts.method != DistanceMethod::macwilliams;
  std::optional<std::vector<BigInt>> mac_g0, mac_full;
  const bool g0_mac_ok = allow_mac && rank(g.g_0()) <= opts.mw_cap_bits;
  const bool full_mac_ok = allow_mac && rank(fullm) <= opts.mw_cap_bits;
  if (opts.method == DistanceMethod::macwilliams && (!g0_mac_ok || !full_mac_ok))
    throw cap_exceeded("z_distance: span too large for the requested identity-transform route");
  auto mac_g0_at = [&](std::size_t w) {
    if (!mac_g0)
      mac_g0 = macwilliams_prefix(enumerate_span(g.g_0(), {.cap_bits = opts.mw_cap_bits}),
                                  std::min(opts.weight_cap, g.n()));
    return (*mac_g0)[w];
  };
  auto mac_full_at = [&](std::size_t w) {
    if (!mac_full)
      mac_full = macwilliams_prefix(enumerate_span(fullm, {.cap_bits = opts.mw_cap_bits}),
                                    std::min(opts.weight_cap, g.n()));
    return (*mac_full)[w];
  };

  bool g0_hit_below = false;    // some G_0-orthogonal vector of lower weight exists
  bool full_hit_below = false;  // same for the full stack

  for (std::size_t w = 1; w <= std::min(opts.weight_cap, g.n()); ++w) {
    const double mitm_cost = scan_cost_estimate(g.n(), w);
    double naive_cost = 1;
    for (std::size_t i = 0; i < w; ++i) naive_cost *= double(g.n() - i) / double(i + 1);

    BigInt cg0, cfull;
    bool have_cfull = false;
    std::string method;
    WitnessSink sink(opts.witness_cap ? opts.witness_cap + /*stabilizer slack*/ 64 : 0);
    WitnessSink* sinkp = opts.witness_cap ? &sink : nullptr;

    if (g0_mac_ok) {
      cg0 = mac_g0_at(w);
      method = "macwilliams";
      // MacWilliams gives counts, not vectors; fetch witnesses separately
      if (sinkp && cg0 > 0 && !g0_hit_below && mitm_cost <= opts.scan_budget)
        count_orthogonal_at_weight(g.g_0(), w, sinkp);
    } else if (allow_scan && !g0_hit_below && mitm_cost <= opts.scan_budget) {
      cg0 = count_orthogonal_at_weight(g.g_0(), w, sinkp);
      method = "exhaustive";
    } else if (allow_scan && naive_cost <= opts.naive_budget) {
      auto nc = detail::naive_weight_scan(g, w, opts.witness_cap, &out.witnesses);
      cg0 = nc.g0_orth;
      cfull = nc.full_orth;
      have_cfull = true;
      method = "exhaustive";
    } else {
      out.d_method = "bound-only";
      out.d_lower = w;
      return out;
    }

    if (cg0 == 0) {
      out.d_lower = w + 1;
      continue;
    }

    if (!have_cfull) {
      // an absent full-orthogonal hit below w is certified by this very walk
      // (cg0 = 0 weights force cfull = 0), which keeps the scan route valid
      if (allow_scan && !full_hit_below && mitm_cost <= opts.scan_budget) {
        cfull = count_orthogonal_at_weight(fullm, w);
      } else if (full_mac_ok) {
        cfull = mac_full_at(w);
      } else if (allow_scan && naive_cost <= opts.naive_budget) {
        auto nc = detail::naive_weight_scan(g, w, 0, nullptr);
        cfull = nc.full_orth;
      } else {
        out.d_method = "bound-only";
        out.d_lower = w;
        return out;
      }
    }

    BigInt a = cg0 - cfull;
    if (a < 0) throw std::logic_error("z_distance: negative logical count");
    if (a > 0) {
      out.d = w;
      out.d_method = method;
      out.d_lower = w;
      out.a_d = a;
      if (sinkp) {
        // keep only genuine logicals: drop vectors orthogonal to all rows
        for (auto& v : sink.vectors(g.n())) {
          bool anti = false;
          for (const auto& lr : logical.rows()) anti = anti || lr.dot(v);
          if (anti && out.witnesses.size() < opts.witness_cap)
            out.witnesses.push_back(std::move(v));
        }
      }
      return out;
    }
    g0_hit_below = true;
    full_hit_below = cfull > 0;
    out.d_lower = w + 1;
  }
  out.d_method = "bound-only";
  out.d_lower = std::min(opts.weight_cap, g.n()) + 1;
  return out;
}

// A_d for a stated d: runs the ascending walk and demands it lands exactly on
// d. Weights below d must be logical-free or the request was inconsistent.
inline BigInt count_logical_z(const GenTrioMatrix& g, std::size_t d,
                              DistanceOptions opts = {}) {
  opts.weight_cap = std::max(opts.weight_cap, d);
  CodeSummary s = z_distance(g, opts);
  if (!s.d) {
    if (s.d_lower > d) return 0;
    throw infeasible("count_logical_z: no route reached weight " + std::to_string(d) +
                     " (certified only below " + std::to_string(s.d_lower) + ")");
  }
  if (*s.d != d)
    throw infeasible("count_logical_z: distance is " + std::to_string(*s.d) + ", not " +
                     std::to_string(d));
  return s.a_d;
}

// All minimum-weight Z-logicals, for the catching pipeline. Count must match
// A_d or the witness cap was too small.
inline std::vector<BitVec> min_weight_logicals(const GenTrioMatrix& g, std::size_t cap = 100000,
                                               DistanceOptions opts = {}) {
  opts.witness_cap = cap;
  CodeSummary s = z_distance(g, opts);
  if (!s.d) throw infeasible("min_weight_logicals: distance not determined");
  if (BigInt(s.witnesses.size()) != s.a_d)
    throw infeasible("min_weight_logicals: collected " + std::to_string(s.witnesses.size()) +
                     " of " + s.a_d.str() + " logicals; raise the cap");
  return std::move(s.witnesses);
}

// Weight structure report for punctured triply-even spaces: stabilizer
// weights all 0 mod 8 (exhaustive within the cap, else sampled) and the
// stock logical basis all 7 mod 8.
struct WeightModReport {
  bool stabilizers_mod8 = false;
  bool stab_sampled = false;
  bool logicals_mod8_7 = false;
  bool ok() const { return stabilizers_mod8 && logicals_mod8_7; }
};

inline WeightModReport weight_mod_properties(const GenTrioMatrix& g, unsigned cap_bits = 24,
                                             std::uint64_t samples = 100000,
                                             std::uint64_t seed = 1) {
  WeightModReport rep;
  Rref z = rref(g.g_0());
  rep.stabilizers_mod8 = true;
  if (z.rank <= cap_bits) {
    for_each_in_span(z.r.rows(), [&](const BitVec& v) {
      rep.stabilizers_mod8 = rep.stabilizers_mod8 && v.weight() % 8 == 0;
    });
  } else {
    rep.stab_sampled = true;
    CounterRng rng(seed);
    for (std::uint64_t s = 0; s < samples && rep.stabilizers_mod8; ++s) {
      BitVec v(g.n());
      for (std::size_t i = 0; i < z.rank; ++i)
        if (rng.next_u64() & 1) v ^= z.r.row(i);
      rep.stabilizers_mod8 = v.weight() % 8 == 0;
    }
  }
  rep.logicals_mod8_7 = true;
  BitMatrix lr = g.logical_rows();
  for (const auto& r : lr.rows())
    rep.logicals_mod8_7 = rep.logicals_mod8_7 && r.weight() % 8 == 7;
  return rep;
}

}  // namespace triortho

#pragma once

// Reed-Muller codes RM(r, m) over 2^m evaluation points.
//
// Conventions, fixed across the whole library and file formats:
//  * points are m-bit strings (x1..xm) with x1 the most significant bit, so
//    the point index is sum_j x_j * 2^(m-j);
//  * a monomial is the set of its variables, stored in the same bit encoding
//    (variable x_j <-> bit m-j), so a point c lies in the support of monomial
//    t exactly when (c & t) == t;
//  * generator rows are ordered by monomial degree, then lexicographically by
//    variable index list (x1x2 before x1x3 before x2x3).

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "triortho/bits.hpp"
#include "triortho/rng.hpp"

namespace triortho {

inline std::size_t point_index(const std::vector<int>& x) {
  std::size_t idx = 0;
  for (int b : x) idx = (idx << 1) | static_cast<std::size_t>(b & 1);
  return idx;
}

inline std::uint32_t monomial_mask(int m, int var) {
  if (var < 1 || var > m) throw std::invalid_argument("monomial variable out of range");
  return std::uint32_t{1} << (m - var);
}

inline std::uint32_t monomial_mask(int m, const std::vector<int>& vars) {
  std::uint32_t t = 0;
  for (int j : vars) t |= monomial_mask(m, j);
  return t;
}

// Indicator vector of the monomial: 1 at every point where all its variables
// are 1. The empty monomial is the all-ones row.
inline BitVec monomial_codeword(int m, std::uint32_t mask) {
  BitVec v(std::size_t{1} << m);
  for (std::size_t c = 0; c < v.size(); ++c)
    if ((c & mask) == mask) v.set(c, true);
  return v;
}

inline BitVec monomial_codeword(int m, const std::vector<int>& vars) {
  return monomial_codeword(m, monomial_mask(m, vars));
}

// Monomial masks of degree <= r in the global order.
inline std::vector<std::uint32_t> rm_monomials(int r, int m) {
  std::vector<std::uint32_t> out;
  for (int deg = 0; deg <= r; ++deg) {
    // Combinations of variable indices in lexicographic order.
    std::vector<int> c(deg);
    for (int i = 0; i < deg; ++i) c[i] = i + 1;
    for (;;) {
      out.push_back(deg == 0 ? 0 : monomial_mask(m, c));
      if (deg == 0) break;
      int i = deg - 1;
      while (i >= 0 && c[i] == m - (deg - 1 - i)) --i;
      if (i < 0) break;
      ++c[i];
      for (int j = i + 1; j < deg; ++j) c[j] = c[j - 1] + 1;
    }
  }
  return out;
}

inline std::string monomial_name(int m, std::uint32_t mask) {
  if (mask == 0) return "1";
  std::string s;
  for (int j = 1; j <= m; ++j)
    if (mask & (std::uint32_t{1} << (m - j))) s += "x" + std::to_string(j);
  return s;
}

inline BitMatrix rm_generator(int r, int m) {
  if (m < 0 || m > 30 || r < -1 || r > m) throw std::invalid_argument("rm_generator: bad (r, m)");
  BitMatrix g(std::size_t{1} << m);
  if (r < 0) return g;  // RM(-1, m) is the zero code
  for (auto mask : rm_monomials(r, m)) g.append_row(monomial_codeword(m, mask));
  return g;
}

// Small binomial that fits machine integers; used only for dimensions.
inline std::size_t binomial_small(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r = r * static_cast<std::size_t>(n - i) / static_cast<std::size_t>(i + 1);
  return r;
}

inline std::size_t rm_dim(int r, int m) {
  if (r < 0) return 0;
  std::size_t d = 0;
  for (int j = 0; j <= r; ++j) d += binomial_small(m, j);
  return d;
}

inline std::size_t rm_distance(int r, int m) { return std::size_t{1} << (m - r); }

// RM(r, m)^perp = RM(m - r - 1, m): checked by dimension count plus full
// pairwise orthogonality of the two generator matrices.
inline bool rm_dual_check(int r, int m) {
  BitMatrix g = rm_generator(r, m);
  BitMatrix h = rm_generator(m - r - 1, m);
  if (rm_dim(r, m) + rm_dim(m - r - 1, m) != (std::size_t{1} << m)) return false;
  for (const auto& u : g.rows())
    for (const auto& v : h.rows())
      if (u.dot(v)) return false;
  return true;
}

// Pointwise products of RM(r) and RM(r2) codewords land in RM(r + r2):
// sufficient to check on generator rows since wedge is bilinear over spans.
inline bool rm_wedge_closure_check(int r, int r2, int m) {
  BitMatrix a = rm_generator(r, m);
  BitMatrix b = rm_generator(r2, m);
  Rref target = rref(rm_generator(std::min(r + r2, m), m));
  for (const auto& u : a.rows())
    for (const auto& v : b.rows())
      if (!target.contains(wedge(u, v))) return false;
  return true;
}

// Every codeword weight divisible by 8. Within cap_bits the whole span is
// enumerated; above it the verdict comes from random codewords and is flagged
// sampled so callers can never mistake it for an exhaustive answer.
struct TriplyEvenVerdict {
  bool ok = false;
  bool sampled = false;
};

inline TriplyEvenVerdict rm_triply_even_check(int r, int m, unsigned cap_bits = 24,
                                              std::uint64_t samples = 1000000,
                                              std::uint64_t seed = 1) {
  BitMatrix g = rm_generator(r, m);
  TriplyEvenVerdict v;
  v.ok = true;
  if (g.n_rows() <= cap_bits) {
    for_each_in_span(g, [&](const BitVec& w) { v.ok = v.ok && (w.weight() % 8 == 0); });
    return v;
  }
  v.sampled = true;
  CounterRng rng(seed);
  for (std::uint64_t s = 0; s < samples && v.ok; ++s) {
    BitVec w(g.n_cols());
    for (std::size_t i = 0; i < g.n_rows(); ++i)
      if (rng.next_u64() & 1) w ^= g.row(i);
    v.ok = w.weight() % 8 == 0;
  }
  return v;
}

// Preparation circuit for the uniform superposition over RM(r, m): qubits are
// labelled by points, labels of weight <= r start in |+> and the rest in |0>;
// round j targets the bit of variable x_j. Every qubit is touched once per
// round, so the CNOT depth equals m.
struct EncoderSchedule {
  int r = 0;
  int m = 0;
  std::vector<std::size_t> plus_qubits;                // ascending label order
  std::vector<std::array<std::size_t, 2>> cnots;       // {control, target}, time order
  std::vector<std::size_t> round_offsets;              // cnots index where each round starts
  std::size_t n_qubits() const { return std::size_t{1} << m; }
  std::size_t depth() const { return static_cast<std::size_t>(m); }
};

inline EncoderSchedule encoder_schedule(int r, int m) {
  if (m < 1 || m > 24 || r < 0 || r > m) throw std::invalid_argument("encoder_schedule: bad (r, m)");
  EncoderSchedule s;
  s.r = r;
  s.m = m;
  const std::size_t n = std::size_t{1} << m;
  for (std::size_t l = 0; l < n; ++l)
    if (std::popcount(l) <= static_cast<unsigned>(r)) s.plus_qubits.push_back(l);
  for (int j = 1; j <= m; ++j) {
    s.round_offsets.push_back(s.cnots.size());
    const std::size_t bit = std::size_t{1} << (m - j);
    for (std::size_t l = 0; l < n; ++l)
      if (!(l & bit)) s.cnots.push_back({l, l | bit});
  }
  return s;
}

}  // namespace triortho

#pragma once

// Bit-packed linear algebra over GF(2).
//
// Vectors are packed little-endian into 64-bit words: coordinate i lives in
// word i/64 at bit i%64. Coordinate 0 is the leftmost character of the ASCII
// form used by the file format, so from_string/to_string round-trip exactly.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace triortho {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

// Thrown when an enumeration would exceed its configured cap.
struct cap_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t n) : n_(n), w_((n + kWordBits - 1) / kWordBits, 0) {}

  static BitVec from_string(std::string_view s) {
    BitVec v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '1') {
        v.set(i, true);
      } else if (s[i] != '0') {
        throw std::invalid_argument("BitVec::from_string: expected '0'/'1'");
      }
    }
    return v;
  }

  static BitVec ones(std::size_t n) {
    BitVec v(n);
    for (auto& w : v.w_) w = ~Word{0};
    v.mask_tail();
    return v;
  }

  static BitVec unit(std::size_t n, std::size_t i) {
    BitVec v(n);
    v.set(i, true);
    return v;
  }

  std::size_t size() const { return n_; }

  bool get(std::size_t i) const { return (w_[i / kWordBits] >> (i % kWordBits)) & 1; }

  void set(std::size_t i, bool b) {
    Word mask = Word{1} << (i % kWordBits);
    if (b)
      w_[i / kWordBits] |= mask;
    else
      w_[i / kWordBits] &= ~mask;
  }

  void flip(std::size_t i) { w_[i / kWordBits] ^= Word{1} << (i % kWordBits); }

  std::size_t weight() const {
    std::size_t c = 0;
    for (Word w : w_) c += std::popcount(w);
    return c;
  }

  bool is_zero() const {
    for (Word w : w_)
      if (w) return false;
    return true;
  }

  BitVec& operator^=(const BitVec& o) {
    check_size(o);
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
    return *this;
  }

  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }

  // Coordinatewise AND; "wedge" in the polynomial picture since
  // indicator(f) AND indicator(g) = indicator(f*g).
  friend BitVec wedge(BitVec a, const BitVec& b) {
    a.check_size(b);
    for (std::size_t i = 0; i < a.w_.size(); ++i) a.w_[i] &= b.w_[i];
    return a;
  }

  // Parity of the overlap |u AND v|.
  bool dot(const BitVec& o) const {
    check_size(o);
    Word acc = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) acc ^= w_[i] & o.w_[i];
    return std::popcount(acc) & 1;
  }

  std::size_t overlap_weight(const BitVec& o) const {
    check_size(o);
    std::size_t c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
    return c;
  }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

  // Indices of set coordinates, ascending.
  std::vector<std::size_t> support() const {
    std::vector<std::size_t> out;
    for (std::size_t wi = 0; wi < w_.size(); ++wi) {
      Word w = w_[wi];
      while (w) {
        out.push_back(wi * kWordBits + std::countr_zero(w));
        w &= w - 1;
      }
    }
    return out;
  }

  bool operator==(const BitVec& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const BitVec& o) const { return !(*this == o); }

  // Order by first differing coordinate (bit 0 beats bit 1 there).
  bool lex_less(const BitVec& o) const {
    check_size(o);
    for (std::size_t i = 0; i < w_.size(); ++i) {
      Word d = w_[i] ^ o.w_[i];
      if (d) return !((w_[i] >> std::countr_zero(d)) & 1);
    }
    return false;
  }

  const std::vector<Word>& words() const { return w_; }
  std::vector<Word>& words() { return w_; }

 private:
  void check_size(const BitVec& o) const {
    if (n_ != o.n_) throw std::invalid_argument("BitVec: length mismatch");
  }
  void mask_tail() {
    std::size_t r = n_ % kWordBits;
    if (r && !w_.empty()) w_.back() &= (Word{1} << r) - 1;
  }

  std::size_t n_ = 0;
  std::vector<Word> w_;
};

// Parity of |u AND v AND w|.
inline bool triple_overlap(const BitVec& u, const BitVec& v, const BitVec& w) {
  if (u.size() != v.size() || u.size() != w.size())
    throw std::invalid_argument("triple_overlap: length mismatch");
  Word acc = 0;
  for (std::size_t i = 0; i < u.words().size(); ++i)
    acc ^= u.words()[i] & v.words()[i] & w.words()[i];
  return std::popcount(acc) & 1;
}

inline std::size_t triple_overlap_weight(const BitVec& u, const BitVec& v, const BitVec& w) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < u.words().size(); ++i)
    c += std::popcount(u.words()[i] & v.words()[i] & w.words()[i]);
  return c;
}

class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n_cols) : n_cols_(n_cols) {}
  BitMatrix(std::size_t n_rows, std::size_t n_cols)
      : n_cols_(n_cols), rows_(n_rows, BitVec(n_cols)) {}

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i].set(i, true);
    return m;
  }

  std::size_t n_rows() const { return rows_.size(); }
  std::size_t n_cols() const { return n_cols_; }

  const BitVec& row(std::size_t i) const { return rows_[i]; }
  BitVec& row(std::size_t i) { return rows_[i]; }
  const std::vector<BitVec>& rows() const { return rows_; }

  void append_row(BitVec v) {
    if (v.size() != n_cols_) throw std::invalid_argument("BitMatrix: row length mismatch");
    rows_.push_back(std::move(v));
  }

  void append_rows(const BitMatrix& m) {
    for (const auto& r : m.rows()) append_row(r);
  }

  BitVec column(std::size_t j) const {
    BitVec c(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) c.set(i, rows_[i].get(j));
    return c;
  }

  // Rows restricted to the complement of `drop` (ascending coordinate order kept).
  BitMatrix drop_columns(const std::vector<std::size_t>& drop) const {
    std::vector<bool> dead(n_cols_, false);
    for (auto c : drop) {
      if (c >= n_cols_) throw std::invalid_argument("drop_columns: column out of range");
      dead[c] = true;
    }
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < n_cols_; ++j)
      if (!dead[j]) keep.push_back(j);
    BitMatrix out(rows_.size(), keep.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t jj = 0; jj < keep.size(); ++jj)
        if (rows_[i].get(keep[jj])) out.rows_[i].set(jj, true);
    return out;
  }

  // Columns permuted so that perm[j] gives the source coordinate of new column j.
  BitMatrix select_columns(const std::vector<std::size_t>& perm) const {
    BitMatrix out(rows_.size(), perm.size());
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t jj = 0; jj < perm.size(); ++jj)
        if (rows_[i].get(perm[jj])) out.rows_[i].set(jj, true);
    return out;
  }

  bool operator==(const BitMatrix& o) const { return n_cols_ == o.n_cols_ && rows_ == o.rows_; }
  bool operator!=(const BitMatrix& o) const { return !(*this == o); }

 private:
  std::size_t n_cols_ = 0;
  std::vector<BitVec> rows_;
};

// Unique reduced row echelon form. Zero rows are dropped, so r.n_rows() == rank
// and pivots[i] is the pivot column of row i, strictly increasing.
struct Rref {
  BitMatrix r;
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;

  // Reduces v against the echelon rows; result is zero iff v is in the span.
  BitVec reduce(BitVec v) const {
    for (std::size_t i = 0; i < rank; ++i)
      if (v.get(pivots[i])) v ^= r.row(i);
    return v;
  }
  bool contains(const BitVec& v) const { return reduce(v).is_zero(); }
};

inline Rref rref(const BitMatrix& m) {
  std::vector<BitVec> rows(m.rows());
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.n_cols() && rank < rows.size(); ++col) {
    std::size_t sel = rank;
    while (sel < rows.size() && !rows[sel].get(col)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[rank], rows[sel]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != rank && rows[i].get(col)) rows[i] ^= rows[rank];
    pivots.push_back(col);
    ++rank;
  }
  Rref out;
  out.r = BitMatrix(m.n_cols());
  for (std::size_t i = 0; i < rank; ++i) out.r.append_row(std::move(rows[i]));
  out.pivots = std::move(pivots);
  out.rank = rank;
  return out;
}

inline std::size_t rank(const BitMatrix& m) { return rref(m).rank; }

inline bool in_span(const BitMatrix& m, const BitVec& v) { return rref(m).contains(v); }

// Basis of { x : m * x = 0 } where rows of m are the constraint functionals.
inline BitMatrix kernel_basis(const BitMatrix& m) {
  Rref e = rref(m);
  std::vector<bool> is_pivot(m.n_cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  BitMatrix out(m.n_cols());
  for (std::size_t f = 0; f < m.n_cols(); ++f) {
    if (is_pivot[f]) continue;
    BitVec v(m.n_cols());
    v.set(f, true);
    for (std::size_t i = 0; i < e.rank; ++i)
      if (e.r.row(i).get(f)) v.set(e.pivots[i], true);
    out.append_row(std::move(v));
  }
  return out;
}

// Solution set of the linear system a * x = b, as particular + kernel basis.
struct LinearSolution {
  BitVec particular;
  BitMatrix kernel;
};

inline std::optional<LinearSolution> solve(const BitMatrix& a, const BitVec& b) {
  if (b.size() != a.n_rows()) throw std::invalid_argument("solve: rhs length mismatch");
  // Eliminate on the augmented system; a pivot landing in the rhs column
  // means 0 = 1 and there is no solution.
  BitMatrix aug(a.n_cols() + 1);
  for (std::size_t i = 0; i < a.n_rows(); ++i) {
    BitVec r(a.n_cols() + 1);
    for (std::size_t j = 0; j < a.n_cols(); ++j)
      if (a.row(i).get(j)) r.set(j, true);
    if (b.get(i)) r.set(a.n_cols(), true);
    aug.append_row(std::move(r));
  }
  Rref e = rref(aug);
  BitVec x(a.n_cols());
  for (std::size_t i = 0; i < e.rank; ++i) {
    if (e.pivots[i] == a.n_cols()) return std::nullopt;
    if (e.r.row(i).get(a.n_cols())) x.set(e.pivots[i], true);
  }
  return LinearSolution{std::move(x), kernel_basis(a)};
}

// Visits every vector in the span of `basis` (2^k of them, zero first) in
// reflected Gray order: each step XORs exactly one basis row into the state.
// The visitor sees the current vector by const reference and must not hold on
// to it across steps.
template <class F>
void for_each_in_span(const std::vector<BitVec>& basis, F&& f) {
  if (basis.size() >= 63) throw cap_exceeded("span iteration over 2^63 or more vectors");
  std::size_t n = basis.empty() ? 0 : basis[0].size();
  BitVec cur(n);
  f(static_cast<const BitVec&>(cur));
  const std::uint64_t total = std::uint64_t{1} << basis.size();
  for (std::uint64_t t = 1; t < total; ++t) {
    cur ^= basis[std::countr_zero(t)];
    f(static_cast<const BitVec&>(cur));
  }
}

template <class F>
void for_each_in_span(const BitMatrix& m, F&& f) {
  Rref e = rref(m);  // independent rows; duplicates would double-visit
  for_each_in_span(e.r.rows(), std::forward<F>(f));
}

}  // namespace triortho

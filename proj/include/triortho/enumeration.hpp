#pragma once

// Weight enumerators and the machinery to get them:
//  * direct span enumeration (Gray-code, one row XOR per step, incremental
//    weight, optional partitioning across threads and disk checkpoints);
//  * exact MacWilliams transform with integer Krawtchouk recurrences;
//  * meet-in-the-middle scans that count all weight-w vectors orthogonal to a
//    row set without enumerating any span.
//
// All counts are exact integers end to end. Probabilities never appear here.

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "triortho/bigint.hpp"
#include "triortho/bits.hpp"
#include "triortho/rng.hpp"

namespace triortho {

// Raised when a MacWilliams output fails to divide by 2^dim. That can only
// happen on inputs that are not genuine code enumerators, and silently
// rounding would corrupt every downstream count.
struct non_integer_output : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WeightEnumerator {
  std::size_t n = 0;
  std::vector<BigInt> counts;  // counts[w] = number of codewords of weight w

  WeightEnumerator() = default;
  explicit WeightEnumerator(std::size_t n_) : n(n_), counts(n_ + 1, 0) {}

  BigInt total() const {
    BigInt t = 0;
    for (const auto& c : counts) t += c;
    return t;
  }

  // log2 of the codeword count; enumerators of linear codes always have
  // power-of-two totals.
  std::size_t dimension() const {
    BigInt t = total();
    if (t <= 0 || (t & (t - 1)) != 0)
      throw std::invalid_argument("WeightEnumerator: total is not a power of two");
    return boost::multiprecision::msb(t);
  }

  bool operator==(const WeightEnumerator& o) const { return n == o.n && counts == o.counts; }
};

struct EnumerateOptions {
  unsigned cap_bits = 40;       // refuse spans larger than 2^cap_bits
  unsigned sub_bits = 24;       // per-partition enumeration size
  int threads = 1;
  std::string checkpoint_path;  // persist partial partition sums here
  std::uint64_t partition_limit = 0;  // stop after this many partitions (0 = all)
};

namespace detail {

struct SparseRow {
  std::vector<std::pair<std::size_t, Word>> nz;  // (word index, word) pairs
};

inline std::uint64_t fp_mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Guards a checkpoint file against being resumed with a different matrix.
inline std::uint64_t matrix_fingerprint(const BitMatrix& m) {
  std::uint64_t h = fp_mix(m.n_rows() * 0x10001ULL + m.n_cols());
  for (const auto& r : m.rows())
    for (Word w : r.words()) h = fp_mix(h ^ w);
  return h;
}

// Enumerates one partition: `cur` starts at the partition offset; Gray-walks
// the span of `low`, bumping hist[weight] for every visited vector.
inline void enumerate_partition(const std::vector<SparseRow>& low, std::vector<Word>& cur,
                                std::size_t wt, std::vector<std::uint64_t>& hist) {
  hist[wt]++;
  const std::uint64_t total = std::uint64_t{1} << low.size();
  for (std::uint64_t t = 1; t < total; ++t) {
    const SparseRow& r = low[static_cast<std::size_t>(std::countr_zero(t))];
    std::size_t w = wt;
    for (const auto& [i, rw] : r.nz) {
      Word before = cur[i];
      cur[i] ^= rw;
      w += std::popcount(cur[i]);
      w -= std::popcount(before);
    }
    wt = w;
    hist[wt]++;
  }
}

}  // namespace detail

// Weight enumerator of the row span. Returns nullopt only when
// partition_limit cut the run short; progress then lives in the checkpoint
// file and a later call with the same options resumes where this one stopped.
inline std::optional<WeightEnumerator> enumerate_span_resumable(const BitMatrix& m,
                                                                const EnumerateOptions& opts = {}) {
  Rref e = rref(m);
  const std::size_t r = e.rank;
  const std::size_t n = m.n_cols();
  if (r > opts.cap_bits)
    throw cap_exceeded("enumerate_span: 2^" + std::to_string(r) + " codewords exceeds cap 2^" +
                       std::to_string(opts.cap_bits));
  const std::size_t k = std::min<std::size_t>(r, opts.sub_bits);  // Gray bits
  const std::size_t s = r - k;                                    // partition bits
  const std::uint64_t n_parts = std::uint64_t{1} << s;

  std::vector<detail::SparseRow> low(k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t wi = 0; wi < e.r.row(i).words().size(); ++wi)
      if (e.r.row(i).words()[wi]) low[i].nz.push_back({wi, e.r.row(i).words()[wi]});

  std::vector<std::uint64_t> hist(n + 1, 0);
  std::uint64_t next_part = 0;
  const std::uint64_t fp = detail::matrix_fingerprint(m);

  if (!opts.checkpoint_path.empty()) {
    std::ifstream in(opts.checkpoint_path);
    if (in) {
      std::string magic;
      std::uint64_t cn = 0, cr = 0, csub = 0, cfp = 0;
      in >> magic >> cn >> cr >> csub >> next_part >> cfp;
      if (magic != "triortho-ckpt-1" || cn != n || cr != r || csub != s || cfp != fp)
        throw std::invalid_argument("checkpoint file does not match this enumeration");
      for (auto& h : hist) in >> h;
      if (!in) throw std::invalid_argument("checkpoint file truncated");
    }
  }

  auto write_checkpoint = [&](std::uint64_t done) {
    if (opts.checkpoint_path.empty()) return;
    std::string tmp = opts.checkpoint_path + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      out << "triortho-ckpt-1 " << n << ' ' << r << ' ' << s << ' ' << done << ' ' << fp << '\n';
      for (auto h : hist) out << h << '\n';
    }
    std::rename(tmp.c_str(), opts.checkpoint_path.c_str());
  };

  std::uint64_t budget = opts.partition_limit ? opts.partition_limit : n_parts;
  const int threads = std::max(1, opts.threads);
  const std::uint64_t checkpoint_window = 256;

  while (next_part < n_parts && budget > 0) {
    const std::uint64_t window =
        std::min({checkpoint_window, n_parts - next_part, budget});
    const std::uint64_t window_begin = next_part;
    std::atomic<std::uint64_t> cursor{window_begin};
    std::mutex merge_mu;

    auto work = [&]() {
      std::vector<std::uint64_t> local(n + 1, 0);
      std::vector<Word> cur;
      for (;;) {
        std::uint64_t p = cursor.fetch_add(1);
        if (p >= window_begin + window) break;
        BitVec offset(n);
        for (std::size_t b = 0; b < s; ++b)
          if ((p >> b) & 1) offset ^= e.r.row(k + b);
        cur.assign(offset.words().begin(), offset.words().end());
        if (cur.empty()) cur.push_back(0);
        detail::enumerate_partition(low, cur, offset.weight(), local);
      }
      std::lock_guard<std::mutex> lk(merge_mu);
      for (std::size_t i = 0; i <= n; ++i) hist[i] += local[i];
    };

    if (threads == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    next_part += window;
    budget -= window;
    write_checkpoint(next_part);
  }

  if (next_part < n_parts) return std::nullopt;
  WeightEnumerator we(n);
  for (std::size_t i = 0; i <= n; ++i) we.counts[i] = hist[i];
  return we;
}

inline WeightEnumerator enumerate_span(const BitMatrix& m, const EnumerateOptions& opts = {}) {
  auto we = enumerate_span_resumable(m, opts);
  if (!we) throw std::runtime_error("enumerate_span: interrupted by partition limit");
  return *we;
}

// Krawtchouk K_w(v) for fixed n via the integer recurrence
//   w K_w(v) = (n - 2v) K_{w-1}(v) - (n - w + 2) K_{w-2}(v),
// whose divisions are exact on Krawtchouk values.
inline BigInt krawtchouk(std::size_t n, std::size_t w, std::size_t v) {
  BigInt km1 = 1;  // K_0
  if (w == 0) return km1;
  BigInt k = BigInt(n) - 2 * BigInt(v);  // K_1
  for (std::size_t j = 2; j <= w; ++j) {
    BigInt next = (BigInt(n) - 2 * BigInt(v)) * k - BigInt(n - j + 2) * km1;
    if (next % BigInt(j) != 0) throw non_integer_output("krawtchouk recurrence not divisible");
    next /= BigInt(j);
    km1 = k;
    k = next;
  }
  return k;
}

// Dual enumerator weights 0..w_max via MacWilliams:
//   W'_w = 2^(-dim) * sum_v counts[v] K_w(v).
// Every division by 2^dim must be exact or the input was not an enumerator.
inline std::vector<BigInt> macwilliams_prefix(const WeightEnumerator& we, std::size_t w_max) {
  const std::size_t n = we.n;
  const std::size_t dim = we.dimension();
  std::vector<BigInt> acc(w_max + 1, 0);
  for (std::size_t v = 0; v <= n; ++v) {
    if (we.counts[v] == 0) continue;
    const BigInt& c = we.counts[v];
    BigInt km1 = 1;
    acc[0] += c;
    if (w_max == 0) continue;
    BigInt k = BigInt(n) - 2 * BigInt(v);
    acc[1] += c * k;
    for (std::size_t w = 2; w <= w_max; ++w) {
      BigInt next = (BigInt(n) - 2 * BigInt(v)) * k - BigInt(n - w + 2) * km1;
      next /= BigInt(w);  // exact for Krawtchouk values
      km1 = k;
      k = next;
      acc[w] += c * k;
    }
  }
  BigInt scale = BigInt(1) << dim;
  for (auto& a : acc) {
    if (a % scale != 0) throw non_integer_output("macwilliams: dual count is not an integer");
    a /= scale;
    if (a < 0) throw non_integer_output("macwilliams: negative dual count");
  }
  return acc;
}

inline WeightEnumerator macwilliams(const WeightEnumerator& we) {
  WeightEnumerator out(we.n);
  out.counts = macwilliams_prefix(we, we.n);
  return out;
}

inline BigInt macwilliams_at(const WeightEnumerator& we, std::size_t w) {
  return macwilliams_prefix(we, w)[w];
}

// Number of weight-d words in the dual of RM(2m/3, m) for m divisible by 3,
// d = 2^(m/3): the minimum-weight dual words are indicator vectors of
// dimension-(m/3) affine subspaces and the closed form counts those.
inline BigInt a_d_closed_form(int m) {
  if (m % 3 != 0 || m < 3)
    throw std::invalid_argument("a_d_closed_form: m must be a positive multiple of 3");
  int mu = m / 3;
  BigInt num = BigInt(1) << m;
  BigInt den = BigInt(1) << mu;
  for (int i = 0; i < mu; ++i) {
    num *= (BigInt(1) << m) - (BigInt(1) << i);
    den *= (BigInt(1) << mu) - (BigInt(1) << i);
  }
  if (num % den != 0) throw non_integer_output("a_d_closed_form: not divisible");
  return num / den;
}

// ---------------------------------------------------------------------------
// Low-weight scans.
//
// count_orthogonal_at_weight counts vectors u with |u| = w and u orthogonal
// to every row of `rows`. The meet-in-the-middle organization is exact only
// when no nonzero orthogonal vector of weight < w exists (an index collision
// between the two halves would otherwise shed a lighter word); scan_orthogonal
// walks w upward so that precondition always holds when it counts.
// ---------------------------------------------------------------------------

namespace detail {

// syndromes[i] = the rows' column i, packed; sw words per column.
struct ColSyndromes {
  std::size_t n = 0;
  std::size_t sw = 0;
  std::vector<Word> syn;
  const Word* col(std::size_t i) const { return syn.data() + i * sw; }
};

inline ColSyndromes column_syndromes(const BitMatrix& rows) {
  ColSyndromes cs;
  cs.n = rows.n_cols();
  cs.sw = std::max<std::size_t>(1, (rows.n_rows() + kWordBits - 1) / kWordBits);
  cs.syn.assign(cs.n * cs.sw, 0);
  for (std::size_t r = 0; r < rows.n_rows(); ++r)
    for (std::size_t i : rows.row(r).support())
      cs.syn[i * cs.sw + r / kWordBits] |= Word{1} << (r % kWordBits);
  return cs;
}

inline int cmp_words(const Word* a, const Word* b, std::size_t sw) {
  for (std::size_t i = 0; i < sw; ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  return 0;
}

// Visits every size-g index combination in lex order, handing the visitor the
// XOR of the chosen column syndromes. Prefix XORs are kept on a stack so each
// leaf costs one column XOR, not g.
template <class Visit>
inline void for_each_subset_xor(const ColSyndromes& cs, std::size_t g, Visit&& visit) {
  if (g == 0 || g > cs.n) return;
  std::vector<std::size_t> c(g);
  std::vector<Word> stack((g + 1) * cs.sw, 0);
  std::size_t d = 0;
  c[0] = 0;
  for (;;) {
    // descend: fill prefix XOR for level d with column c[d]
    for (std::size_t wi = 0; wi < cs.sw; ++wi)
      stack[(d + 1) * cs.sw + wi] = stack[d * cs.sw + wi] ^ cs.col(c[d])[wi];
    if (d + 1 == g) {
      visit(c, stack.data() + g * cs.sw);
      // advance last index, backtracking when it runs out
      for (;;) {
        ++c[d];
        if (c[d] <= cs.n - (g - d)) break;
        if (d == 0) return;
        --d;
      }
    } else {
      ++d;
      c[d] = c[d - 1] + 1;
    }
  }
}

// Sorted table of syndromes of all weight-h subsets, tagged with members.
struct SubsetTable {
  std::size_t sw = 0;
  std::size_t h = 0;
  std::vector<Word> keys;              // entry i at keys[i*sw]
  std::vector<std::uint32_t> members;  // entry i at members[i*h]
  std::size_t count = 0;
};

inline SubsetTable build_subset_table(const ColSyndromes& cs, std::size_t h) {
  SubsetTable t;
  t.sw = cs.sw;
  t.h = h;
  std::vector<Word> raw_keys;
  std::vector<std::uint32_t> raw_members;
  for_each_subset_xor(cs, h, [&](const std::vector<std::size_t>& c, const Word* x) {
    raw_keys.insert(raw_keys.end(), x, x + cs.sw);
    for (auto i : c) raw_members.push_back(static_cast<std::uint32_t>(i));
  });
  t.count = h == 0 ? 0 : raw_members.size() / h;
  std::vector<std::uint32_t> order(t.count);
  for (std::size_t i = 0; i < t.count; ++i) order[i] = static_cast<std::uint32_t>(i);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return cmp_words(raw_keys.data() + std::size_t{a} * cs.sw,
                     raw_keys.data() + std::size_t{b} * cs.sw, cs.sw) < 0;
  });
  t.keys.reserve(raw_keys.size());
  t.members.reserve(raw_members.size());
  for (auto idx : order) {
    t.keys.insert(t.keys.end(), raw_keys.begin() + std::size_t{idx} * cs.sw,
                  raw_keys.begin() + (std::size_t{idx} + 1) * cs.sw);
    t.members.insert(t.members.end(), raw_members.begin() + std::size_t{idx} * h,
                     raw_members.begin() + (std::size_t{idx} + 1) * h);
  }
  return t;
}

// [lo, hi) range of table entries whose key equals `key`.
inline std::pair<std::size_t, std::size_t> key_range(const SubsetTable& t, const Word* key) {
  std::size_t a = 0, b = t.count;
  while (a < b) {
    std::size_t mid = (a + b) / 2;
    if (cmp_words(t.keys.data() + mid * t.sw, key, t.sw) < 0)
      a = mid + 1;
    else
      b = mid;
  }
  std::size_t lo = a;
  b = t.count;
  while (a < b) {
    std::size_t mid = (a + b) / 2;
    if (cmp_words(t.keys.data() + mid * t.sw, key, t.sw) <= 0)
      a = mid + 1;
    else
      b = mid;
  }
  return {lo, a};
}

}  // namespace detail

// Collects distinct supports of found words, up to a cap.
struct WitnessSink {
  explicit WitnessSink(std::size_t cap_) : cap(cap_) {}
  std::size_t cap;
  std::set<std::vector<std::uint32_t>> seen;
  void add(std::vector<std::uint32_t> s) {
    if (seen.size() >= cap) return;
    std::sort(s.begin(), s.end());
    seen.insert(std::move(s));
  }
  std::vector<BitVec> vectors(std::size_t n) const {
    std::vector<BitVec> out;
    for (const auto& s : seen) {
      BitVec v(n);
      for (auto i : s) v.set(i, true);
      out.push_back(std::move(v));
    }
    return out;
  }
};

// Counts weight-w vectors orthogonal to all rows. Precondition: no nonzero
// orthogonal vector of weight < w (see section comment). Work is roughly
// C(n, floor(w/2)) table entries plus C(n, ceil(w/2)) streamed subsets.
inline std::uint64_t count_orthogonal_at_weight(const BitMatrix& rows, std::size_t w,
                                                WitnessSink* witnesses = nullptr) {
  const auto cs = detail::column_syndromes(rows);
  const std::size_t n = cs.n;
  if (w == 0 || w > n) return 0;
  std::vector<Word> zero(cs.sw, 0);

  if (w == 1) {
    std::uint64_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (detail::cmp_words(cs.col(i), zero.data(), cs.sw) == 0) {
        ++c;
        if (witnesses) witnesses->add({static_cast<std::uint32_t>(i)});
      }
    return c;
  }

  const std::size_t h = w / 2;  // table half
  const std::size_t g = w - h;  // streamed half (g = h or h+1)
  double tbl_cost = 1, stream_cost = 1;
  for (std::size_t i = 0; i < h; ++i) tbl_cost *= double(n - i) / double(i + 1);
  for (std::size_t i = 0; i < g; ++i) stream_cost *= double(n - i) / double(i + 1);
  if (tbl_cost > 5e7 || stream_cost > 4e9)
    throw cap_exceeded("count_orthogonal_at_weight: scan too large at weight " + std::to_string(w));

  auto table = detail::build_subset_table(cs, h);

  std::uint64_t matches = 0;
  detail::for_each_subset_xor(cs, g, [&](const std::vector<std::size_t>& c, const Word* x) {
    auto [lo, hi] = detail::key_range(table, x);
    for (std::size_t e = lo; e < hi; ++e) {
      const std::uint32_t* mem = table.members.data() + e * h;
      if (w % 2 == 0) {
        // Same-size halves: each unordered pair of distinct subsets shows up
        // twice (once per side) and the streamed subset also matches its own
        // table entry; keep only table entries strictly after the stream.
        bool after = std::lexicographical_compare(
            c.begin(), c.end(), mem, mem + h,
            [](std::size_t a, std::uint32_t b) { return a < b; });
        if (!after) continue;
      }
      ++matches;
      if (witnesses) {
        std::vector<std::uint32_t> s(mem, mem + h);
        for (auto i : c) s.push_back(static_cast<std::uint32_t>(i));
        witnesses->add(std::move(s));
      }
    }
  });

  // Each weight-w support splits into (table half, streamed half) a fixed
  // number of ways; divide the raw match count back down.
  BigInt ways = w % 2 == 0 ? binomial(w, h) / 2 : binomial(w, h);
  BigInt m(matches);
  if (m % ways != 0) throw std::logic_error("count_orthogonal_at_weight: inconsistent match count");
  return (m / ways).convert_to<std::uint64_t>();
}

// Reference implementation: walks every weight-w combination and tests the
// syndrome directly. Exponentially slower but assumption-free; unit tests pin
// the fast path against this.
inline std::uint64_t count_orthogonal_at_weight_naive(const BitMatrix& rows, std::size_t w) {
  const auto cs = detail::column_syndromes(rows);
  if (w == 0 || w > cs.n) return 0;
  std::uint64_t count = 0;
  detail::for_each_subset_xor(cs, w, [&](const std::vector<std::size_t>&, const Word* x) {
    bool zero = true;
    for (std::size_t i = 0; i < cs.sw; ++i) zero = zero && x[i] == 0;
    if (zero) ++count;
  });
  return count;
}

struct OrthogonalScan {
  std::size_t scanned_up_to = 0;  // inclusive
  std::optional<std::size_t> min_weight;
  std::uint64_t count_at_min = 0;
};

// Walks w = 1..w_max until the first weight with orthogonal vectors; stops
// there. The upward walk is what makes each meet-in-the-middle count valid.
inline OrthogonalScan scan_orthogonal(const BitMatrix& rows, std::size_t w_max,
                                      WitnessSink* witnesses = nullptr) {
  OrthogonalScan out;
  for (std::size_t w = 1; w <= w_max; ++w) {
    std::uint64_t c = count_orthogonal_at_weight(rows, w, witnesses);
    out.scanned_up_to = w;
    if (c) {
      out.min_weight = w;
      out.count_at_min = c;
      break;
    }
  }
  return out;
}

// True when every nonzero weight strictly between d and 2d has the form
// 2d - 2^i. Minimum-weight gap structure of the duals this library cares
// about; vacuous when nothing lives in that window.
inline bool weight_gap_check(const WeightEnumerator& we, std::size_t d) {
  for (std::size_t w = d + 1; w < 2 * d && w <= we.n; ++w) {
    if (we.counts[w] == 0) continue;
    bool form = false;
    for (std::size_t i = 0; (std::size_t{1} << i) < 2 * d; ++i)
      form = form || (w + (std::size_t{1} << i) == 2 * d);
    if (!form) return false;
  }
  return true;
}

// Sampled stand-in for spans too large to enumerate: random codewords only,
// so a true verdict means "no counterexample seen", not a proof.
inline bool weight_gap_check_sampled(const BitMatrix& m, std::size_t d, std::uint64_t samples,
                                     std::uint64_t seed = 1) {
  Rref e = rref(m);
  CounterRng rng(seed);
  for (std::uint64_t s = 0; s < samples; ++s) {
    BitVec v(m.n_cols());
    for (std::size_t i = 0; i < e.rank; ++i)
      if (rng.next_u64() & 1) v ^= e.r.row(i);
    std::size_t w = v.weight();
    if (w > d && w < 2 * d) {
      bool form = false;
      for (std::size_t i = 0; (std::size_t{1} << i) < 2 * d; ++i)
        form = form || (w + (std::size_t{1} << i) == 2 * d);
      if (!form) return false;
    }
  }
  return true;
}

// Approximate work for a weight-w meet-in-the-middle scan, used for routing.
inline double scan_cost_estimate(std::size_t n, std::size_t w) {
  double table = 1, stream = 1;
  for (std::size_t i = 0; i < w / 2; ++i) table *= double(n - i) / double(i + 1);
  for (std::size_t i = 0; i < w - w / 2; ++i) stream *= double(n - i) / double(i + 1);
  return table + stream;
}

}  // namespace triortho

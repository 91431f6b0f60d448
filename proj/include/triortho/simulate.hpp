#pragma once

// Monte Carlo and exact fault analysis. Three layers share one error model
// (independent Z errors at rate p per site):
//
//   simulate_trio          code-level trials on a generalized triorthogonal
//                          matrix: accept iff the error is orthogonal to every
//                          X stabilizer, logical iff some logical row sees it
//   exact_trio             the same quantities as exact sums over all error
//                          patterns (full 2^n walk, or truncated by weight)
//   simulate_circuit /     Pauli-frame trials over check circuits built in
//   simulate_check_protocol  checkcodes.hpp, sites = T slots
//
// Randomness is counter-based with one stream per trial, so any trial can be
// replayed from (seed, trial index) alone and trial batches merge exactly.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "triortho/bits.hpp"
#include "triortho/checkcodes.hpp"
#include "triortho/enumeration.hpp"
#include "triortho/rng.hpp"
#include "triortho/trio.hpp"

namespace triortho {

struct WilsonInterval {
  double lo = 0.0, hi = 1.0;
};

// Wilson score interval; z = 1.96 gives the 95% level.
inline WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = 1.96) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = ph + z2 / (2.0 * n);
  const double rad = z * std::sqrt(ph * (1.0 - ph) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, (center - rad) / denom), std::min(1.0, (center + rad) / denom)};
}

namespace detail {

// P(W <= w) for W ~ Binomial(n, p), in long double. cdf.back() is forced to 1.
inline std::vector<long double> binomial_cdf(std::size_t n, double p) {
  std::vector<long double> cdf(n + 1);
  if (p <= 0.0) {
    for (auto& c : cdf) c = 1.0L;
    return cdf;
  }
  if (p >= 1.0) {
    for (auto& c : cdf) c = 0.0L;
    cdf[n] = 1.0L;
    return cdf;
  }
  const long double lp = p, lq = 1.0L - lp;
  long double pmf = std::pow(lq, static_cast<long double>(n));
  long double acc = pmf;
  cdf[0] = acc;
  for (std::size_t w = 1; w <= n; ++w) {
    pmf *= static_cast<long double>(n - w + 1) / static_cast<long double>(w) * (lp / lq);
    acc += pmf;
    cdf[w] = acc;
  }
  cdf[n] = 1.0L;
  return cdf;
}

inline std::size_t sample_weight(const std::vector<long double>& cdf, CounterRng& rng) {
  const long double u = static_cast<long double>(rng.next_double());
  std::size_t w = 0;
  while (w + 1 < cdf.size() && u > cdf[w]) ++w;
  return w;
}

// Draws w distinct indices from 0..n-1 into perm[0..w), by partial
// Fisher-Yates. perm persists across calls; any starting permutation gives
// uniform draws, so no reset is needed.
inline void sample_positions(std::vector<std::uint32_t>& perm, std::size_t w, CounterRng& rng) {
  const std::size_t n = perm.size();
  for (std::size_t i = 0; i < w; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(n - i));
    std::swap(perm[i], perm[j]);
  }
}

// Per-coordinate packed dot products against a stack of monitor rows.
struct MonitorColumns {
  std::size_t n = 0, sw = 0;
  std::vector<std::uint64_t> words;  // words[i*sw .. ] = column i
  const std::uint64_t* col(std::size_t i) const { return words.data() + i * sw; }
};

inline MonitorColumns monitor_columns(const BitMatrix& rows) {
  MonitorColumns m;
  m.n = rows.n_cols();
  m.sw = std::max<std::size_t>(1, (rows.n_rows() + 63) / 64);
  m.words.assign(m.n * m.sw, 0);
  for (std::size_t r = 0; r < rows.n_rows(); ++r)
    for (std::size_t i : rows.row(r).support())
      m.words[i * m.sw + r / 64] |= std::uint64_t{1} << (r % 64);
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Code-level Monte Carlo
// ---------------------------------------------------------------------------

struct TrioSimResult {
  std::uint64_t trials = 0, accepted = 0, logical = 0, corrected = 0;
  double p_acc = 0;  // accepted / trials
  WilsonInterval p_acc_ci;
  double eps_joint = 0;  // logical / trials: P(accepted and logical error)
  WilsonInterval eps_joint_ci;
  double eps_cond = 0;  // logical / accepted: P(logical error | accepted)
  WilsonInterval eps_cond_ci;
};

// iid Z errors at rate p per qubit; accept iff the pattern is orthogonal to
// every stabilizer row, logical error iff some logical row sees odd overlap.
// ec_radius 1 additionally corrects syndromes with a unique weight-<=1
// explanation and rejects ambiguous ones.
inline TrioSimResult simulate_trio(const GenTrioMatrix& g, double p, std::uint64_t trials,
                                   std::uint64_t seed, int ec_radius = 0) {
  if (trials == 0) throw std::invalid_argument("simulate_trio: need trials >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("simulate_trio: p out of range");
  if (ec_radius != 0 && ec_radius != 1)
    throw std::invalid_argument("simulate_trio: ec_radius must be 0 or 1");
  const std::size_t n = g.n();
  const std::size_t kl = g.k();
  // full() stacks logical rows first, then stabilizers
  const detail::MonitorColumns mc = detail::monitor_columns(g.full());
  std::vector<std::uint64_t> lg_mask(mc.sw, 0), sy_mask(mc.sw, 0);
  for (std::size_t r = 0; r < kl; ++r) lg_mask[r / 64] |= std::uint64_t{1} << (r % 64);
  for (std::size_t r = kl; r < kl + g.k_0(); ++r) sy_mask[r / 64] |= std::uint64_t{1} << (r % 64);

  // syndrome -> unique coordinate with that weight-1 syndrome, or -1 if shared
  std::map<std::vector<std::uint64_t>, long> ec_table;
  if (ec_radius == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::uint64_t> key(mc.sw);
      for (std::size_t wi = 0; wi < mc.sw; ++wi) key[wi] = mc.col(i)[wi] & sy_mask[wi];
      bool zero = true;
      for (auto kw : key) zero = zero && kw == 0;
      if (zero) continue;  // a zero-syndrome coordinate is untouchable by ec
      auto [it, fresh] = ec_table.emplace(std::move(key), static_cast<long>(i));
      if (!fresh) it->second = -1;
    }
  }

  const std::vector<long double> cdf = detail::binomial_cdf(n, p);
  std::vector<std::uint32_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
  std::vector<std::uint64_t> acc(mc.sw), key(mc.sw);

  TrioSimResult res;
  res.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    CounterRng rng(seed, t);
    const std::size_t w = detail::sample_weight(cdf, rng);
    detail::sample_positions(perm, w, rng);
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t i = 0; i < w; ++i) {
      const std::uint64_t* c = mc.col(perm[i]);
      for (std::size_t wi = 0; wi < mc.sw; ++wi) acc[wi] ^= c[wi];
    }
    bool syn_zero = true;
    for (std::size_t wi = 0; wi < mc.sw; ++wi) syn_zero = syn_zero && (acc[wi] & sy_mask[wi]) == 0;
    if (!syn_zero && ec_radius == 1) {
      for (std::size_t wi = 0; wi < mc.sw; ++wi) key[wi] = acc[wi] & sy_mask[wi];
      auto it = ec_table.find(key);
      if (it != ec_table.end() && it->second >= 0) {
        const std::uint64_t* c = mc.col(static_cast<std::size_t>(it->second));
        for (std::size_t wi = 0; wi < mc.sw; ++wi) acc[wi] ^= c[wi];
        syn_zero = true;
        ++res.corrected;
      }
    }
    if (!syn_zero) continue;
    ++res.accepted;
    bool log_err = false;
    for (std::size_t wi = 0; wi < mc.sw; ++wi) log_err = log_err || (acc[wi] & lg_mask[wi]) != 0;
    if (log_err) ++res.logical;
  }
  res.p_acc = static_cast<double>(res.accepted) / static_cast<double>(trials);
  res.p_acc_ci = wilson_interval(res.accepted, trials);
  res.eps_joint = static_cast<double>(res.logical) / static_cast<double>(trials);
  res.eps_joint_ci = wilson_interval(res.logical, trials);
  res.eps_cond = res.accepted ? static_cast<double>(res.logical) / static_cast<double>(res.accepted)
                              : 0.0;
  res.eps_cond_ci = wilson_interval(res.logical, res.accepted);
  return res;
}

// Importance splitting on error weight: weight-w patterns are sampled
// uniformly and reweighted by the exact binomial mass C(n,w) p^w (1-p)^(n-w),
// so rare high-weight strata get as many samples as common ones. Strata above
// max_weight are dropped; their total mass bounds the truncation error and is
// reported. Acceptance and joint logical-error probabilities are stratum sums;
// the CI half-widths combine per-stratum binomial variances.
struct StratifiedResult {
  long double p_acc = 0, p_acc_err = 0;
  long double eps_joint = 0, eps_joint_err = 0;
  long double eps_cond = 0;
  long double tail_mass = 0;  // probability mass of the dropped strata
};

inline StratifiedResult simulate_trio_stratified(const GenTrioMatrix& g, double p,
                                                 std::uint64_t trials_per_weight,
                                                 std::size_t max_weight, std::uint64_t seed) {
  if (trials_per_weight == 0)
    throw std::invalid_argument("simulate_trio_stratified: need trials >= 1");
  const std::size_t n = g.n();
  if (max_weight > n) max_weight = n;
  const std::size_t kl = g.k();
  const detail::MonitorColumns mc = detail::monitor_columns(g.full());
  std::vector<std::uint64_t> lg_mask(mc.sw, 0), sy_mask(mc.sw, 0);
  for (std::size_t r = 0; r < kl; ++r) lg_mask[r / 64] |= std::uint64_t{1} << (r % 64);
  for (std::size_t r = kl; r < kl + g.k_0(); ++r) sy_mask[r / 64] |= std::uint64_t{1} << (r % 64);

  std::vector<std::uint32_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint32_t>(i);
  std::vector<std::uint64_t> acc(mc.sw);
  const long double lp = p, lq = 1.0L - lp;

  StratifiedResult res;
  long double mass_seen = 0;
  for (std::size_t w = 0; w <= max_weight; ++w) {
    const long double mass = to_long_double(binomial(n, w)) *
                             std::pow(lp, static_cast<long double>(w)) *
                             std::pow(lq, static_cast<long double>(n - w));
    mass_seen += mass;
    std::uint64_t acc_hits = 0, log_hits = 0;
    const std::uint64_t t_w = w == 0 ? 1 : trials_per_weight;  // weight 0 is deterministic
    for (std::uint64_t t = 0; t < t_w; ++t) {
      CounterRng rng(seed, (static_cast<std::uint64_t>(w) << 40) ^ t);
      detail::sample_positions(perm, w, rng);
      std::fill(acc.begin(), acc.end(), 0);
      for (std::size_t i = 0; i < w; ++i) {
        const std::uint64_t* c = mc.col(perm[i]);
        for (std::size_t wi = 0; wi < mc.sw; ++wi) acc[wi] ^= c[wi];
      }
      bool syn_zero = true;
      for (std::size_t wi = 0; wi < mc.sw; ++wi)
        syn_zero = syn_zero && (acc[wi] & sy_mask[wi]) == 0;
      if (!syn_zero) continue;
      ++acc_hits;
      for (std::size_t wi = 0; wi < mc.sw; ++wi)
        if (acc[wi] & lg_mask[wi]) {
          ++log_hits;
          break;
        }
    }
    const long double fa = static_cast<long double>(acc_hits) / static_cast<long double>(t_w);
    const long double fl = static_cast<long double>(log_hits) / static_cast<long double>(t_w);
    res.p_acc += mass * fa;
    res.eps_joint += mass * fl;
    const long double va = fa * (1 - fa) / static_cast<long double>(t_w);
    const long double vl = fl * (1 - fl) / static_cast<long double>(t_w);
    res.p_acc_err += mass * mass * va;
    res.eps_joint_err += mass * mass * vl;
  }
  res.tail_mass = std::max(0.0L, 1.0L - mass_seen);
  res.p_acc_err = 1.96L * std::sqrt(res.p_acc_err);
  res.eps_joint_err = 1.96L * std::sqrt(res.eps_joint_err);
  res.eps_cond = res.p_acc > 0 ? res.eps_joint / res.p_acc : 0.0L;
  return res;
}

// ---------------------------------------------------------------------------
// Exact sums over error patterns
// ---------------------------------------------------------------------------

struct ExactTrioResult {
  std::size_t n = 0;
  bool truncated = false;
  std::size_t max_weight = 0;  // highest weight fully counted
  std::vector<std::uint64_t> accepted_by_weight;
  std::vector<std::uint64_t> logical_by_weight;  // accepted patterns with logical content
  long double p_acc = 0;     // sum over counted weights
  long double eps_joint = 0;
  long double eps_cond = 0;
};

// Full mode walks all 2^n patterns in Gray order (n <= 24); truncated mode
// enumerates every pattern of weight <= max_weight. Counted probabilities are
// exact partial sums: in truncated mode they omit all heavier patterns.
inline ExactTrioResult exact_trio(const GenTrioMatrix& g, double p,
                                  std::optional<std::size_t> max_weight = std::nullopt) {
  const std::size_t n = g.n();
  const std::size_t kl = g.k();
  if (kl + g.k_0() > 64) throw cap_exceeded("exact_trio: more than 64 monitored rows");
  ExactTrioResult res;
  res.n = n;
  res.truncated = max_weight.has_value();
  res.max_weight = max_weight.value_or(n);
  if (!res.truncated && n > 24)
    throw cap_exceeded("exact_trio: full mode needs n <= 24; pass a max_weight to truncate");
  if (res.max_weight > n) res.max_weight = n;

  std::uint64_t lg_mask = 0, sy_mask = 0;
  for (std::size_t r = 0; r < kl; ++r) lg_mask |= std::uint64_t{1} << r;
  for (std::size_t r = kl; r < kl + g.k_0(); ++r) sy_mask |= std::uint64_t{1} << r;
  res.accepted_by_weight.assign(res.max_weight + 1, 0);
  res.logical_by_weight.assign(res.max_weight + 1, 0);

  if (!res.truncated) {
    const detail::MonitorColumns mc = detail::monitor_columns(g.full());
    std::vector<std::uint64_t> colw(n);
    for (std::size_t i = 0; i < n; ++i) colw[i] = mc.col(i)[0];
    res.accepted_by_weight[0] = 1;  // the zero pattern
    std::uint64_t cur = 0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t i = 1; i < total; ++i) {
      cur ^= colw[static_cast<std::size_t>(std::countr_zero(i))];
      if ((cur & sy_mask) != 0) continue;
      const int w = std::popcount(i ^ (i >> 1));
      ++res.accepted_by_weight[static_cast<std::size_t>(w)];
      if (cur & lg_mask) ++res.logical_by_weight[static_cast<std::size_t>(w)];
    }
  } else {
    // cost guard: sum of C(n, w) enumerated leaves
    BigInt leaves = 0;
    for (std::size_t w = 1; w <= res.max_weight; ++w) leaves += binomial(n, w);
    if (leaves > (BigInt(1) << 33))
      throw cap_exceeded("exact_trio: truncated enumeration too large (2^33 leaf cap)");
    const auto cs = detail::column_syndromes(g.full());
    const std::size_t sw = cs.sw;
    res.accepted_by_weight[0] = 1;
    for (std::size_t w = 1; w <= res.max_weight; ++w) {
      std::uint64_t acc = 0, bad = 0;
      detail::for_each_subset_xor(cs, w, [&](const std::vector<std::size_t>&, const Word* x) {
        std::uint64_t v = x[0];
        for (std::size_t wi = 1; wi < sw; ++wi)
          if (x[wi]) return;  // monitored rows fit one word (checked above)
        if (v & sy_mask) return;
        ++acc;
        if (v & lg_mask) ++bad;
      });
      res.accepted_by_weight[w] = acc;
      res.logical_by_weight[w] = bad;
    }
  }

  const long double lp = p, lq = 1.0L - lp;
  long double pw = std::pow(lq, static_cast<long double>(n));  // p^w q^(n-w) at w=0
  for (std::size_t w = 0; w <= res.max_weight; ++w) {
    res.p_acc += static_cast<long double>(res.accepted_by_weight[w]) * pw;
    res.eps_joint += static_cast<long double>(res.logical_by_weight[w]) * pw;
    if (lq > 0) pw *= lp / lq;
    else pw = (w + 1 == n) ? 1.0L : 0.0L;
  }
  res.eps_cond = res.p_acc > 0 ? res.eps_joint / res.p_acc : 0.0L;
  return res;
}

// ---------------------------------------------------------------------------
// Pauli-frame Monte Carlo over check circuits
// ---------------------------------------------------------------------------

struct CircuitSimResult {
  std::uint64_t trials = 0, accepted = 0, logical = 0;
  double p_acc = 0;
  WilsonInterval p_acc_ci;
  double eps_cond = 0;
  WilsonInterval eps_cond_ci;
};

// iid Z faults at rate p per T slot; acceptance and residual logical content
// follow the circuit's own checks. Per-slot frame responses are precomputed
// once (frame propagation is linear in the fault set).
inline CircuitSimResult simulate_circuit(const CheckCircuit& c, double p, std::uint64_t trials,
                                         std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("simulate_circuit: need trials >= 1");
  const std::size_t ns = c.t_slot_count;
  const std::size_t aw = std::max<std::size_t>(1, (c.accept_checks.n_rows() + 63) / 64);
  const std::size_t dw = std::max<std::size_t>(1, (c.logical_detectors.n_rows() + 63) / 64);
  std::vector<std::uint64_t> slot_acc(ns * aw, 0), slot_det(ns * dw, 0);
  for (std::size_t s = 0; s < ns; ++s) {
    const FrameResult fr = pauli_frame_run(c, {s});
    for (std::size_t r = 0; r < c.accept_checks.n_rows(); ++r)
      if (fr.frame.dot(c.accept_checks.row(r)))
        slot_acc[s * aw + r / 64] |= std::uint64_t{1} << (r % 64);
    for (std::size_t r = 0; r < c.logical_detectors.n_rows(); ++r)
      if (fr.detector_bits.get(r)) slot_det[s * dw + r / 64] |= std::uint64_t{1} << (r % 64);
  }
  const std::vector<long double> cdf = detail::binomial_cdf(ns, p);
  std::vector<std::uint32_t> perm(ns);
  for (std::size_t i = 0; i < ns; ++i) perm[i] = static_cast<std::uint32_t>(i);
  std::vector<std::uint64_t> acc(aw), det(dw);

  CircuitSimResult res;
  res.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    CounterRng rng(seed, t);
    const std::size_t w = detail::sample_weight(cdf, rng);
    detail::sample_positions(perm, w, rng);
    std::fill(acc.begin(), acc.end(), 0);
    std::fill(det.begin(), det.end(), 0);
    for (std::size_t i = 0; i < w; ++i) {
      const std::size_t s = perm[i];
      for (std::size_t wi = 0; wi < aw; ++wi) acc[wi] ^= slot_acc[s * aw + wi];
      for (std::size_t wi = 0; wi < dw; ++wi) det[wi] ^= slot_det[s * dw + wi];
    }
    bool ok = true;
    for (std::size_t wi = 0; wi < aw; ++wi) ok = ok && acc[wi] == 0;
    if (!ok) continue;
    ++res.accepted;
    for (std::size_t wi = 0; wi < dw; ++wi)
      if (det[wi]) {
        ++res.logical;
        break;
      }
  }
  res.p_acc = static_cast<double>(res.accepted) / static_cast<double>(trials);
  res.p_acc_ci = wilson_interval(res.accepted, trials);
  res.eps_cond = res.accepted ? static_cast<double>(res.logical) / static_cast<double>(res.accepted)
                              : 0.0;
  res.eps_cond_ci = wilson_interval(res.logical, res.accepted);
  return res;
}

struct CheckProtocolSim {
  std::uint64_t trials = 0, accepted = 0;
  std::uint64_t trials_with_failure = 0;  // accepted trials with >= 1 bad output
  std::uint64_t failed_outputs = 0;       // bad outputs summed over accepted trials
  std::uint64_t gadget_resamples = 0;
  std::size_t outputs_per_trial = 0;
  double p_acc = 0;
  WilsonInterval p_acc_ci;
  double eps_any = 0;  // P(some output bad | accepted)
  WilsonInterval eps_any_ci;
  double eps_per_output = 0;  // failed_outputs / (accepted * k)
};

struct ExactProtocolResult {
  long double p_acc = 0;
  long double eps_any = 0;  // P(some output bad | accepted)
  int max_round_weight = 0;
};

// Exact evaluation of the composed quartic protocol by transfer matrix over
// the 3k-bit residual-error state. The factory gadget is enumerated in full;
// each check round is enumerated over fault sets of weight <= max_round_weight
// and collapsed to (ancilla flip, syndrome, logical action) classes, so the
// result is exact up to the dropped round-fault weights. Weight 4 already
// captures the leading failure term; weight 6 is ample for p up to a few
// percent. Same acceptance and error semantics as simulate_check_protocol.
inline ExactProtocolResult exact_check_protocol(const CheckProtocol& proto, double p,
                                                int max_round_weight = 6,
                                                bool input_errors = true) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("exact_check_protocol: p outside [0,1]");
  if (max_round_weight < 0) throw std::invalid_argument("exact_check_protocol: negative weight cap");
  const std::size_t k = proto.k;
  if (3 * k > 64) throw cap_exceeded("exact_check_protocol: more than 21 CCZ states");
  const std::size_t gs = proto.gadget.t_slot_count;
  if (gs > 20) throw cap_exceeded("exact_check_protocol: gadget too large to enumerate");

  const long double pl = p, ql = 1.0L - pl;

  // gadget: accepted-set counts per (output pattern, fault weight)
  std::vector<std::uint8_t> g_rej(gs), g_det(gs);
  for (std::size_t s = 0; s < gs; ++s) {
    const FrameResult fr = pauli_frame_run(proto.gadget, {s});
    g_rej[s] = fr.accepted ? 0 : 1;
    for (std::size_t b = 0; b < 3; ++b)
      if (fr.detector_bits.get(b)) g_det[s] |= static_cast<std::uint8_t>(1u << b);
  }
  std::vector<std::vector<std::uint64_t>> g_count(8, std::vector<std::uint64_t>(gs + 1, 0));
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << gs); ++m) {
    std::uint8_t rej = 0, det = 0;
    for (std::size_t s = 0; s < gs; ++s)
      if ((m >> s) & 1) { rej ^= g_rej[s]; det ^= g_det[s]; }
    if (!rej) ++g_count[det][static_cast<std::size_t>(std::popcount(m))];
  }
  long double g_prob[8] = {0};
  long double g_acc = 0;
  for (int b = 0; b < 8; ++b) {
    long double pw = 1.0L;
    for (std::size_t w = 0; w <= gs; ++w) {
      long double term = static_cast<long double>(g_count[b][w]) * pw;
      for (std::size_t i = w; i < gs; ++i) term *= ql;
      g_prob[b] += term;
      pw *= pl;
    }
    g_acc += g_prob[b];
  }
  for (int b = 0; b < 8; ++b) g_prob[b] /= g_acc;  // factory resamples until accepted
  if (!input_errors) {
    g_prob[0] = 1.0L;
    for (int b = 1; b < 8; ++b) g_prob[b] = 0.0L;
  }

  // round: syndrome-zero fault-set classes keyed by (logical action, anc flip)
  const std::size_t rs = proto.round.t_slot_count;
  const std::size_t n_det = proto.round.logical_detectors.n_rows();
  if (n_det - k > 62) throw cap_exceeded("exact_check_protocol: inner code too large to pack");
  std::vector<std::uint8_t> r_anc(rs);
  std::vector<std::uint64_t> r_syn(rs), r_det(rs);
  for (std::size_t s = 0; s < rs; ++s) {
    const FrameResult fr = pauli_frame_run(proto.round, {s});
    r_anc[s] = fr.frame.dot(proto.round.accept_checks.row(0)) ? 1 : 0;
    for (std::size_t r = 1; r < proto.round.accept_checks.n_rows(); ++r)
      if (fr.frame.dot(proto.round.accept_checks.row(r)))
        r_syn[s] |= std::uint64_t{1} << (r - 1);
    for (std::size_t r = k; r < n_det; ++r)
      if (fr.detector_bits.get(r)) r_det[s] |= std::uint64_t{1} << (r - k);
  }
  const int wmax = std::min<int>(max_round_weight, static_cast<int>(rs));
  std::map<std::uint64_t, std::vector<std::uint64_t>> r_class;
  r_class[0].assign(static_cast<std::size_t>(wmax) + 1, 0);
  r_class[0][0] = 1;
  for (int wgt = 1; wgt <= wmax; ++wgt) {
    std::vector<std::size_t> c(static_cast<std::size_t>(wgt));
    for (int i = 0; i < wgt; ++i) c[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    if (rs < static_cast<std::size_t>(wgt)) break;
    for (;;) {
      std::uint8_t anc = 0;
      std::uint64_t syn = 0, det = 0;
      for (int i = 0; i < wgt; ++i) {
        anc ^= r_anc[c[static_cast<std::size_t>(i)]];
        syn ^= r_syn[c[static_cast<std::size_t>(i)]];
        det ^= r_det[c[static_cast<std::size_t>(i)]];
      }
      if (!syn) {
        auto& v = r_class[(det << 1) | anc];
        if (v.empty()) v.assign(static_cast<std::size_t>(wmax) + 1, 0);
        ++v[static_cast<std::size_t>(wgt)];
      }
      int i = wgt - 1;
      while (i >= 0 && c[static_cast<std::size_t>(i)] == rs - static_cast<std::size_t>(wgt) + static_cast<std::size_t>(i)) --i;
      if (i < 0) break;
      ++c[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < wgt; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  std::vector<std::pair<std::uint64_t, long double>> r_prob;
  for (const auto& [key, byw] : r_class) {
    long double s = 0.0L, pw = 1.0L;
    for (int w = 0; w <= wmax; ++w) {
      long double term = static_cast<long double>(byw[static_cast<std::size_t>(w)]) * pw;
      for (std::size_t i = static_cast<std::size_t>(w); i < rs; ++i) term *= ql;
      s += term;
      pw *= pl;
    }
    r_prob.push_back({key, s});
  }

  // transfer over rounds: distribution of the packed residual-error word
  std::map<std::uint64_t, long double> dist;
  dist[0] = 1.0L;
  for (std::size_t j = 0; j < k; ++j) {
    std::map<std::uint64_t, long double> next;
    for (const auto& [st, pr] : dist)
      for (int b = 0; b < 8; ++b)
        if (g_prob[b] > 0.0L)
          next[st | (static_cast<std::uint64_t>(b) << (3 * j))] += pr * g_prob[b];
    dist.swap(next);
  }
  for (std::size_t r = 0; r < 3; ++r) {
    std::map<std::uint64_t, long double> next;
    for (const auto& [st, pr] : dist) {
      for (const auto& [key, cp] : r_prob) {
        std::uint8_t anc = key & 1;
        const std::uint64_t det = key >> 1;
        for (std::size_t j = 0; j < k; ++j)
          anc ^= static_cast<std::uint8_t>((st >> proto.separated_by_round[r][j]) & 1);
        if (anc) continue;
        std::uint64_t ns = st;
        for (std::size_t a = 0; a < 2 * k; ++a)
          if ((det >> a) & 1) ns ^= std::uint64_t{1} << proto.embedded_by_round[r][a];
        next[ns] += pr * cp;
      }
    }
    dist.swap(next);
  }
  ExactProtocolResult res;
  res.max_round_weight = wmax;
  long double bad = 0.0L;
  for (const auto& [st, pr] : dist) {
    res.p_acc += pr;
    for (std::size_t j = 0; j < k; ++j)
      if ((st >> (3 * j)) & 7) {
        bad += pr;
        break;
      }
  }
  if (res.p_acc > 0.0L) res.eps_any = bad / res.p_acc;
  return res;
}

// End-to-end trial of the composed quartic protocol: k input CCZ states drawn
// from the factory gadget (resampled until the gadget accepts, as a real
// factory would), then three check rounds at T-fault rate p. A round rejects
// on any inner-code syndrome or a flipped ancilla; accepted trials report
// which output states carry residual Z errors. input_errors=false feeds ideal
// CCZ states instead, which isolates the check rounds' own fault budget.
inline CheckProtocolSim simulate_check_protocol(const CheckProtocol& proto, double p,
                                                std::uint64_t trials, std::uint64_t seed,
                                                bool input_errors = true) {
  if (trials == 0) throw std::invalid_argument("simulate_check_protocol: need trials >= 1");
  const std::size_t k = proto.k;
  if (3 * k > 64) throw cap_exceeded("simulate_check_protocol: more than 21 CCZ states");

  // factory gadget: per-slot acceptance flip and 3-bit output response
  const std::size_t gs = proto.gadget.t_slot_count;
  std::vector<std::uint8_t> g_rej(gs), g_det(gs);
  for (std::size_t s = 0; s < gs; ++s) {
    const FrameResult fr = pauli_frame_run(proto.gadget, {s});
    g_rej[s] = fr.accepted ? 0 : 1;
    std::uint8_t d = 0;
    for (std::size_t b = 0; b < 3; ++b)
      if (fr.detector_bits.get(b)) d |= static_cast<std::uint8_t>(1u << b);
    g_det[s] = d;
  }

  // check round: per-slot ancilla flip, syndrome word, embedded-logical word
  const std::size_t rs = proto.round.t_slot_count;
  const std::size_t n_syn = proto.round.accept_checks.n_rows() - 1;  // row 0 is the ancilla
  const std::size_t n_det = proto.round.logical_detectors.n_rows();
  if (n_syn > 64 || n_det > 64)
    throw cap_exceeded("simulate_check_protocol: inner code too large to pack");
  std::vector<std::uint8_t> r_anc(rs);
  std::vector<std::uint64_t> r_syn(rs), r_det(rs);
  for (std::size_t s = 0; s < rs; ++s) {
    const FrameResult fr = pauli_frame_run(proto.round, {s});
    r_anc[s] = fr.frame.dot(proto.round.accept_checks.row(0)) ? 1 : 0;
    for (std::size_t r = 1; r < proto.round.accept_checks.n_rows(); ++r)
      if (fr.frame.dot(proto.round.accept_checks.row(r)))
        r_syn[s] |= std::uint64_t{1} << (r - 1);
    for (std::size_t r = 0; r < k; ++r)
      if (fr.detector_bits.get(r))
        throw std::logic_error("simulate_check_protocol: slot fault reached a separated input");
    for (std::size_t r = k; r < n_det; ++r)
      if (fr.detector_bits.get(r)) r_det[s] |= std::uint64_t{1} << (r - k);
  }

  const std::vector<long double> g_cdf = detail::binomial_cdf(gs, p);
  const std::vector<long double> r_cdf = detail::binomial_cdf(rs, p);
  std::vector<std::uint32_t> g_perm(gs), r_perm(rs);
  for (std::size_t i = 0; i < gs; ++i) g_perm[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i < rs; ++i) r_perm[i] = static_cast<std::uint32_t>(i);

  CheckProtocolSim res;
  res.trials = trials;
  res.outputs_per_trial = k;
  for (std::uint64_t t = 0; t < trials; ++t) {
    CounterRng rng(seed, t);
    std::uint64_t state_err = 0;  // bit 3j+q = Z on position q of CCZ state j
    if (input_errors) {
      for (std::size_t j = 0; j < k; ++j) {
        for (;;) {
          const std::size_t w = detail::sample_weight(g_cdf, rng);
          detail::sample_positions(g_perm, w, rng);
          std::uint8_t rej = 0, det = 0;
          for (std::size_t i = 0; i < w; ++i) {
            rej ^= g_rej[g_perm[i]];
            det ^= g_det[g_perm[i]];
          }
          if (!rej) {
            state_err ^= static_cast<std::uint64_t>(det) << (3 * j);
            break;
          }
          ++res.gadget_resamples;
        }
      }
    }
    bool ok = true;
    for (std::size_t r = 0; r < 3 && ok; ++r) {
      const std::size_t w = detail::sample_weight(r_cdf, rng);
      detail::sample_positions(r_perm, w, rng);
      std::uint8_t anc = 0;
      std::uint64_t syn = 0, det = 0;
      for (std::size_t i = 0; i < w; ++i) {
        const std::size_t s = r_perm[i];
        anc ^= r_anc[s];
        syn ^= r_syn[s];
        det ^= r_det[s];
      }
      for (std::size_t j = 0; j < k; ++j)
        anc ^= static_cast<std::uint8_t>((state_err >> proto.separated_by_round[r][j]) & 1);
      if (anc || syn) {
        ok = false;
        break;
      }
      for (std::size_t a = 0; a < 2 * k; ++a)
        if ((det >> a) & 1) state_err ^= std::uint64_t{1} << proto.embedded_by_round[r][a];
    }
    if (!ok) continue;
    ++res.accepted;
    std::size_t bad = 0;
    for (std::size_t j = 0; j < k; ++j)
      if ((state_err >> (3 * j)) & 7) ++bad;
    if (bad) {
      ++res.trials_with_failure;
      res.failed_outputs += bad;
    }
  }
  res.p_acc = static_cast<double>(res.accepted) / static_cast<double>(trials);
  res.p_acc_ci = wilson_interval(res.accepted, trials);
  res.eps_any = res.accepted ? static_cast<double>(res.trials_with_failure) /
                                   static_cast<double>(res.accepted)
                             : 0.0;
  res.eps_any_ci = wilson_interval(res.trials_with_failure, res.accepted);
  res.eps_per_output = res.accepted ? static_cast<double>(res.failed_outputs) /
                                          (static_cast<double>(res.accepted) *
                                           static_cast<double>(k))
                                    : 0.0;
  return res;
}

}  // namespace triortho

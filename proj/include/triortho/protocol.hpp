#pragma once

// Closed-form cost and error analytics for distillation protocols. Counting
// stays exact (big integers and rationals); probabilities are evaluated in
// 80-bit floating point only at the end.
//
// Conventions for the block-protocol report: a run feeds n input states at
// error rate eps into one [[n, k, d]] block, postselects on clean checks, and
// keeps k outputs. Acceptance, expected outputs, and per-output error follow
// the leading-order expressions; with one round of error correction
// (ec_radius 1) single-error syndromes are corrected instead of rejected, and
// both the bare and the corrected-fraction-aware per-output figures are
// reported because dropping the (1-eps) and acceptance factors changes the
// answer at the ~1.5x level.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "triortho/bigint.hpp"

namespace triortho {

struct TrioReport {
  std::size_t n = 0, k = 0, d = 0;
  int ec_radius = 0;
  long double eps_in = 0;
  BigInt a_d = 0;
  long double p_acc = 0;
  long double avg_outputs = 0;  // k * p_acc
  // ec 0: a_d eps^d (1-eps)^(n-d), the block logical-failure leading term.
  // ec 1: d a_d eps^(d-1) (1-eps)^(n-d+1), failures surviving one correction.
  long double eps_block = 0;
  long double eps_per_output = 0;  // eps_block / (k p_acc)
  // ec 1 only: d a_d eps^(d-1) / k with the (1-eps) and p_acc factors dropped;
  // equal to eps_per_output when ec_radius = 0.
  long double eps_per_output_literal = 0;
  long double t_per_output = 0;  // n / (k p_acc)
};

inline TrioReport trio_report(std::size_t n, std::size_t k, std::size_t d, const BigInt& a_d,
                              long double eps, int ec_radius = 0) {
  if (n == 0 || k == 0 || d == 0 || d > n) throw std::invalid_argument("trio_report: bad shape");
  if (!(eps >= 0.0L && eps < 1.0L)) throw std::invalid_argument("trio_report: eps out of range");
  if (ec_radius != 0 && ec_radius != 1)
    throw std::invalid_argument("trio_report: ec_radius must be 0 or 1");
  const long double q = 1.0L - eps;
  const long double ad = to_long_double(BigRat(a_d));
  TrioReport r;
  r.n = n;
  r.k = k;
  r.d = d;
  r.ec_radius = ec_radius;
  r.eps_in = eps;
  r.a_d = a_d;
  if (ec_radius == 0) {
    r.p_acc = std::pow(q, static_cast<long double>(n));
    r.eps_block = ad * std::pow(eps, static_cast<long double>(d)) *
                  std::pow(q, static_cast<long double>(n - d));
    r.eps_per_output = r.eps_block / (static_cast<long double>(k) * r.p_acc);
    r.eps_per_output_literal = r.eps_per_output;
  } else {
    r.p_acc = std::pow(q, static_cast<long double>(n)) +
              static_cast<long double>(n) * eps * std::pow(q, static_cast<long double>(n - 1));
    r.eps_block = static_cast<long double>(d) * ad *
                  std::pow(eps, static_cast<long double>(d - 1)) *
                  std::pow(q, static_cast<long double>(n - d + 1));
    r.eps_per_output = r.eps_block / (static_cast<long double>(k) * r.p_acc);
    r.eps_per_output_literal = static_cast<long double>(d) * ad *
                               std::pow(eps, static_cast<long double>(d - 1)) /
                               static_cast<long double>(k);
  }
  r.avg_outputs = static_cast<long double>(k) * r.p_acc;
  r.t_per_output = static_cast<long double>(n) / r.avg_outputs;
  return r;
}

// Qubits alive at once when X-stabilizers are measured sequentially: the k
// data qubits plus one ancilla per simultaneously measured stabilizer.
inline long long spacetime_qubits(long long k, long long n_x) {
  if (k < 0 || n_x < 0) throw std::invalid_argument("spacetime_qubits: negative input");
  return k + n_x;
}

inline long long spacetime_rounds(long long n, long long k, long long n_x) {
  if (n < 0 || k + n_x <= 0) throw std::invalid_argument("spacetime_rounds: bad input");
  return (n + (k + n_x) - 1) / (k + n_x);
}

// Quartic check protocol on a distance-4 hyperbolic inner code [[n, 2k, 4]]:
// k CCZ states checked by three rounds of the controlled-CZ-product
// measurement. Output error at leading order p^4:
//   784 C(k,2)   two bad input states cancelling each other's detection
//   84 k n       one bad input masking an undetected round fault pair
//   24 A_4       weight-4 undetected inner-code error patterns, 8 per round
// The first two terms count every pairing as if it cancelled, so the total is
// an upper bound on what end-to-end simulation shows.
struct QuarticReport {
  std::size_t k = 0, n = 0;
  BigInt a4 = 0;
  BigInt coefficient;        // 784 C(k,2) + 84 k n + 24 A_4
  BigRat per_output_coeff;   // coefficient / k
  long double p = 0;
  long double eps_protocol = 0;    // coefficient * p^4
  long double eps_per_output = 0;  // per_output_coeff * p^4
  long long t_total = 0;           // 8k + 6n
  BigRat t_per_output;             // (8k + 6n) / k
  long double p_acc_lower = 0;     // (1-p)^(6n)
};

inline QuarticReport hyperbolic_quartic_report(std::size_t k_pairs, std::size_t n_inner,
                                               const BigInt& a4, long double p) {
  if (k_pairs == 0 || n_inner == 0)
    throw std::invalid_argument("hyperbolic_quartic_report: bad shape");
  if (!(p >= 0.0L && p < 1.0L))
    throw std::invalid_argument("hyperbolic_quartic_report: p out of range");
  QuarticReport r;
  r.k = k_pairs;
  r.n = n_inner;
  r.a4 = a4;
  const BigInt k(static_cast<unsigned long long>(k_pairs));
  const BigInt n(static_cast<unsigned long long>(n_inner));
  r.coefficient = 784 * binomial(k_pairs, 2) + 84 * k * n + 24 * a4;
  r.per_output_coeff = BigRat(r.coefficient, k);
  r.p = p;
  const long double p4 = p * p * p * p;
  r.eps_protocol = to_long_double(BigRat(r.coefficient)) * p4;
  r.eps_per_output = to_long_double(r.per_output_coeff) * p4;
  r.t_total = 8 * static_cast<long long>(k_pairs) + 6 * static_cast<long long>(n_inner);
  r.t_per_output = BigRat(BigInt(r.t_total), k);
  r.p_acc_lower = std::pow(1.0L - p, 6.0L * static_cast<long double>(n_inner));
  return r;
}

// T-count bootstrap for the CCZ-consuming ladder: one level-(alpha+1) state
// costs one level-alpha state plus two level-(alpha-1) states,
// n_{a+1} = n_a + 2 n_{a-1}. Base (8, 16) for the plain protocol; base
// (6, 14) when the first two levels use the cheaper six-T variant. The
// recursion solves exactly to A 2^a + B (-1)^a.
struct TcountReport {
  int alpha = 0;
  bool six_t_base = false;
  std::vector<long long> series;  // series[i] = n_{i+1}, i = 0..alpha-1
  long long n_alpha = 0;
  long long closed_form = 0;  // A 2^alpha + B (-1)^alpha, exact
};

inline TcountReport normal_tcounts(int alpha, bool six_t_base) {
  if (alpha < 1 || alpha > 40) throw std::invalid_argument("normal_tcounts: need 1 <= alpha <= 40");
  TcountReport r;
  r.alpha = alpha;
  r.six_t_base = six_t_base;
  const long long n1 = six_t_base ? 6 : 8;
  const long long n2 = six_t_base ? 14 : 16;
  r.series.push_back(n1);
  if (alpha >= 2) r.series.push_back(n2);
  for (int a = 3; a <= alpha; ++a) {
    const std::size_t s = r.series.size();
    r.series.push_back(r.series[s - 1] + 2 * r.series[s - 2]);
  }
  r.n_alpha = r.series.back();
  // n1 = 2A - B, n2 = 4A + B  =>  A = (n1 + n2)/6, B = (n2 - 2 n1)/3
  const BigRat a_coef(BigInt(n1 + n2), BigInt(6));
  const BigRat b_coef(BigInt(n2 - 2 * n1), BigInt(3));
  BigRat closed = a_coef * rat_pow(BigRat(2), static_cast<unsigned>(alpha)) +
                  b_coef * (alpha % 2 == 0 ? BigRat(1) : BigRat(-1));
  if (boost::multiprecision::denominator(closed) != 1)
    throw std::logic_error("normal_tcounts: closed form not integral");
  r.closed_form = boost::multiprecision::numerator(closed).convert_to<long long>();
  return r;
}

// Once the ladder reaches codes of distance d = 2 d' with d' odd, the cost
// settles at 3d = 6 d' T gates per output CCZ.
inline long long tcount_final_3d(int d_prime) {
  if (d_prime < 1 || d_prime % 2 == 0)
    throw std::invalid_argument("tcount_final_3d: d' must be odd and positive");
  return 6LL * d_prime;
}

}  // namespace triortho

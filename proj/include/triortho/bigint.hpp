#pragma once

// Exact integer and rational arithmetic for enumerators and error budgets.
// Counts reach 2^176 in places, so machine integers are not an option.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstddef>
#include <vector>

namespace triortho {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (std::size_t i = 0; i < k; ++i) {
    r *= static_cast<unsigned long>(n - i);
    r /= static_cast<unsigned long>(i + 1);
  }
  return r;
}

inline BigRat rat_pow(BigRat base, unsigned e) {
  BigRat acc = 1;
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return acc;
}

// Exact rational to 80-bit float. Numerator and denominator can each run to
// thousands of digits, far past the long double exponent range, so both are
// scaled down to ~200 bits first and the power of two reapplied at the end.
inline long double to_long_double(const BigRat& x) {
  BigInt num = boost::multiprecision::numerator(x);
  BigInt den = boost::multiprecision::denominator(x);
  if (num == 0) return 0.0L;
  bool neg = num < 0;
  if (neg) num = -num;
  auto nb = static_cast<long>(boost::multiprecision::msb(num));
  auto db = static_cast<long>(boost::multiprecision::msb(den));
  long sn = nb > 200 ? nb - 200 : 0;
  long sd = db > 200 ? db - 200 : 0;
  long double a = BigInt(num >> sn).convert_to<long double>();
  long double b = BigInt(den >> sd).convert_to<long double>();
  long double r = std::ldexp(a / b, static_cast<int>(sn - sd));
  return neg ? -r : r;
}

inline long double to_long_double(const BigInt& x) { return to_long_double(BigRat(x)); }

}  // namespace triortho

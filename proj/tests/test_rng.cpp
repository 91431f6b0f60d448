#include <catch2/catch_amalgamated.hpp>

#include "triortho/bigint.hpp"
#include "triortho/rng.hpp"

using namespace triortho;

TEST_CASE("counter rng replays exactly from (seed, stream)") {
  CounterRng a(42, 7), b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(a.counter() == 100);
  CounterRng c(42, 8);
  CHECK(a.next_u64() != c.next_u64());
}

TEST_CASE("next_below stays in range and covers small ranges") {
  CounterRng rng(1);
  bool hit[7] = {};
  for (int i = 0; i < 1000; ++i) {
    auto v = rng.next_below(7);
    REQUIRE(v < 7);
    hit[v] = true;
  }
  for (bool h : hit) CHECK(h);
}

TEST_CASE("next_double lands in [0,1) with sane mean") {
  CounterRng rng(2);
  double sum = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double d = rng.next_double();
    REQUIRE(d >= 0.0);
    REQUIRE(d < 1.0);
    sum += d;
  }
  CHECK(sum / n == Catch::Approx(0.5).margin(0.01));
}

TEST_CASE("binomial matches Pascal recurrence") {
  for (std::size_t n = 0; n < 25; ++n)
    for (std::size_t k = 0; k <= n; ++k) {
      BigInt lhs = binomial(n, k);
      BigInt rhs = (k == 0 || k == n) ? BigInt(1) : binomial(n - 1, k - 1) + binomial(n - 1, k);
      CHECK(lhs == rhs);
    }
  CHECK(binomial(912, 2) == 415416);
  CHECK(binomial(5, 9) == 0);
}

TEST_CASE("rational powers and long double conversion stay accurate at extreme scale") {
  BigRat p(999, 1000);
  BigRat v = rat_pow(p, 512);
  long double d = to_long_double(v);
  CHECK(static_cast<double>(d) == Catch::Approx(0.59913).epsilon(1e-4));

  // tiny magnitudes survive the scaled conversion
  BigRat tiny = rat_pow(BigRat(1, 10), 300);
  long double t = to_long_double(tiny);
  CHECK(t > 0.0L);
  CHECK(static_cast<double>(t * 1e300) == Catch::Approx(1.0).epsilon(1e-9));

  CHECK(to_long_double(BigRat(-3, 4)) == -0.75L);
  CHECK(to_long_double(BigInt(1) << 100) == Catch::Approx(1.2676506e30).epsilon(1e-6));
}

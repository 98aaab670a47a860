#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "e2kit/arith.hpp"
#include "e2kit/errors.hpp"
#include "e2kit/reduce.hpp"
#include "e2kit/sieve.hpp"

using namespace e2kit;
using namespace e2kit::arith;

namespace {

// independent trial-division oracle
std::vector<std::pair<std::uint64_t, int>> trial_factor(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace

TEST_CASE("primality basics") {
  CHECK(is_prime(2));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(10001));  // 73 * 137
  CHECK(trial_factor(10001) ==
        std::vector<std::pair<std::uint64_t, int>>{{73, 1}, {137, 1}});
  CHECK(is_prime(9901));
  CHECK(is_prime(1000000007ULL));
  CHECK_FALSE(is_prime(1000000007ULL * 31));
}

TEST_CASE("primality agrees with a sieve up to 1e6") {
  std::vector<std::uint8_t> flags;
  sieve_range(0, 1000001, flags);
  for (std::int64_t n = 0; n <= 1000000; ++n)
    if (is_prime(static_cast<std::uint64_t>(n)) != (flags[static_cast<std::size_t>(n)] != 0))
      FAIL("disagreement at n = ", n);
}

TEST_CASE("factorize examples and reconstruction") {
  auto f12 = factorize(12);
  CHECK(f12.factors == std::vector<std::pair<std::uint64_t, int>>{{2, 2}, {3, 1}});
  auto f121 = factorize(121);
  CHECK(f121.factors == std::vector<std::pair<std::uint64_t, int>>{{11, 2}});
  auto f = factorize(990100);
  CHECK(f.factors ==
        std::vector<std::pair<std::uint64_t, int>>{{2, 2}, {5, 2}, {9901, 1}});
  CHECK(trial_factor(990100) == f.factors);

  CHECK_THROWS(factorize(1));

  for (std::uint64_t n = 2; n <= 1000000; ++n) {
    Factorization fn = factorize(n);
    if (fn.product() != n) FAIL("reconstruction failed at n = ", n);
  }
  // exponents >= 1, primes sorted and prime
  Rng rng(42);
  for (int i = 0; i < 200; ++i) {
    auto n = static_cast<std::uint64_t>(rng.uniform_int(2, (1LL << 50)));
    Factorization fn = factorize(n);
    CHECK(fn.product() == n);
    for (std::size_t j = 0; j < fn.factors.size(); ++j) {
      CHECK(fn.factors[j].second >= 1);
      CHECK(is_prime(fn.factors[j].first));
      if (j > 0) CHECK(fn.factors[j - 1].first < fn.factors[j].first);
    }
  }
}

TEST_CASE("factorize reaches the rho path on large semiprimes") {
  std::uint64_t p = 1000000007ULL, q = 1000000009ULL;
  Factorization f = factorize(p * q);
  CHECK(f.factors == std::vector<std::pair<std::uint64_t, int>>{{p, 1}, {q, 1}});
}

TEST_CASE("e2 detection") {
  CHECK(is_e2(6));
  CHECK_FALSE(is_e2(12));  // omega = 3
  CHECK(is_e2(121));       // 11^2 counts with multiplicity
  CHECK_FALSE(is_e2(121, E2Convention::SquarefreeOnly));
  CHECK(is_e2(15, E2Convention::SquarefreeOnly));
  CHECK_FALSE(is_e2(1));
  CHECK_FALSE(is_e2(7));
  // products of two primes, including near the 64-bit boundary
  Rng rng(7);
  std::vector<std::int64_t> primes = primes_upto(100000);
  auto last = static_cast<std::int64_t>(primes.size()) - 1;
  for (int i = 0; i < 500; ++i) {
    auto p = static_cast<std::uint64_t>(
        primes[static_cast<std::size_t>(rng.uniform_int(0, last))]);
    auto q = static_cast<std::uint64_t>(
        primes[static_cast<std::size_t>(rng.uniform_int(0, last))]);
    CHECK(is_e2(p * q));
    CHECK(is_e2(p * q, E2Convention::SquarefreeOnly) == (p != q));
  }
  CHECK(is_e2(1000000007ULL * 1000000009ULL));
  CHECK_FALSE(is_e2(1000000007ULL * 1000000009ULL * 2));
}

TEST_CASE("varpi and divisor count") {
  CHECK(varpi(7) == doctest::Approx(std::log(7.0)).epsilon(1e-15));
  CHECK(varpi(8) == 0.0);
  CHECK(varpi(2) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(divisor_count(1) == 1);
  CHECK(divisor_count(12) == 6);
  CHECK(divisor_count(9901) == 2);
}

TEST_CASE("modular inverse") {
  CHECK(mod_inverse(1, 7) == 1);
  CHECK(mod_inverse(100, 10001) == 9901);
  CHECK(100LL * 9901 == 99LL * 10001 + 1);
  // exhaustive oracle for (3, 10)
  std::int64_t expect = 0;
  for (std::int64_t r = 1; r < 10; ++r)
    if (3 * r % 10 == 1) expect = r;
  CHECK(expect == 7);
  CHECK(mod_inverse(3, 10) == 7);
  CHECK_THROWS_AS(mod_inverse(4, 10), ConfigError);
  CHECK_THROWS_AS(mod_inverse(5, 1), ConfigError);

  Rng rng(99);
  for (int i = 0; i < 10000; ++i) {
    std::int64_t q = rng.uniform_int(2, 1000000000);
    std::int64_t a = rng.uniform_int(1, q - 1);
    if (std::gcd(a, q) != 1) continue;
    std::int64_t inv = mod_inverse(a, q);
    CHECK(inv >= 1);
    CHECK(inv < q);
    CHECK(static_cast<std::int64_t>(
              mulmod(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(inv),
                     static_cast<std::uint64_t>(q))) == 1);
  }
}

TEST_CASE("nearest integer distance") {
  CHECK(nearest_int_distance(2.3) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(nearest_int_distance(0.5) == 0.5);
  CHECK(nearest_int_distance(-0.25) == 0.25);
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    double x = rng.uniform(-100.0, 100.0);
    auto k = rng.uniform_int(-50, 50);
    double d = nearest_int_distance(x);
    CHECK(d <= 0.5);
    CHECK(d >= 0.0);
    CHECK(nearest_int_distance(x + static_cast<double>(k)) ==
          doctest::Approx(d).epsilon(1e-9));
  }
}

TEST_CASE("segmented sieve matches direct primality") {
  std::vector<std::uint8_t> seg;
  sieve_range(999000, 1000000, seg);
  for (std::int64_t n = 999000; n < 1000000; ++n)
    CHECK(static_cast<bool>(seg[static_cast<std::size_t>(n - 999000)]) ==
          is_prime(static_cast<std::uint64_t>(n)));
  // a segment beyond the shared small-prime base
  sieve_range(999999999000, 999999999100, seg);
  for (std::int64_t n = 999999999000; n < 999999999100; ++n)
    CHECK(static_cast<bool>(seg[static_cast<std::size_t>(n - 999999999000)]) ==
          is_prime(static_cast<std::uint64_t>(n)));
}

#include "e2kit/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "e2kit/errors.hpp"
#include "e2kit/sieve.hpp"

namespace e2kit::arith {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

namespace {

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, int r) {
  std::uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < r; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // the first twelve primes are a deterministic witness set for all n < 3.3e24
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
    if (!miller_rabin_witness(n, a, d, r)) return false;
  return true;
}

std::uint64_t Factorization::product() const {
  std::uint64_t v = 1;
  for (auto& [p, e] : factors)
    for (int i = 0; i < e; ++i) v *= p;
  return v;
}

std::int64_t Factorization::divisor_count() const {
  std::int64_t v = 1;
  for (auto& [p, e] : factors) v *= (e + 1);
  return v;
}

namespace {

// Brent-cycle rho with polynomial x^2 + c; c advances deterministically on
// failure, so every run factors a given n the same way.
std::uint64_t pollard_rho(std::uint64_t n) {
  if (n % 2 == 0) return 2;
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t x = 2, y = 2, d = 1;
    std::uint64_t q = 1;
    int power = 1, lam = 1;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    y = f(x);
    while (d == 1) {
      if (power == lam) {
        x = y;
        power *= 2;
        lam = 0;
      }
      y = f(y);
      ++lam;
      std::uint64_t diff = x > y ? x - y : y - x;
      if (diff == 0) break;  // cycle without factor; retry with next c
      q = mulmod(q, diff, n);
      if (lam % 64 == 0) {
        d = std::gcd(q, n);
        q = 1;
      }
    }
    if (d == 1) d = std::gcd(q, n);
    if (d != 1 && d != n) return d;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = pollard_rho(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

Factorization factorize(std::uint64_t n) {
  if (n < 2) throw std::invalid_argument("factorize: n must be >= 2");
  Factorization f;
  f.n = n;
  std::vector<std::uint64_t> primes;
  std::uint64_t rest = n;
  for (std::int64_t p : small_primes()) {
    std::uint64_t up = static_cast<std::uint64_t>(p);
    if (up * up > rest) break;
    while (rest % up == 0) {
      primes.push_back(up);
      rest /= up;
    }
  }
  if (rest > 1) {
    if (rest < std::uint64_t{1'000'000} * 1'000'000 || is_prime(rest))
      primes.push_back(rest);  // no factor <= 1e6, so rest < 1e12 is prime
    else
      factor_into(rest, primes);
  }
  std::sort(primes.begin(), primes.end());
  for (std::uint64_t p : primes) {
    if (!f.factors.empty() && f.factors.back().first == p)
      ++f.factors.back().second;
    else
      f.factors.emplace_back(p, 1);
  }
  return f;
}

bool is_e2(std::uint64_t n, E2Convention conv) {
  if (n < 4) return false;
  // smallest-factor fast path: n = p*m is e2 iff m is prime
  // (and p != m for the squarefree variant)
  for (std::int64_t sp : small_primes()) {
    std::uint64_t p = static_cast<std::uint64_t>(sp);
    if (p * p > n) return false;  // n prime
    if (n % p == 0) {
      std::uint64_t m = n / p;
      if (!is_prime(m)) return false;
      return conv == E2Convention::WithMultiplicity || m != p;
    }
  }
  // no factor <= 1e6: either prime, or every prime factor exceeds 1e6,
  // so n is e2 iff it is not prime and rho splits it into two primes
  if (is_prime(n)) return false;
  std::uint64_t d = pollard_rho(n);
  std::uint64_t m = n / d;
  if (!is_prime(d) || !is_prime(m)) return false;
  return conv == E2Convention::WithMultiplicity || d != m;
}

double varpi(std::uint64_t n) {
  return is_prime(n) ? std::log(static_cast<double>(n)) : 0.0;
}

std::int64_t divisor_count(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("divisor_count: n must be >= 1");
  if (n == 1) return 1;
  return factorize(n).divisor_count();
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t q) {
  if (q < 2) throw ConfigError("mod_inverse: modulus must be >= 2");
  std::int64_t r0 = q, r1 = ((a % q) + q) % q;
  std::int64_t t0 = 0, t1 = 1;
  while (r1 != 0) {
    std::int64_t k = r0 / r1;
    r0 -= k * r1;
    std::swap(r0, r1);
    t0 -= k * t1;
    std::swap(t0, t1);
  }
  if (r0 != 1)
    throw ConfigError("mod_inverse: gcd(a,q) = " + std::to_string(r0) + " != 1");
  return ((t0 % q) + q) % q;
}

double nearest_int_distance(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("nearest_int_distance: x must be finite");
  double d = std::abs(x - std::nearbyint(x));
  return std::min(d, 0.5);
}

}  // namespace e2kit::arith

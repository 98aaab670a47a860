#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace e2kit::arith {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// Deterministic Miller-Rabin, valid for the whole 64-bit range
// (fixed 12-witness set).
bool is_prime(std::uint64_t n);

struct Factorization {
  std::uint64_t n = 0;
  // (prime, exponent) pairs, sorted by prime, exponents >= 1
  std::vector<std::pair<std::uint64_t, int>> factors;

  int omega_with_multiplicity() const {
    int s = 0;
    for (auto& [p, e] : factors) s += e;
    return s;
  }
  std::uint64_t product() const;
  std::int64_t divisor_count() const;
};

// Trial division by the shared prime base (p <= 10^6), then Brent-cycle
// Pollard rho with a fixed polynomial-increment sequence, so results are
// reproducible run to run.  Requires n >= 2.
Factorization factorize(std::uint64_t n);

// Convention for "exactly two prime factors": counted with multiplicity
// (prime squares included) unless the squarefree variant is selected.
enum class E2Convention { WithMultiplicity, SquarefreeOnly };

bool is_e2(std::uint64_t n, E2Convention conv = E2Convention::WithMultiplicity);

// log n at primes, 0 elsewhere
double varpi(std::uint64_t n);

std::int64_t divisor_count(std::uint64_t n);

// Inverse of a mod q in [1, q); requires gcd(a, q) = 1, q >= 2.
std::int64_t mod_inverse(std::int64_t a, std::int64_t q);

// Distance from x to the nearest integer, in [0, 1/2].
double nearest_int_distance(double x);

}  // namespace e2kit::arith

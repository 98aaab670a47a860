#pragma once

#include <cstdint>
#include <vector>

namespace e2kit::arith {

// Primes <= n by a plain sieve of Eratosthenes.  Guarded for n <= 2^31.
std::vector<std::int64_t> primes_upto(std::int64_t n);

// Primes <= 10^6, built once on first use (shared trial-division base).
const std::vector<std::int64_t>& small_primes();

// Segmented sieve: sets flags[i] = 1 iff lo + i is prime, for the half-open
// range [lo, hi).  Writes into the caller-provided buffer (resized to hi-lo),
// so disjoint ranges can be sieved concurrently.
void sieve_range(std::int64_t lo, std::int64_t hi, std::vector<std::uint8_t>& flags);

}  // namespace e2kit::arith

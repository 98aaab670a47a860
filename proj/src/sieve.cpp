#include "e2kit/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace e2kit::arith {

std::vector<std::int64_t> primes_upto(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 2) return out;
  if (n > (std::int64_t{1} << 31))
    throw std::invalid_argument("primes_upto: limit too large, use sieve_range");
  std::vector<std::uint8_t> composite(static_cast<std::size_t>(n) + 1, 0);
  for (std::int64_t i = 2; i * i <= n; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    for (std::int64_t j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = 1;
  }
  for (std::int64_t i = 2; i <= n; ++i)
    if (!composite[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

const std::vector<std::int64_t>& small_primes() {
  static const std::vector<std::int64_t> primes = primes_upto(1'000'000);
  return primes;
}

void sieve_range(std::int64_t lo, std::int64_t hi, std::vector<std::uint8_t>& flags) {
  if (hi < lo) hi = lo;
  flags.assign(static_cast<std::size_t>(hi - lo), 1);
  if (hi <= lo) return;

  for (std::int64_t n = lo; n < std::min<std::int64_t>(hi, 2); ++n)
    flags[static_cast<std::size_t>(n - lo)] = 0;

  std::int64_t root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(hi - 1)));
  while ((root + 1) * (root + 1) < hi) ++root;

  // base primes: the shared table covers root <= 10^6 (hi <= 10^12);
  // sieve a fresh base beyond that
  std::vector<std::int64_t> base;
  const std::vector<std::int64_t>* basep = &small_primes();
  if (root > 1'000'000) {
    base = primes_upto(root);
    basep = &base;
  }

  for (std::int64_t p : *basep) {
    if (p > root) break;
    std::int64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
    for (std::int64_t j = start; j < hi; j += p) flags[static_cast<std::size_t>(j - lo)] = 0;
  }
}

}  // namespace e2kit::arith

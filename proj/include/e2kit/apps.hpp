#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "e2kit/set_a.hpp"
#include "e2kit/surd.hpp"

// The two applications: semiprime solutions of ||n*alpha|| <= n^{-tau} found
// through continued-fraction convergents, and 3-digit palindromes in base b.

namespace e2kit::apps {

// P3(b) = { j(b^2+1) + kb : j in (0,b), k in [0,b) } in ascending order;
// exactly b(b-1) values, each palindromic in base b.
std::vector<std::int64_t> palindrome_members(std::int64_t b);
void for_each_palindrome(std::int64_t b, const std::function<bool(std::int64_t)>& visit);

struct PalindromeCount {
  std::int64_t b = 0;
  std::int64_t count = 0;      // #(P3(b) and e2)
  double density_ratio = 0;    // count * log(b) / b^2
};

PalindromeCount palindrome_e2_count(
    std::int64_t b, arith::E2Convention conv = arith::E2Convention::WithMultiplicity,
    int workers = 0, std::int64_t ceiling = kDefaultCeiling);

// The structured-set instance q = b^2+1, z = b, x = b^3, a = b (tau = 1/3)
// whose members all lie in P3(b).
InstanceParams palindrome_instance(std::int64_t b);
// verifies the containment exhaustively; returns the member count
std::int64_t palindrome_subset_check(std::int64_t b, std::int64_t ceiling = kDefaultCeiling);

struct DiophantineSolution {
  std::int64_t n = 0;
  std::uint64_t p1 = 0, p2 = 0;  // the two prime factors, p1 <= p2
  double distance = 0;           // ||n alpha||
  double bound = 0;              // n^{-tau}
  std::int64_t conv_den = 0;     // denominator of the convergent that found it
};

struct DiophOptions {
  double near_factor = 4.0;  // near-miss reporting: ||n a|| <= factor * n^{-tau}
  std::int64_t ceiling = kDefaultCeiling;
  int workers = 0;
  int interval_bits = 256;       // re-verification precision
  arith::E2Convention convention = arith::E2Convention::WithMultiplicity;
};

struct DiophResult {
  std::vector<DiophantineSolution> solutions;  // certified, ascending n
  std::int64_t candidates = 0;                 // members of A and e2 examined
  std::int64_t near_misses = 0;                // within near_factor but not certified
  std::int64_t convergents_used = 0;
};

// For each convergent c/q of alpha with q in [qmin, qmax]: builds the
// instance x = q^{2/(1+tau)}, z = x/q, a = cbar (mod q), enumerates the
// semiprimes of A, and keeps exactly those n whose inequality
// ||n alpha|| <= n^{-tau} passes exact certification; every kept solution is
// re-verified through the independent interval route at interval_bits.
DiophResult dioph_solve(const arith::Alpha& alpha, arith::Rational64 tau,
                        std::int64_t qmin, std::int64_t qmax,
                        const DiophOptions& opt = {});

}  // namespace e2kit::apps

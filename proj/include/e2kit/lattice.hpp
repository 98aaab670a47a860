#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "e2kit/set_a.hpp"

// The congruence lattices behind the Type I analysis:
//
//   lambda(m) = { (j,k) in Z^2 : j q + k a = 0 (mod m) },
//
// an index-m sublattice of Z^2 (gcd(a,q) = 1 makes jq + ka surjective mod m).
// Rank-2 Gauss/Lagrange reduction is exact, so the shortest vector b1(m) and
// its length R1(m) are computed, not approximated.

namespace e2kit::lattice {

struct Vec2 {
  std::int64_t j = 0, k = 0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct Lattice2D {
  std::int64_t m = 0, q = 0, a = 0;
  Vec2 b1, b2;  // basis, |det| = m
};

// Basis from the Hermite-style construction: with g = gcd(q, m),
// (m/g, 0) and (j0, g) where j0 (q/g) = -a (mod m/g).
Lattice2D lambda_basis(std::int64_t m, std::int64_t q, std::int64_t a);

struct ReducedBasis {
  Vec2 b1, b2;          // |b1| <= |b2|, |b1| <= |b1 +- b2|
  std::int64_t r1_sq = 0;  // |b1|^2, exact
  double r1 = 0;
};

ReducedBasis gauss_reduce(const Lattice2D& lat);

// Psi(m; N) = sum_{N < n <= 2N} Phi(m n).
// Linear: one modular addition per n.  Jumps: inverts the progression per
// support residue, cost O(z + N z / q).  Auto picks by estimated cost.
enum class PsiStrategy { Auto, Linear, Jumps };

double psi(std::int64_t m, const InstanceParams& p, std::int64_t N,
           PsiStrategy strategy = PsiStrategy::Auto);

// main term of Psi: N * W^(0) * z / q
double psi_main_term(const InstanceParams& p, std::int64_t N);

double psi1(std::int64_t m, const InstanceParams& p, std::int64_t N,
            PsiStrategy strategy = PsiStrategy::Auto);

// #{m <= M : R1(m)^2 = l}
std::int64_t level_count(std::int64_t M, std::int64_t l, std::int64_t q, std::int64_t a);

// full distribution of R1(m)^2 for m <= M, ascending in l
std::vector<std::pair<std::int64_t, std::int64_t>> level_table(std::int64_t M,
                                                               std::int64_t q,
                                                               std::int64_t a);

struct Moments {
  double sum_psi_sq = 0;   // sum over m in (M, 2M] of Psi(m)^2
  double sum_psi1_sq = 0;  // same for Psi1(m)^2
};

// Requires M <= z^{2-delta} (the hypothesis window of the moment bounds).
Moments moment_sums(std::int64_t M, const InstanceParams& p, std::int64_t N,
                    int workers = 0);

}  // namespace e2kit::lattice

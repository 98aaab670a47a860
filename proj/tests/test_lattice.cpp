#include <cmath>
#include <numeric>

#include "doctest.h"
#include "e2kit/errors.hpp"
#include "e2kit/lattice.hpp"
#include "e2kit/reduce.hpp"
#include "e2kit/set_a.hpp"
#include "e2kit/weight.hpp"

using namespace e2kit;
using namespace e2kit::lattice;
using arith::Rational64;

namespace {

bool in_lattice(const Vec2& v, std::int64_t m, std::int64_t q, std::int64_t a) {
  return ((v.j * q + v.k * a) % m + m) % m == 0;
}

std::int64_t brute_min_sq(std::int64_t m, std::int64_t q, std::int64_t a) {
  auto r = static_cast<std::int64_t>(
      std::ceil(std::sqrt(4.0 * static_cast<double>(m) / 3.141592653589793)));
  std::int64_t best = -1;
  for (std::int64_t j = -r; j <= r; ++j)
    for (std::int64_t k = -r; k <= r; ++k) {
      if (j == 0 && k == 0) continue;
      if (!in_lattice({j, k}, m, q, a)) continue;
      std::int64_t len = j * j + k * k;
      if (best < 0 || len < best) best = len;
    }
  return best;
}

InstanceParams toy(std::int64_t b) {
  return derive_params(Rational64{1, 3}, b * b + 1, b, static_cast<double>(b),
                       static_cast<double>(b) * static_cast<double>(b) *
                           static_cast<double>(b),
                       0.02);
}

double psi_naive(std::int64_t m, const InstanceParams& p, std::int64_t N) {
  Kahan acc;
  for (std::int64_t n = N + 1; n <= 2 * N; ++n)
    acc.add(phi((m % p.q) * (n % p.q) % p.q, p));
  return acc.value();
}

}  // namespace

TEST_CASE("basis construction") {
  Lattice2D unit = lambda_basis(1, 10001, 100);
  CHECK(unit.b1 == Vec2{1, 0});
  CHECK(unit.b2 == Vec2{0, 1});

  // 5j + 2k = 0 (mod 7) from (q, a) = (10001, 100)
  Lattice2D l7 = lambda_basis(7, 10001, 100);
  CHECK(in_lattice(l7.b1, 7, 10001, 100));
  CHECK(in_lattice(l7.b2, 7, 10001, 100));
  std::int64_t count = 0;
  for (std::int64_t j = 0; j < 7; ++j)
    for (std::int64_t k = 0; k < 7; ++k)
      if (in_lattice({j, k}, 7, 10001, 100)) ++count;
  CHECK(count == 7);  // index 7 in Z^2

  // gcd(q, m) > 1 structure: q = 10, a = 3, m = 5
  Lattice2D l5 = lambda_basis(5, 10, 3);
  CHECK(in_lattice(l5.b1, 5, 10, 3));
  CHECK(in_lattice(l5.b2, 5, 10, 3));
  __int128 det = static_cast<__int128>(l5.b1.j) * l5.b2.k -
                 static_cast<__int128>(l5.b1.k) * l5.b2.j;
  CHECK(static_cast<std::int64_t>(det < 0 ? -det : det) == 5);

  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    std::int64_t q = rng.uniform_int(2, 100000);
    std::int64_t a = rng.uniform_int(1, q - 1);
    if (std::gcd(a, q) != 1) continue;
    std::int64_t m = rng.uniform_int(1, 5000);
    Lattice2D lat = lambda_basis(m, q, a);
    CHECK(in_lattice(lat.b1, m, q, a));
    CHECK(in_lattice(lat.b2, m, q, a));
    __int128 d = static_cast<__int128>(lat.b1.j) * lat.b2.k -
                 static_cast<__int128>(lat.b1.k) * lat.b2.j;
    CHECK(static_cast<std::int64_t>(d < 0 ? -d : d) == m);
  }
}

TEST_CASE("gauss reduction is exact") {
  ReducedBasis r7 = gauss_reduce(lambda_basis(7, 10001, 100));
  CHECK(r7.r1_sq == 2);
  CHECK(std::abs(r7.b1.j) == 1);
  CHECK(std::abs(r7.b1.k) == 1);
  CHECK(gauss_reduce(lambda_basis(1, 10001, 100)).r1_sq == 1);

  Rng rng(13);
  for (int i = 0; i < 300; ++i) {
    std::int64_t m = rng.uniform_int(1, 10000);
    std::int64_t q = rng.uniform_int(2, 100000);
    std::int64_t a = rng.uniform_int(1, q - 1);
    if (std::gcd(a, q) != 1) continue;
    ReducedBasis rb = gauss_reduce(lambda_basis(m, q, a));
    CHECK(rb.r1_sq == brute_min_sq(m, q, a));
    // reduced-basis conditions
    auto nrm = [](const Vec2& v) { return v.j * v.j + v.k * v.k; };
    CHECK(nrm(rb.b1) <= nrm(rb.b2));
    Vec2 sum{rb.b1.j + rb.b2.j, rb.b1.k + rb.b2.k};
    Vec2 diff{rb.b1.j - rb.b2.j, rb.b1.k - rb.b2.k};
    CHECK(nrm(rb.b1) <= nrm(sum));
    CHECK(nrm(rb.b1) <= nrm(diff));
    // Minkowski
    CHECK(rb.r1_sq <= static_cast<std::int64_t>(
                          std::ceil(4.0 * static_cast<double>(m) / 3.141592653589793)));
  }
}

TEST_CASE("counting function vs the naive loop") {
  InstanceParams p = toy(40);
  Rng rng(17);
  for (int i = 0; i < 25; ++i) {
    std::int64_t m = rng.uniform_int(1, 4000);
    std::int64_t N = rng.uniform_int(20, 900);
    double naive = psi_naive(m, p, N);
    double lin = psi(m, p, N, PsiStrategy::Linear);
    double jmp = psi(m, p, N, PsiStrategy::Jumps);
    double scale = std::max(1.0, std::abs(naive));
    CHECK(std::abs(lin - naive) <= 1e-12 * scale);
    CHECK(std::abs(jmp - naive) <= 1e-12 * scale);
  }
  // zero case is exact: m = q makes every k0 = 0
  CHECK(psi(p.q, p, 500, PsiStrategy::Linear) == 0.0);
  CHECK(psi(p.q, p, 500, PsiStrategy::Jumps) == 0.0);
}

TEST_CASE("psi hand check at m = 1") {
  InstanceParams p = toy(10);
  std::int64_t N = 120;
  Kahan expect;
  for (std::int64_t n = N + 1; n <= 2 * N; ++n) expect.add(phi(n, p));
  CHECK(psi(1, p, N) == doctest::Approx(expect.value()).epsilon(1e-12));
}

TEST_CASE("mean of the counting function approaches its main term") {
  InstanceParams p = toy(200);
  std::int64_t M = 2000;
  auto N = static_cast<std::int64_t>(p.x / (4.0 * static_cast<double>(M)));
  Kahan sum;
  for (std::int64_t m = M + 1; m <= 2 * M; ++m) sum.add(psi(m, p, N));
  double mean = sum.value() / static_cast<double>(M);
  double main = psi_main_term(p, N);
  CHECK(mean / main > 0.8);
  CHECK(mean / main < 1.2);
}

TEST_CASE("psi1 is the deviation from the main term") {
  InstanceParams p = toy(40);
  std::int64_t N = 400;
  for (std::int64_t m : {1LL, 17LL, 40LL, 123LL})
    CHECK(psi1(m, p, N) + psi_main_term(p, N) == psi(m, p, N));

  // |Psi1| R1 / z stays below an empirical ceiling (regression bound)
  InstanceParams p100 = toy(100);
  std::int64_t M = 1000;
  auto N100 = static_cast<std::int64_t>(p100.x / (4.0 * static_cast<double>(M)));
  double worst = 0;
  for (std::int64_t m = M + 1; m <= 2 * M; ++m) {
    double r1 = gauss_reduce(lambda_basis(m, p100.q, p100.a)).r1;
    worst = std::max(worst, std::abs(psi1(m, p100, N100)) * r1 / p100.z);
  }
  CHECK(worst <= 4.0);
}

TEST_CASE("level counts") {
  CHECK(level_count(1000, 0, 10001, 100) == 0);
  // l = 1: unit vectors lie in lambda(m) iff m | q or m | a
  std::int64_t expect = 0;
  for (std::int64_t m = 1; m <= 1000; ++m)
    if (10001 % m == 0 || 100 % m == 0) ++expect;
  CHECK(expect == 11);  // {1,73,137} union {1,2,4,5,10,20,25,50,100}
  CHECK(level_count(1000, 1, 10001, 100) == expect);

  // distribution table against the brute-force shortest vector
  auto table = level_table(200, 10001, 100);
  std::int64_t total = 0;
  for (auto& [l, cnt] : table) {
    std::int64_t brute = 0;
    for (std::int64_t m = 1; m <= 200; ++m)
      if (brute_min_sq(m, 10001, 100) == l) ++brute;
    CHECK(cnt == brute);
    total += cnt;
  }
  CHECK(total == 200);
}

TEST_CASE("moment sums: consistency, windows, determinism") {
  InstanceParams p = toy(100);
  std::int64_t M = 100;
  auto N = static_cast<std::int64_t>(p.x / (4.0 * static_cast<double>(M)));
  Moments mo = moment_sums(M, p, N, 1);

  // expansion consistency: sum (main + psi1)^2 recomputed directly
  double main = psi_main_term(p, N);
  Kahan check_sq, check_1sq;
  for (std::int64_t m = M + 1; m <= 2 * M; ++m) {
    double p1 = psi1(m, p, N);
    check_sq.add((main + p1) * (main + p1));
    check_1sq.add(p1 * p1);
  }
  CHECK(mo.sum_psi_sq == doctest::Approx(check_sq.value()).epsilon(1e-12));
  CHECK(mo.sum_psi1_sq == doctest::Approx(check_1sq.value()).epsilon(1e-12));

  // window gate
  CHECK_THROWS_AS(moment_sums(static_cast<std::int64_t>(std::pow(p.z, 2.1)), p, 10),
                  WindowError);

  // worker count must not change a single bit
  Moments w1 = moment_sums(M, p, N, 1);
  Moments w2 = moment_sums(M, p, N, 2);
  Moments w3 = moment_sums(M, p, N, 3);
  CHECK(w1.sum_psi_sq == w2.sum_psi_sq);
  CHECK(w1.sum_psi1_sq == w2.sum_psi1_sq);
  CHECK(w1.sum_psi_sq == w3.sum_psi_sq);
  CHECK(w1.sum_psi1_sq == w3.sum_psi1_sq);
}

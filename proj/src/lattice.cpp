#include "e2kit/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "e2kit/errors.hpp"
#include "e2kit/reduce.hpp"

namespace e2kit::lattice {

namespace {

using i128 = __int128_t;

i128 norm_sq(const Vec2& v) {
  return static_cast<i128>(v.j) * v.j + static_cast<i128>(v.k) * v.k;
}

i128 dot(const Vec2& u, const Vec2& v) {
  return static_cast<i128>(u.j) * v.j + static_cast<i128>(u.k) * v.k;
}

// round(n/d) for i128, exact
i128 round_div(i128 n, i128 d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  i128 q = n / d;
  i128 r = n - q * d;
  if (2 * r >= d) ++q;
  if (2 * r <= -d) --q;
  return q;
}

}  // namespace

Lattice2D lambda_basis(std::int64_t m, std::int64_t q, std::int64_t a) {
  if (m < 1) throw std::invalid_argument("lambda_basis: m must be >= 1");
  if (q < 1) throw std::invalid_argument("lambda_basis: q must be >= 1");
  std::int64_t a_mod = ((a % q) + q) % q;
  if (std::gcd(a_mod, q) != 1) throw ConfigError("lambda_basis: gcd(a,q) != 1");

  Lattice2D lat;
  lat.m = m;
  lat.q = q;
  lat.a = a_mod;
  if (m == 1) {
    lat.b1 = {1, 0};
    lat.b2 = {0, 1};
    return lat;
  }
  // jq + ka = 0 (mod m).  The j-axis sublattice is (m/g) Z with g = gcd(q,m);
  // the smallest admissible positive k is g (gcd(a,g) = 1 forces g | k), and
  // gcd(q/g, m/g) = 1 always, so j0 (q/g) = -a (mod m/g) is solvable.
  std::int64_t g = std::gcd(q, m);
  std::int64_t mg = m / g;
  std::int64_t j0 = 0;
  if (mg > 1) {
    std::int64_t qg = (q / g) % mg;
    std::int64_t rhs = ((-(a_mod % mg)) % mg + mg) % mg;
    j0 = static_cast<std::int64_t>(
        arith::mulmod(static_cast<std::uint64_t>(rhs),
                      static_cast<std::uint64_t>(arith::mod_inverse(qg, mg)),
                      static_cast<std::uint64_t>(mg)));
  }
  lat.b1 = {mg, 0};
  lat.b2 = {j0, g};
  return lat;
}

ReducedBasis gauss_reduce(const Lattice2D& lat) {
  Vec2 u = lat.b1, v = lat.b2;
  if (norm_sq(u) > norm_sq(v)) std::swap(u, v);
  // Lagrange reduction: repeatedly shorten the longer vector by the rounded
  // projection multiple; terminates because |v| strictly decreases.
  for (;;) {
    i128 mu = round_div(dot(u, v), norm_sq(u));
    Vec2 w{v.j - static_cast<std::int64_t>(mu) * u.j,
           v.k - static_cast<std::int64_t>(mu) * u.k};
    if (norm_sq(w) >= norm_sq(u)) {
      v = w;
      break;
    }
    v = u;
    u = w;
  }
  ReducedBasis out;
  out.b1 = u;
  out.b2 = v;
  out.r1_sq = static_cast<std::int64_t>(norm_sq(u));
  out.r1 = std::sqrt(static_cast<double>(out.r1_sq));
  return out;
}

double psi_main_term(const InstanceParams& p, std::int64_t N) {
  return static_cast<double>(N) * weight::kWHat0 * p.z / static_cast<double>(p.q);
}

namespace {

std::int64_t start_k0(std::int64_t m, const PhiEval& pe, std::int64_t n_start) {
  const auto q = static_cast<std::uint64_t>(pe.q());
  std::uint64_t m_mod = static_cast<std::uint64_t>(((m % pe.q()) + pe.q()) % pe.q());
  std::uint64_t n_mod = static_cast<std::uint64_t>(n_start % pe.q());
  return pe.k0(static_cast<std::int64_t>(arith::mulmod(m_mod, n_mod, q)));
}

double psi_linear(std::int64_t m, const PhiEval& pe, std::int64_t N) {
  const std::int64_t q = pe.q();
  const std::int64_t step = pe.step(m);
  std::int64_t k0 = start_k0(m, pe, N + 1);
  const std::int64_t lo = pe.support_lo(), hi = pe.support_hi();
  Kahan acc;
  for (std::int64_t n = N + 1; n <= 2 * N; ++n) {
    if (k0 >= lo && k0 <= hi) acc.add(pe.of_k0(k0));
    k0 += step;
    if (k0 >= q) k0 -= q;
  }
  return acc.value();
}

// Per support residue v, the n with k0(mn) = v form an arithmetic progression:
// counting them costs O(1) after one modular inverse of the step.
double psi_jumps(std::int64_t m, const PhiEval& pe, std::int64_t N) {
  const std::int64_t q = pe.q();
  const std::int64_t s = pe.step(m);  // k0 advances by s per unit n
  const std::int64_t lo = pe.support_lo(), hi = pe.support_hi();
  if (s == 0) {
    // constant k0 over the range (m = 0 mod q)
    double val = pe.of_k0(0);
    return val * static_cast<double>(N);
  }
  std::int64_t g = std::gcd(s, q);
  std::int64_t qg = q / g;  // >= 2: s in (0, q) forces g < q
  std::int64_t sg_inv = arith::mod_inverse(s / g, qg);
  std::int64_t base = start_k0(m, pe, N + 1);
  Kahan acc;
  for (std::int64_t v = lo; v <= hi; ++v) {
    std::int64_t dmod = ((v - base) % q + q) % q;
    if (dmod % g != 0) continue;
    // t = steps past n = N+1 with k0 = v: t = (dmod/g) * (s/g)^-1 (mod q/g)
    auto t0 = static_cast<std::int64_t>(
        arith::mulmod(static_cast<std::uint64_t>((dmod / g) % qg),
                      static_cast<std::uint64_t>(sg_inv), static_cast<std::uint64_t>(qg)));
    if (t0 > N - 1) continue;
    std::int64_t hits = (N - 1 - t0) / qg + 1;
    acc.add(pe.of_k0(v) * static_cast<double>(hits));
  }
  return acc.value();
}

}  // namespace

double psi(std::int64_t m, const InstanceParams& p, std::int64_t N, PsiStrategy strategy) {
  if (m < 1 || N < 1) throw std::invalid_argument("psi: need m >= 1 and N >= 1");
  PhiEval pe(p);
  if (strategy == PsiStrategy::Auto) {
    double linear_cost = static_cast<double>(N);
    double jump_cost = 0.55 * p.z + static_cast<double>(N) * p.z / static_cast<double>(p.q);
    strategy = jump_cost < linear_cost ? PsiStrategy::Jumps : PsiStrategy::Linear;
  }
  return strategy == PsiStrategy::Jumps ? psi_jumps(m, pe, N) : psi_linear(m, pe, N);
}

double psi1(std::int64_t m, const InstanceParams& p, std::int64_t N, PsiStrategy strategy) {
  return psi(m, p, N, strategy) - psi_main_term(p, N);
}

std::vector<std::pair<std::int64_t, std::int64_t>> level_table(std::int64_t M,
                                                               std::int64_t q,
                                                               std::int64_t a) {
  std::map<std::int64_t, std::int64_t> hist;
  for (std::int64_t m = 1; m <= M; ++m) {
    ReducedBasis rb = gauss_reduce(lambda_basis(m, q, a));
    ++hist[rb.r1_sq];
  }
  return {hist.begin(), hist.end()};
}

std::int64_t level_count(std::int64_t M, std::int64_t l, std::int64_t q, std::int64_t a) {
  if (l <= 0) return 0;  // shortest vector is nonzero
  std::int64_t count = 0;
  for (std::int64_t m = 1; m <= M; ++m)
    if (gauss_reduce(lambda_basis(m, q, a)).r1_sq == l) ++count;
  return count;
}

Moments moment_sums(std::int64_t M, const InstanceParams& p, std::int64_t N, int workers) {
  if (M < 1 || N < 1) throw std::invalid_argument("moment_sums: need M, N >= 1");
  double bound = std::pow(p.z, 2.0 - p.delta);
  if (static_cast<double>(M) > bound)
    throw WindowError("moment window violated: M = " + std::to_string(M) +
                      " > z^(2-delta) = " + std::to_string(bound));
  double main = psi_main_term(p, N);
  auto sums = deterministic_sum_vec<2>(
      M + 1, 2 * M + 1, workers,
      [&](std::int64_t lo, std::int64_t hi) {
        Kahan s2, s1sq;
        for (std::int64_t m = lo; m < hi; ++m) {
          double ps = psi(m, p, N);
          s2.add(ps * ps);
          double p1 = ps - main;
          s1sq.add(p1 * p1);
        }
        return std::array<double, 2>{s2.value(), s1sq.value()};
      },
      /*chunk=*/64);
  return Moments{sums[0], sums[1]};
}

}  // namespace e2kit::lattice

#include "e2kit/apps.hpp"

#include <algorithm>
#include <cmath>

#include "e2kit/errors.hpp"
#include "e2kit/reduce.hpp"

namespace e2kit::apps {

using arith::Rational64;

void for_each_palindrome(std::int64_t b, const std::function<bool(std::int64_t)>& visit) {
  if (b < 2) throw ConfigError("palindrome base must be >= 2");
  // n(j,k) = j(b^2+1) + kb is strictly increasing in (j,k) lexicographic order
  for (std::int64_t j = 1; j < b; ++j)
    for (std::int64_t k = 0; k < b; ++k)
      if (!visit(j * (b * b + 1) + k * b)) return;
}

std::vector<std::int64_t> palindrome_members(std::int64_t b) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>((b - 1) * b));
  for_each_palindrome(b, [&](std::int64_t n) {
    out.push_back(n);
    return true;
  });
  return out;
}

PalindromeCount palindrome_e2_count(std::int64_t b, arith::E2Convention conv,
                                    int workers, std::int64_t ceiling) {
  if (b < 2) throw ConfigError("palindrome base must be >= 2");
  double bd = static_cast<double>(b);
  if (bd * bd * bd > static_cast<double>(ceiling))
    throw CeilingError("palindrome enumeration ceiling exceeded: b^3 = " +
                       std::to_string(bd * bd * bd) + " > " + std::to_string(ceiling));
  auto counts = deterministic_sum_vec<1>(
      1, b, workers,
      [&](std::int64_t jlo, std::int64_t jhi) {
        std::int64_t c = 0;
        for (std::int64_t j = jlo; j < jhi; ++j)
          for (std::int64_t k = 0; k < b; ++k)
            if (arith::is_e2(static_cast<std::uint64_t>(j * (b * b + 1) + k * b), conv))
              ++c;
        return std::array<double, 1>{static_cast<double>(c)};
      },
      /*chunk=*/4);
  PalindromeCount out;
  out.b = b;
  out.count = static_cast<std::int64_t>(counts[0]);
  out.density_ratio = static_cast<double>(out.count) * std::log(bd) / (bd * bd);
  return out;
}

InstanceParams palindrome_instance(std::int64_t b) {
  if (b < 5) throw ConfigError("palindrome instance needs b >= 5 (z < q/4)");
  return derive_params(Rational64{1, 3}, b * b + 1, b, static_cast<double>(b),
                       static_cast<double>(b) * static_cast<double>(b) *
                           static_cast<double>(b));
}

std::int64_t palindrome_subset_check(std::int64_t b, std::int64_t ceiling) {
  InstanceParams p = palindrome_instance(b);
  PhiEval pe(p);
  std::int64_t q = b * b + 1;
  std::int64_t count = 0;
  for_each_member(
      p,
      [&](std::int64_t n) {
        // n = j(b^2+1) + kb with k = n abar mod q must land in the membership
        // grid j in (0,b), k in [0,b)
        std::int64_t k = pe.k0(n);
        std::int64_t rem = n - k * b;
        if (k < 0 || k >= b || rem <= 0 || rem % q != 0)
          throw ComputeError("palindrome containment failed at n = " + std::to_string(n));
        std::int64_t j = rem / q;
        if (j <= 0 || j >= b)
          throw ComputeError("palindrome containment failed at n = " + std::to_string(n) +
                             " (j = " + std::to_string(j) + ")");
        ++count;
        return true;
      },
      ceiling);
  return count;
}

namespace {

DiophantineSolution make_solution(std::int64_t n, double distance, double bound,
                                  std::int64_t conv_den) {
  auto f = arith::factorize(static_cast<std::uint64_t>(n));
  if (f.omega_with_multiplicity() != 2)
    throw ComputeError("dioph candidate is not a semiprime: n = " + std::to_string(n));
  DiophantineSolution s;
  s.n = n;
  s.p1 = f.factors.front().first;
  s.p2 = f.factors.back().first;
  s.distance = distance;
  s.bound = bound;
  s.conv_den = conv_den;
  return s;
}

}  // namespace

DiophResult dioph_solve(const arith::Alpha& alpha, Rational64 tau, std::int64_t qmin,
                        std::int64_t qmax, const DiophOptions& opt) {
  if (compare(tau, Rational64{8, 23}) >= 0)
    throw AdmissibilityError("tau = " + tau.str() + " >= 8/23 is not admissible");
  if (tau.num <= 0) throw ConfigError("tau must be > 0");

  DiophResult out;
  auto convs = arith::convergents_in_range(alpha, qmin, qmax);
  double t = tau.value();

  for (const auto& cv : convs) {
    if (!cv.den.fits_slong_p() || !cv.num.fits_slong_p())
      throw CeilingError("convergent denominator exceeds 64 bits");
    auto q = static_cast<std::int64_t>(cv.den.get_si());
    auto c = static_cast<std::int64_t>(cv.num.get_si());
    double x = std::pow(static_cast<double>(q), 2.0 / (1.0 + t));
    double z = x / static_cast<double>(q);  // exactly q^{(1-tau)/(1+tau)} by construction
    std::int64_t a = arith::mod_inverse(c % q, q);
    InstanceParams p = derive_params(tau, q, a, z, x, 0.02);
    ++out.convergents_used;

    std::vector<std::int64_t> semiprimes;
    for_each_member(
        p,
        [&](std::int64_t n) {
          if (arith::is_e2(static_cast<std::uint64_t>(n), opt.convention))
            semiprimes.push_back(n);
          return true;
        },
        opt.ceiling);
    out.candidates += static_cast<std::int64_t>(semiprimes.size());

    // the construction gives ||n alpha|| of the right order; certify the
    // literal inequality per candidate, and count near-misses separately
    for (std::int64_t n : semiprimes) {
      arith::DistanceCheck chk;
      if (alpha.has_surd()) {
        chk = arith::certify_distance_exact(alpha.surd_form(), n, tau);
      } else {
        chk = arith::certify_distance_interval(alpha, n, tau, opt.interval_bits / 2);
      }
      double bound = std::pow(static_cast<double>(n), -t);
      if (chk.certified) {
        // independent re-verification through the interval route
        arith::DistanceCheck recheck =
            arith::certify_distance_interval(alpha, n, tau, opt.interval_bits);
        if (!recheck.certified)
          throw ComputeError("re-verification disagrees at n = " + std::to_string(n));
        out.solutions.push_back(make_solution(n, recheck.distance, bound, q));
      } else if (chk.distance <= opt.near_factor * bound) {
        ++out.near_misses;
      }
    }
  }
  std::sort(out.solutions.begin(), out.solutions.end(),
            [](const DiophantineSolution& a, const DiophantineSolution& b) {
              return a.n < b.n;
            });
  return out;
}

}  // namespace e2kit::apps

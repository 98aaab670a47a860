#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "e2kit/reduce.hpp"
#include "e2kit/set_a.hpp"

// Bilinear sums over the structured set, m ~ M meaning M < m <= 2M throughout:
//
//   Type I          sum_{m~M, n~N} alpha_m Phi(mn)
//   Type I smooth   sum_{n} sum_{m~M} alpha_m W(n/3N) Phi(mn)
//   Type I variant  sum_{m} sum_{n1,n2~N} beta_{n1} W(m/3M) Phi(mn1) Phi(mn2)
//   Type II         sum_{m~M, n~N} alpha_m (varpi(n) - 1) Phi(mn)
//
// plus the harmonic-analysis instruments used to dissect the Type II sum:
// the Poisson dual of T(m-sum), the congruence sum F and its transform g^,
// the vanishing j-sum, the h-weight, and the final exponential sum stage.

namespace e2kit::sums {

struct CoefficientSpec {
  enum class Kind { One, Varpi, VarpiMinusOne, Custom };
  Kind kind = Kind::One;
  double declared_bound = 1.0;
  std::function<double(std::int64_t)> custom;

  static CoefficientSpec one() { return {}; }
  static CoefficientSpec varpi() { return {Kind::Varpi, 0.0, nullptr}; }
  static CoefficientSpec varpi_minus_one() { return {Kind::VarpiMinusOne, 0.0, nullptr}; }
  static CoefficientSpec custom_bounded(std::function<double(std::int64_t)> f, double bound) {
    return {Kind::Custom, bound, std::move(f)};
  }
  static CoefficientSpec parse(const std::string& name);

  // |coeff(n)| bound over (N, 2N]; varpi-type coefficients are log-bounded
  double bound_for(std::int64_t N) const;
  std::string name() const;
};

// Dense coefficient values over a dyadic range (N, 2N].
struct CoeffVector {
  std::int64_t lo = 0;  // values for n in (lo, 2lo]
  std::vector<double> vals;

  double at(std::int64_t n) const { return vals[static_cast<std::size_t>(n - lo - 1)]; }
  double sum() const;
};

CoeffVector evaluate_coefficients(const CoefficientSpec& spec, std::int64_t N);

struct SumReport {
  std::string op;
  InstanceParams params;
  std::int64_t m_window = 0, n_window = 0;
  std::string coeff;
  double value = 0;
  double main_term = 0;
  double abs_error = 0;       // |value - main_term|
  double rel_error = 0;       // abs_error / max(|main_term|, z^2 * 1e-15)
  double value_over_z2 = 0;   // the Type II smallness statistic
  double oracle_value = 0;    // filled when the oracle cross-check ran
  bool oracle_checked = false;
  double wall_seconds = 0;    // never serialized into output files
};

struct EvalOptions {
  int workers = 0;
  bool oracle = false;         // additionally run the naive-loop oracle
  bool bypass_window = false;  // Type II only: skip the N-window gate
};

SumReport type1(const CoefficientSpec& alpha, std::int64_t M, std::int64_t N,
                const InstanceParams& p, const EvalOptions& opt = {});
SumReport type1_smooth(const CoefficientSpec& alpha, std::int64_t M, std::int64_t N,
                       const InstanceParams& p, const EvalOptions& opt = {});
SumReport type1_variant(const CoefficientSpec& beta, std::int64_t M, std::int64_t N,
                        const InstanceParams& p, const EvalOptions& opt = {});
SumReport type2(std::int64_t M, std::int64_t N, const InstanceParams& p,
                const CoefficientSpec& alpha = CoefficientSpec::one(),
                const EvalOptions& opt = {});

// Naive double/triple-loop references (fresh modular reduction per pair,
// no incremental state); these are the oracle paths.
double type1_oracle(const CoefficientSpec& alpha, std::int64_t M, std::int64_t N,
                    const InstanceParams& p);
double type1_smooth_oracle(const CoefficientSpec& alpha, std::int64_t M, std::int64_t N,
                           const InstanceParams& p);
double type1_variant_oracle(const CoefficientSpec& beta, std::int64_t M, std::int64_t N,
                            const InstanceParams& p);
double type2_oracle(std::int64_t M, std::int64_t N, const InstanceParams& p,
                    const CoefficientSpec& alpha = CoefficientSpec::one());
double psi_oracle(std::int64_t m, const InstanceParams& p, std::int64_t N);

// S1 = sum_{n1,n2~N} beta_{n1} beta_{n2} sum_m W(m/3M) Phi(mn1) Phi(mn2) with
// beta = varpi - 1, split into coefficient pairs (varpi,varpi), (varpi,1),
// (1,1); the decomposition identity is s1 = s11 - 2 s12 + s13.
struct S1Parts {
  double s1 = 0, s11 = 0, s12 = 0, s13 = 0;
  // Cauchy data: sum over m~M of |alpha_m|^2 (alpha = 1) and of the squared
  // inner sums, for the literal S^2 <= (sum|alpha|^2)(sum inner^2) check
  double sum_alpha_sq = 0;
  double sum_inner_sq = 0;
};

S1Parts s1_decompose(std::int64_t M, std::int64_t N, const InstanceParams& p,
                     const EvalOptions& opt = {});
S1Parts s1_decompose_oracle(std::int64_t M, std::int64_t N, const InstanceParams& p);

// T = sum_m W(m/3M) Phi(m n1) Phi(m n2) evaluated directly and through its
// Poisson dual  (3Mz^2/q^2) sum_{k1,k2,m} W^(k1 z/q) W^(k2 z/q)
//                                        W^(3M(m - abar(k1 n1 + k2 n2)/q)).
struct HarmonicT {
  double direct = 0;
  std::complex<double> poisson;
  double tail_bound = 0;  // certified bound on the truncated dual tail
};

HarmonicT harmonic_t(std::int64_t M, std::int64_t n1, std::int64_t n2,
                     const InstanceParams& p, double budget = 1e-6);
double harmonic_t_direct_oracle(std::int64_t M, std::int64_t n1, std::int64_t n2,
                                const InstanceParams& p);

// F(n1,n2;c) = sum_{k1 n1 + k2 n2 = c} W^(k1 z/q) W^(k2 z/q), evaluated by
// solving the congruence k1 = c n1bar (mod n2) directly, or through the
// Poisson form (1/n2) sum_l g^(l/n2) e(c n1bar l / n2).
enum class FMode { Direct, Poisson };
std::complex<double> f_eval(std::int64_t n1, std::int64_t n2, std::int64_t c,
                            const InstanceParams& p, FMode mode,
                            double tail_budget = 1e-10);

// g(t) = W^(t z/q) W^((c - t n1) z / (n2 q)); g^ by exact convolution of the
// two inverse transforms: the integrand has compact support, so g^(t) is
// exactly zero for |t| >= 4z/q.
std::complex<double> g_hat(double t, std::int64_t n1, std::int64_t n2, std::int64_t c,
                           const InstanceParams& p, double tol = 1e-12);
// g^ with n1 as a continuous parameter (it enters analytically), plus the
// analytic d/dn1, for the smooth-weight derivative checks
std::complex<double> g_hat_continuous(double t, double n1, std::int64_t n2,
                                      std::int64_t c, const InstanceParams& p,
                                      double tol = 1e-12);
std::complex<double> g_hat_deriv_n1(double t, std::int64_t n1, std::int64_t n2,
                                    std::int64_t c, const InstanceParams& p,
                                    double tol = 1e-12);

// |sum_j W^((jq - ka - t n1) z / (n2 q))| over a truncated j-range
// (j_radius = 0 picks the radius from the decay envelope).  For n2 > 3z/4
// the dual side vanishes identically, so the statistic should be ~0.
double zerosum_stat(double t, std::int64_t k, std::int64_t n1, std::int64_t n2,
                    const InstanceParams& p, std::int64_t j_radius = 0);

// h(n1,n2) = g^(l/n2); the weight removed by partial summation
std::complex<double> h_weight(std::int64_t n1, std::int64_t n2, std::int64_t l,
                              std::int64_t c, const InstanceParams& p);

struct HBounds {
  double c_abs = 0;    // fitted C in |h| <= C q/z
  double c_deriv = 0;  // fitted C' in |dh/dn1| <= C' q / (N z^{1-eta})
};
HBounds h_derivative_bound(const InstanceParams& p, std::int64_t N, std::int64_t c,
                           std::int64_t l, double eta, int samples, Rng& rng);

// S10-style exponential sum: per n2 in (N, 2N],
//   inner(n2) = sum over primes n1 in [n1_lo, n1_hi], (n1,n2)=1,
//               of w(n1) e(cl * n1bar / n2),  w = varpi (or 1),
// aggregate = sum |inner|, and the empirical exponent log(agg)/log(N).
struct S10Result {
  std::vector<std::pair<std::int64_t, double>> per_n2;  // (n2, |inner|)
  double aggregate = 0;
  double exponent = 0;
};

S10Result s10(std::int64_t N, std::int64_t c_times_l, std::int64_t n2_lo,
              std::int64_t n2_hi, std::int64_t n1_lo, std::int64_t n1_hi,
              bool unit_weight = false, int workers = 0);
S10Result s10(std::int64_t N, std::int64_t c_times_l, bool unit_weight = false,
              int workers = 0);

// Admissible N-window for the Type II sum:
//   N_low = max(z, q / z^{1-delta}),  N_high = z^{16/15 - delta},
// gated by the exact threshold tau < 8/23.
struct Window {
  double n_low = 0, n_high = 0;
};
Window admissible_window(const InstanceParams& p);

struct TruncationRanges {
  double l_max = 0;  // 8 N z / q
  double k_max = 0;  // q z^eta / M
  double j_max = 0;  // N z^{-1 + 2 eta}
};
TruncationRanges truncation_ranges(double eta, std::int64_t N, std::int64_t M,
                                   const InstanceParams& p);

// Distinct primes in (N, 2N] sampled in pairs; verifies the coprimality that
// the prime support guarantees (n1 != n2 primes => gcd = 1).
std::vector<std::pair<std::int64_t, std::int64_t>> coprime_prime_pairs(std::int64_t N,
                                                                       int count,
                                                                       Rng& rng);

}  // namespace e2kit::sums

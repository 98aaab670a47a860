#include "e2kit/sums.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "e2kit/errors.hpp"
#include "e2kit/lattice.hpp"
#include "e2kit/quadrature.hpp"
#include "e2kit/sieve.hpp"
#include "e2kit/weight.hpp"

namespace e2kit::sums {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
};

std::int64_t checked_mod(std::int64_t v, std::int64_t q) {
  std::int64_t r = v % q;
  return r < 0 ? r + q : r;
}

std::uint64_t umod(std::int64_t v, std::int64_t q) {
  return static_cast<std::uint64_t>(checked_mod(v, q));
}

// k0 of m*n_start under the instance map, and the per-step increment m*abar
struct PhiWalk {
  std::int64_t k0, step, q;
  void advance() {
    k0 += step;
    if (k0 >= q) k0 -= q;
  }
};

PhiWalk make_walk(const InstanceParams& p, std::int64_t m, std::int64_t n_start) {
  PhiWalk w;
  w.q = p.q;
  w.step = static_cast<std::int64_t>(
      arith::mulmod(umod(m, p.q), static_cast<std::uint64_t>(p.a_inv),
                    static_cast<std::uint64_t>(p.q)));
  w.k0 = static_cast<std::int64_t>(
      arith::mulmod(static_cast<std::uint64_t>(w.step), umod(n_start, p.q),
                    static_cast<std::uint64_t>(p.q)));
  return w;
}

void check_mn_window(std::int64_t M, std::int64_t N, const InstanceParams& p,
                     const char* op) {
  long double mn = static_cast<long double>(M) * static_cast<long double>(N);
  if (!(mn >= static_cast<long double>(p.x) / 4.0L))
    throw WindowError(std::string(op) + ": hypothesis x/4 <= MN failed (MN = " +
                      std::to_string(static_cast<double>(mn)) + ", x/4 = " +
                      std::to_string(p.x / 4.0) + ")");
  if (!(mn <= 4.0L * static_cast<long double>(p.x)))
    throw WindowError(std::string(op) + ": hypothesis MN <= 4x failed (MN = " +
                      std::to_string(static_cast<double>(mn)) + ", 4x = " +
                      std::to_string(4.0 * p.x) + ")");
}

void check_m_bound(std::int64_t M, const InstanceParams& p, const char* op) {
  double bound = std::pow(p.z, 2.0 - p.delta);
  if (static_cast<double>(M) > bound)
    throw WindowError(std::string(op) + ": hypothesis M <= z^(2-delta) failed (M = " +
                      std::to_string(M) + ", z^(2-delta) = " + std::to_string(bound) + ")");
}

void check_n_bound(std::int64_t N, const InstanceParams& p, const char* op) {
  double bound = std::pow(p.z, 2.0 - p.delta);
  if (static_cast<double>(N) > bound)
    throw WindowError(std::string(op) + ": hypothesis N <= z^(2-delta) failed (N = " +
                      std::to_string(N) + ", z^(2-delta) = " + std::to_string(bound) + ")");
}

SumReport finish_report(std::string op, const InstanceParams& p, std::int64_t M,
                        std::int64_t N, const std::string& coeff, double value,
                        double main_term, const Timer& timer) {
  SumReport r;
  r.op = std::move(op);
  r.params = p;
  r.m_window = M;
  r.n_window = N;
  r.coeff = coeff;
  r.value = value;
  r.main_term = main_term;
  r.abs_error = std::abs(value - main_term);
  double floor = p.z * p.z * 1e-15;
  r.rel_error = r.abs_error / std::max(std::abs(main_term), floor);
  r.value_over_z2 = std::abs(value) / (p.z * p.z);
  r.wall_seconds = timer.seconds();
  return r;
}

void run_oracle(SumReport& r, double oracle_value) {
  r.oracle_value = oracle_value;
  r.oracle_checked = true;
}

}  // namespace

// ---------------------------------------------------------------------------
// coefficients
// ---------------------------------------------------------------------------

CoefficientSpec CoefficientSpec::parse(const std::string& name) {
  if (name == "one" || name == "1") return one();
  if (name == "varpi") return varpi();
  if (name == "varpi-minus-one") return varpi_minus_one();
  throw ConfigError("unknown coefficient kind '" + name + "'");
}

double CoefficientSpec::bound_for(std::int64_t N) const {
  switch (kind) {
    case Kind::One:
      return 1.0;
    case Kind::Varpi:
      return std::log(2.0 * static_cast<double>(N));
    case Kind::VarpiMinusOne:
      return std::log(2.0 * static_cast<double>(N)) + 1.0;
    case Kind::Custom:
      return declared_bound;
  }
  return 1.0;
}

std::string CoefficientSpec::name() const {
  switch (kind) {
    case Kind::One:
      return "one";
    case Kind::Varpi:
      return "varpi";
    case Kind::VarpiMinusOne:
      return "varpi-minus-one";
    case Kind::Custom:
      return "custom";
  }
  return "?";
}

double CoeffVector::sum() const {
  Kahan acc;
  for (double v : vals) acc.add(v);
  return acc.value();
}

CoeffVector evaluate_coefficients(const CoefficientSpec& spec, std::int64_t N) {
  if (N < 1) throw std::invalid_argument("coefficients: N must be >= 1");
  if (N > 50'000'000) throw CeilingError("coefficient range too large: N = " + std::to_string(N));
  CoeffVector cv;
  cv.lo = N;
  cv.vals.resize(static_cast<std::size_t>(N));
  switch (spec.kind) {
    case CoefficientSpec::Kind::One:
      std::fill(cv.vals.begin(), cv.vals.end(), 1.0);
      break;
    case CoefficientSpec::Kind::Varpi:
    case CoefficientSpec::Kind::VarpiMinusOne: {
      std::vector<std::uint8_t> flags;
      arith::sieve_range(N + 1, 2 * N + 1, flags);
      double base = spec.kind == CoefficientSpec::Kind::VarpiMinusOne ? -1.0 : 0.0;
      for (std::int64_t i = 0; i < N; ++i)
        cv.vals[static_cast<std::size_t>(i)] =
            base + (flags[static_cast<std::size_t>(i)]
                        ? std::log(static_cast<double>(N + 1 + i))
                        : 0.0);
      break;
    }
    case CoefficientSpec::Kind::Custom: {
      if (!spec.custom) throw ConfigError("custom coefficients need a function");
      double bound = spec.declared_bound + 1e-12;
      for (std::int64_t i = 0; i < N; ++i) {
        double v = spec.custom(N + 1 + i);
        if (std::abs(v) > bound)
          throw WindowError("custom coefficient exceeds declared bound at n = " +
                            std::to_string(N + 1 + i));
        cv.vals[static_cast<std::size_t>(i)] = v;
      }
      break;
    }
  }
  return cv;
}

// ---------------------------------------------------------------------------
// Type I / Type II kernels
// ---------------------------------------------------------------------------

SumReport type1(const CoefficientSpec& alpha, std::int64_t M, std::int64_t N,
                const InstanceParams& p, const EvalOptions& opt) {
  Timer timer;
  check_mn_window(M, N, p, "type1");
  check_m_bound(M, p, "type1");
  CoeffVector av = evaluate_coefficients(alpha, M);

  double value = deterministic_sum(
      M + 1, 2 * M + 1, opt.workers,
      [&](std::int64_t lo, std::int64_t hi) {
        Kahan acc;
        for (std::int64_t m = lo; m < hi; ++m) {
          double am = av.at(m);
          if (am == 0.0) continue;
          acc.add(am * lattice::psi(m, p, N));
        }
        return acc.value();
      },
      /*chunk=*/64);

  double main = weight::kWHat0 * static_cast<double>(N) * p.z / static_cast<double>(p.q) *
                av.sum();
  SumReport r = finish_report("type1", p, M, N, alpha.name(), value, main, timer);
  if (opt.oracle) run_oracle(r, type1_oracle(alpha, M, N, p));
  return r;
}

double type1_oracle(const CoefficientSpec& alpha, std::int64_t M, std::int64_t N,
                    const InstanceParams& p) {
  CoeffVector av = evaluate_coefficients(alpha, M);
  PhiEval pe(p);
  Kahan acc;
  for (std::int64_t m = M + 1; m <= 2 * M; ++m) {
    double am = av.at(m);
    if (am == 0.0) continue;
    for (std::int64_t n = N + 1; n <= 2 * N; ++n) {
      std::uint64_t prod = arith::mulmod(umod(m, p.q), umod(n, p.q),
                                         static_cast<std::uint64_t>(p.q));
      acc.add(am * pe(static_cast<std::int64_t>(prod)));
    }
  }
  return acc.value();
}

double psi_oracle(std::int64_t m, const InstanceParams& p, std::int64_t N) {
  PhiEval pe(p);
  Kahan acc;
  for (std::int64_t n = N + 1; n <= 2 * N; ++n) {
    std::uint64_t prod =
        arith::mulmod(umod(m, p.q), umod(n, p.q), static_cast<std::uint64_t>(p.q));
    acc.add(pe(static_cast<std::int64_t>(prod)));
  }
  return acc.value();
}

namespace {

// sum over n in (3N/4, 9N/4) of W(n/3N) Phi(mn), the smooth-windowed inner sum
double smooth_inner(std::int64_t m, const InstanceParams& p, std::int64_t N,
                    const PhiEval& pe) {
  auto n_lo = static_cast<std::int64_t>(std::floor(0.75 * static_cast<double>(N))) + 1;
  auto n_hi = static_cast<std::int64_t>(std::ceil(2.25 * static_cast<double>(N))) - 1;
  PhiWalk wlk = make_walk(p, m, n_lo);
  const std::int64_t lo = pe.support_lo(), hi = pe.support_hi();
  double inv3n = 1.0 / (3.0 * static_cast<double>(N));
  Kahan acc;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    if (wlk.k0 >= lo && wlk.k0 <= hi)
      acc.add(weight::w(static_cast<double>(n) * inv3n) * pe.of_k0(wlk.k0));
    wlk.advance();
  }
  return acc.value();
}

}  // namespace

SumReport type1_smooth(const CoefficientSpec& alpha, std::int64_t M, std::int64_t N,
                       const InstanceParams& p, const EvalOptions& opt) {
  Timer timer;
  check_mn_window(M, N, p, "type1_smooth");
  check_m_bound(M, p, "type1_smooth");
  CoeffVector av = evaluate_coefficients(alpha, M);
  PhiEval pe(p);

  double value = deterministic_sum(
      M + 1, 2 * M + 1, opt.workers,
      [&](std::int64_t lo, std::int64_t hi) {
        Kahan acc;
        for (std::int64_t m = lo; m < hi; ++m) {
          double am = av.at(m);
          if (am == 0.0) continue;
          acc.add(am * smooth_inner(m, p, N, pe));
        }
        return acc.value();
      },
      /*chunk=*/16);

  double main = 3.0 * weight::kWHat0 * weight::kWHat0 * static_cast<double>(N) * p.z /
                static_cast<double>(p.q) * av.sum();
  SumReport r = finish_report("type1_smooth", p, M, N, alpha.name(), value, main, timer);
  if (opt.oracle) run_oracle(r, type1_smooth_oracle(alpha, M, N, p));
  return r;
}

double type1_smooth_oracle(const CoefficientSpec& alpha, std::int64_t M, std::int64_t N,
                           const InstanceParams& p) {
  CoeffVector av = evaluate_coefficients(alpha, M);
  PhiEval pe(p);
  auto n_lo = static_cast<std::int64_t>(std::floor(0.75 * static_cast<double>(N))) + 1;
  auto n_hi = static_cast<std::int64_t>(std::ceil(2.25 * static_cast<double>(N))) - 1;
  double inv3n = 1.0 / (3.0 * static_cast<double>(N));
  Kahan acc;
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    double wn = weight::w(static_cast<double>(n) * inv3n);
    if (wn == 0.0) continue;
    for (std::int64_t m = M + 1; m <= 2 * M; ++m) {
      double am = av.at(m);
      if (am == 0.0) continue;
      std::uint64_t prod = arith::mulmod(umod(m, p.q), umod(n, p.q),
                                         static_cast<std::uint64_t>(p.q));
      acc.add(am * wn * pe(static_cast<std::int64_t>(prod)));
    }
  }
  return acc.value();
}

SumReport type1_variant(const CoefficientSpec& beta, std::int64_t M, std::int64_t N,
                        const InstanceParams& p, const EvalOptions& opt) {
  Timer timer;
  check_mn_window(M, N, p, "type1_variant");
  check_m_bound(M, p, "type1_variant");
  check_n_bound(N, p, "type1_variant");
  CoeffVector bv = evaluate_coefficients(beta, N);
  PhiEval pe(p);

  auto m_lo = static_cast<std::int64_t>(std::floor(0.75 * static_cast<double>(M))) + 1;
  auto m_hi = static_cast<std::int64_t>(std::ceil(2.25 * static_cast<double>(M))) - 1;
  double inv3m = 1.0 / (3.0 * static_cast<double>(M));
  const std::int64_t slo = pe.support_lo(), shi = pe.support_hi();
  const double* bvals = bv.vals.data();

  double value = deterministic_sum(
      m_lo, m_hi + 1, opt.workers,
      [&](std::int64_t lo, std::int64_t hi) {
        Kahan acc;
        for (std::int64_t m = lo; m < hi; ++m) {
          double wm = weight::w(static_cast<double>(m) * inv3m);
          if (wm == 0.0) continue;
          PhiWalk wlk = make_walk(p, m, N + 1);
          Kahan bsum, psum;
          for (std::int64_t i = 0; i < N; ++i) {
            if (wlk.k0 >= slo && wlk.k0 <= shi) {
              double ph = pe.of_k0(wlk.k0);
              bsum.add(bvals[static_cast<std::size_t>(i)] * ph);
              psum.add(ph);
            }
            wlk.advance();
          }
          acc.add(wm * bsum.value() * psum.value());
        }
        return acc.value();
      },
      /*chunk=*/16);

  double w0 = weight::kWHat0;
  double main = 3.0 * static_cast<double>(N) * static_cast<double>(M) * w0 * w0 * w0 *
                (p.z * p.z) / (static_cast<double>(p.q) * static_cast<double>(p.q)) *
                bv.sum();
  SumReport r = finish_report("type1_variant", p, M, N, beta.name(), value, main, timer);
  if (opt.oracle) run_oracle(r, type1_variant_oracle(beta, M, N, p));
  return r;
}

double type1_variant_oracle(const CoefficientSpec& beta, std::int64_t M, std::int64_t N,
                            const InstanceParams& p) {
  CoeffVector bv = evaluate_coefficients(beta, N);
  PhiEval pe(p);
  auto m_lo = static_cast<std::int64_t>(std::floor(0.75 * static_cast<double>(M))) + 1;
  auto m_hi = static_cast<std::int64_t>(std::ceil(2.25 * static_cast<double>(M))) - 1;
  double inv3m = 1.0 / (3.0 * static_cast<double>(M));
  Kahan acc;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    double wm = weight::w(static_cast<double>(m) * inv3m);
    if (wm == 0.0) continue;
    for (std::int64_t n1 = N + 1; n1 <= 2 * N; ++n1) {
      double b = bv.at(n1);
      if (b == 0.0) continue;
      std::uint64_t p1 = arith::mulmod(umod(m, p.q), umod(n1, p.q),
                                       static_cast<std::uint64_t>(p.q));
      double phi1 = pe(static_cast<std::int64_t>(p1));
      if (phi1 == 0.0) continue;
      for (std::int64_t n2 = N + 1; n2 <= 2 * N; ++n2) {
        std::uint64_t p2 = arith::mulmod(umod(m, p.q), umod(n2, p.q),
                                         static_cast<std::uint64_t>(p.q));
        acc.add(wm * b * phi1 * pe(static_cast<std::int64_t>(p2)));
      }
    }
  }
  return acc.value();
}

SumReport type2(std::int64_t M, std::int64_t N, const InstanceParams& p,
                const CoefficientSpec& alpha, const EvalOptions& opt) {
  Timer timer;
  check_mn_window(M, N, p, "type2");
  if (!opt.bypass_window) {
    Window w = admissible_window(p);  // throws when tau >= 8/23 or the window is empty
    std::string failed;
    double nd = static_cast<double>(N);
    if (!(nd >= p.z)) failed += " N >= z;";
    if (!(nd >= static_cast<double>(p.q) / std::pow(p.z, 1.0 - p.delta)))
      failed += " N >= q/z^(1-delta);";
    if (!(nd <= w.n_high)) failed += " N <= z^(16/15-delta);";
    if (!failed.empty())
      throw WindowError("type2: N-window inequalities failed:" + failed + " (N = " +
                        std::to_string(N) + ", window = [" + std::to_string(w.n_low) +
                        ", " + std::to_string(w.n_high) + "])");
  }
  CoeffVector av = evaluate_coefficients(alpha, M);
  CoeffVector bv = evaluate_coefficients(CoefficientSpec::varpi_minus_one(), N);
  PhiEval pe(p);
  const std::int64_t slo = pe.support_lo(), shi = pe.support_hi();
  const double* bvals = bv.vals.data();

  double value = deterministic_sum(
      M + 1, 2 * M + 1, opt.workers,
      [&](std::int64_t lo, std::int64_t hi) {
        Kahan acc;
        for (std::int64_t m = lo; m < hi; ++m) {
          double am = av.at(m);
          if (am == 0.0) continue;
          PhiWalk wlk = make_walk(p, m, N + 1);
          Kahan inner;
          for (std::int64_t i = 0; i < N; ++i) {
            if (wlk.k0 >= slo && wlk.k0 <= shi)
              inner.add(bvals[static_cast<std::size_t>(i)] * pe.of_k0(wlk.k0));
            wlk.advance();
          }
          acc.add(am * inner.value());
        }
        return acc.value();
      },
      /*chunk=*/16);

  SumReport r = finish_report("type2", p, M, N, alpha.name(), value, 0.0, timer);
  if (opt.oracle) run_oracle(r, type2_oracle(M, N, p, alpha));
  return r;
}

double type2_oracle(std::int64_t M, std::int64_t N, const InstanceParams& p,
                    const CoefficientSpec& alpha) {
  CoeffVector av = evaluate_coefficients(alpha, M);
  CoeffVector bv = evaluate_coefficients(CoefficientSpec::varpi_minus_one(), N);
  PhiEval pe(p);
  Kahan acc;
  for (std::int64_t m = M + 1; m <= 2 * M; ++m) {
    double am = av.at(m);
    if (am == 0.0) continue;
    for (std::int64_t n = N + 1; n <= 2 * N; ++n) {
      std::uint64_t prod = arith::mulmod(umod(m, p.q), umod(n, p.q),
                                         static_cast<std::uint64_t>(p.q));
      double ph = pe(static_cast<std::int64_t>(prod));
      if (ph != 0.0) acc.add(am * bv.at(n) * ph);
    }
  }
  return acc.value();
}

// ---------------------------------------------------------------------------
// S1 decomposition
// ---------------------------------------------------------------------------

S1Parts s1_decompose(std::int64_t M, std::int64_t N, const InstanceParams& p,
                     const EvalOptions& opt) {
  check_mn_window(M, N, p, "s1_decompose");
  CoeffVector vp = evaluate_coefficients(CoefficientSpec::varpi(), N);
  PhiEval pe(p);
  const std::int64_t slo = pe.support_lo(), shi = pe.support_hi();
  auto m_lo = static_cast<std::int64_t>(std::floor(0.75 * static_cast<double>(M))) + 1;
  auto m_hi = static_cast<std::int64_t>(std::ceil(2.25 * static_cast<double>(M))) - 1;
  double inv3m = 1.0 / (3.0 * static_cast<double>(M));
  const double* vpv = vp.vals.data();

  auto sums = deterministic_sum_vec<6>(
      m_lo, m_hi + 1, opt.workers,
      [&](std::int64_t lo, std::int64_t hi) {
        std::array<double, 6> out{};
        Kahan s1, s11, s12, s13, asq, isq;
        for (std::int64_t m = lo; m < hi; ++m) {
          double wm = weight::w(static_cast<double>(m) * inv3m);
          PhiWalk wlk = make_walk(p, m, N + 1);
          Kahan A, B, C;  // inner sums with varpi, 1, varpi-1 coefficients
          for (std::int64_t i = 0; i < N; ++i) {
            if (wlk.k0 >= slo && wlk.k0 <= shi) {
              double ph = pe.of_k0(wlk.k0);
              double vpn = vpv[static_cast<std::size_t>(i)];
              A.add(vpn * ph);
              B.add(ph);
              C.add((vpn - 1.0) * ph);
            }
            wlk.advance();
          }
          double a = A.value(), b = B.value(), c = C.value();
          if (wm != 0.0) {
            s1.add(wm * c * c);
            s11.add(wm * a * a);
            s12.add(wm * a * b);
            s13.add(wm * b * b);
          }
          if (m > M && m <= 2 * M) {
            asq.add(1.0);
            isq.add(c * c);
          }
        }
        out = {s1.value(), s11.value(), s12.value(),
               s13.value(), asq.value(), isq.value()};
        return out;
      },
      /*chunk=*/16);

  S1Parts parts;
  parts.s1 = sums[0];
  parts.s11 = sums[1];
  parts.s12 = sums[2];
  parts.s13 = sums[3];
  parts.sum_alpha_sq = sums[4];
  parts.sum_inner_sq = sums[5];
  return parts;
}

S1Parts s1_decompose_oracle(std::int64_t M, std::int64_t N, const InstanceParams& p) {
  CoeffVector vp = evaluate_coefficients(CoefficientSpec::varpi(), N);
  PhiEval pe(p);
  auto m_lo = static_cast<std::int64_t>(std::floor(0.75 * static_cast<double>(M))) + 1;
  auto m_hi = static_cast<std::int64_t>(std::ceil(2.25 * static_cast<double>(M))) - 1;
  double inv3m = 1.0 / (3.0 * static_cast<double>(M));
  S1Parts parts;
  Kahan s1, s11, s12, s13, asq, isq;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    double wm = weight::w(static_cast<double>(m) * inv3m);
    Kahan A, B, C;
    for (std::int64_t n = N + 1; n <= 2 * N; ++n) {
      std::uint64_t prod = arith::mulmod(umod(m, p.q), umod(n, p.q),
                                         static_cast<std::uint64_t>(p.q));
      double ph = pe(static_cast<std::int64_t>(prod));
      if (ph == 0.0) continue;
      double vpn = vp.at(n);
      A.add(vpn * ph);
      B.add(ph);
      C.add((vpn - 1.0) * ph);
    }
    double a = A.value(), b = B.value(), c = C.value();
    if (wm != 0.0) {
      s1.add(wm * c * c);
      s11.add(wm * a * a);
      s12.add(wm * a * b);
      s13.add(wm * b * b);
    }
    if (m > M && m <= 2 * M) {
      asq.add(1.0);
      isq.add(c * c);
    }
  }
  parts.s1 = s1.value();
  parts.s11 = s11.value();
  parts.s12 = s12.value();
  parts.s13 = s13.value();
  parts.sum_alpha_sq = asq.value();
  parts.sum_inner_sq = isq.value();
  return parts;
}

// ---------------------------------------------------------------------------
// harmonic analysis instruments
// ---------------------------------------------------------------------------

namespace {

// smallest K with progression tail below target (throws if unattainable)
std::int64_t k_for_tail(double step, double target, const char* what) {
  const auto& db = weight::decay_bounds();
  std::int64_t lo = 1, hi = 1;
  while (db.progression_tail(step, hi) > target) {
    hi *= 2;
    if (hi > (std::int64_t{1} << 26))
      throw TruncationError(std::string(what) + ": tail budget unattainable (step = " +
                            std::to_string(step) + ", target = " + std::to_string(target) + ")");
  }
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (db.progression_tail(step, mid) <= target)
      hi = mid;
    else
      lo = mid + 1;
  }
  return lo;
}

// smallest argument t with envelope(t) <= target
double arg_for_envelope(double target) {
  const auto& db = weight::decay_bounds();
  double lo = 0, hi = 1;
  while (db.envelope(hi) > target && hi < 1e9) hi *= 2;
  for (int i = 0; i < 80; ++i) {
    double mid = 0.5 * (lo + hi);
    if (db.envelope(mid) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace

double harmonic_t_direct_oracle(std::int64_t M, std::int64_t n1, std::int64_t n2,
                                const InstanceParams& p) {
  PhiEval pe(p);
  auto m_lo = static_cast<std::int64_t>(std::floor(0.75 * static_cast<double>(M))) + 1;
  auto m_hi = static_cast<std::int64_t>(std::ceil(2.25 * static_cast<double>(M))) - 1;
  double inv3m = 1.0 / (3.0 * static_cast<double>(M));
  Kahan acc;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    double wm = weight::w(static_cast<double>(m) * inv3m);
    if (wm == 0.0) continue;
    std::uint64_t a1 = arith::mulmod(umod(m, p.q), umod(n1, p.q),
                                     static_cast<std::uint64_t>(p.q));
    double f1 = pe(static_cast<std::int64_t>(a1));
    if (f1 == 0.0) continue;
    std::uint64_t a2 = arith::mulmod(umod(m, p.q), umod(n2, p.q),
                                     static_cast<std::uint64_t>(p.q));
    acc.add(wm * f1 * pe(static_cast<std::int64_t>(a2)));
  }
  return acc.value();
}

HarmonicT harmonic_t(std::int64_t M, std::int64_t n1, std::int64_t n2,
                     const InstanceParams& p, double budget) {
  if (std::gcd(n1, n2) != 1)
    throw ConfigError("harmonic_t: gcd(n1, n2) != 1");
  HarmonicT out;

  // direct side: incremental k0 walks for both Phi factors
  {
    PhiEval pe(p);
    auto m_lo = static_cast<std::int64_t>(std::floor(0.75 * static_cast<double>(M))) + 1;
    auto m_hi = static_cast<std::int64_t>(std::ceil(2.25 * static_cast<double>(M))) - 1;
    double inv3m = 1.0 / (3.0 * static_cast<double>(M));
    PhiWalk w1 = make_walk(p, n1, m_lo);  // k0 of m*n1, stepping in m
    PhiWalk w2 = make_walk(p, n2, m_lo);
    const std::int64_t slo = pe.support_lo(), shi = pe.support_hi();
    Kahan acc;
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
      if (w1.k0 >= slo && w1.k0 <= shi && w2.k0 >= slo && w2.k0 <= shi)
        acc.add(weight::w(static_cast<double>(m) * inv3m) * pe.of_k0(w1.k0) *
                pe.of_k0(w2.k0));
      w1.advance();
      w2.advance();
    }
    out.direct = acc.value();
  }

  // Poisson dual
  const double q = static_cast<double>(p.q);
  const double step_k = p.z / q;          // argument step of W^(k z/q)
  const double step_m = 3.0 * static_cast<double>(M) / q;  // of W^(3M u / q)
  const double prefactor = 3.0 * static_cast<double>(M) * p.z * p.z / (q * q);
  const auto& db = weight::decay_bounds();

  // norm bounds for the budget split
  double s_bound = weight::kWHat0 + db.progression_tail(step_k, 1);
  double g_bound = 2.0 * weight::kWHat0 + db.progression_tail(step_m, 1);
  double budget_abs = budget / prefactor;

  std::int64_t K =
      k_for_tail(step_k, budget_abs / (4.0 * s_bound * g_bound), "harmonic_t");
  // per-term evaluation threshold for the m-factor
  double t_m = arg_for_envelope(budget_abs / (4.0 * s_bound * s_bound));
  auto U = static_cast<std::int64_t>(std::ceil(t_m / step_m)) + 1;  // |u| <= U kept
  if (K > 2'000'000 || U > 2'000'000)
    throw TruncationError("harmonic_t: truncation ranges too large for the budget (K = " +
                          std::to_string(K) + ", U = " + std::to_string(U) + ")");

  weight::FourierTable tab_k(step_k, K, 1e-13);
  weight::FourierTable tab_m(step_m, U, 1e-13);

  // true tail bound with the table in hand
  double s_abs = std::abs(tab_k.even_at(0));
  for (std::int64_t k = 1; k <= K; ++k) s_abs += 2.0 * std::abs(tab_k.even_at(k));
  out.tail_bound =
      prefactor * (2.0 * db.progression_tail(step_k, K + 1) * (s_abs + 1.0) * g_bound +
                   s_abs * s_abs * 2.0 * db.envelope(t_m));

  // r = abar (k1 n1 + k2 n2) mod q; the m-factor argument is 3M (m q - r)/q,
  // nonzero only when u = m q - r satisfies |u| <= U
  const std::int64_t qi = p.q;
  const std::int64_t s1 = static_cast<std::int64_t>(
      arith::mulmod(umod(n1, qi), static_cast<std::uint64_t>(p.a_inv),
                    static_cast<std::uint64_t>(qi)));
  const std::int64_t s2 = static_cast<std::int64_t>(
      arith::mulmod(umod(n2, qi), static_cast<std::uint64_t>(p.a_inv),
                    static_cast<std::uint64_t>(qi)));
  const auto mspan = static_cast<std::int64_t>(U / qi) + 1;

  // exploit the (k1,k2) -> (-k1,-k2) conjugation: sum = center + 2 Re(half)
  Kahan total;
  auto add_pair = [&](std::int64_t k1, std::int64_t k2, std::int64_t r, double mult) {
    // m-candidates: u = m q - r with |u| <= U
    std::int64_t hit_lo = -mspan, hit_hi = mspan + 1;
    std::complex<double> msum(0.0, 0.0);
    bool any = false;
    for (std::int64_t m = hit_lo; m <= hit_hi; ++m) {
      std::int64_t u = m * qi - r;
      if (u < -U || u > U) continue;
      msum += tab_m.at(u);
      any = true;
    }
    if (!any) return;
    std::complex<double> term = tab_k.at(k1) * tab_k.at(k2) * msum;
    total.add(mult * term.real());
  };

  for (std::int64_t k1 = 0; k1 <= K; ++k1) {
    std::int64_t k2_start = (k1 == 0) ? 0 : -K;
    // r at (k1, k2_start)
    std::int64_t r = static_cast<std::int64_t>(
        (static_cast<unsigned __int128>(umod(k1, qi)) * static_cast<std::uint64_t>(s1) +
         static_cast<unsigned __int128>(umod(k2_start, qi)) * static_cast<std::uint64_t>(s2)) %
        static_cast<std::uint64_t>(qi));
    for (std::int64_t k2 = k2_start; k2 <= K; ++k2) {
      if (std::min(r, qi - r) <= U) {
        double mult = (k1 == 0 && k2 == 0) ? 1.0 : 2.0;
        add_pair(k1, k2, r, mult);
      }
      r += s2;
      if (r >= qi) r -= qi;
    }
  }
  out.poisson = std::complex<double>(prefactor * total.value(), 0.0);
  return out;
}

std::complex<double> f_eval(std::int64_t n1, std::int64_t n2, std::int64_t c,
                            const InstanceParams& p, FMode mode, double tail_budget) {
  if (n2 < 2) throw ConfigError("f_eval: n2 must be >= 2");
  if (std::gcd(n1, n2) != 1) throw ConfigError("f_eval: gcd(n1, n2) != 1");
  const double q = static_cast<double>(p.q);
  const double zq = p.z / q;
  std::int64_t n1bar = arith::mod_inverse(checked_mod(n1, n2), n2);
  std::int64_t cb = static_cast<std::int64_t>(
      arith::mulmod(umod(c, n2), static_cast<std::uint64_t>(n1bar),
                    static_cast<std::uint64_t>(n2)));
  if (mode == FMode::Direct) {
    // admissible k1 = cb + t n2; the first factor W^(k1 z/q) controls the tail
    double step_arg = zq * static_cast<double>(n2);
    std::int64_t T =
        k_for_tail(step_arg, tail_budget / (2.0 * weight::kWHat0), "f_eval");
    std::complex<double> acc(0.0, 0.0);
    for (std::int64_t t = -T - 1; t <= T + 1; ++t) {
      std::int64_t k1 = cb + t * n2;
      std::complex<double> w1 = weight::w_hat(static_cast<double>(k1) * zq, 1e-13);
      double a2 = (static_cast<double>(c) - static_cast<double>(k1) * static_cast<double>(n1)) *
                  p.z / (static_cast<double>(n2) * q);
      std::complex<double> w2 = weight::w_hat(a2, 1e-13);
      acc += w1 * w2;
    }
    return acc;
  }
  // Poisson: (1/n2) sum_l g^(l/n2) e(c n1bar l / n2); g^ vanishes for
  // |l/n2| >= 4z/q, so the sum is exactly finite
  auto L = static_cast<std::int64_t>(std::floor(4.0 * p.z * static_cast<double>(n2) / q));
  std::complex<double> acc(0.0, 0.0);
  for (std::int64_t l = -L; l <= L; ++l) {
    std::complex<double> gh =
        g_hat(static_cast<double>(l) / static_cast<double>(n2), n1, n2, c, p, 1e-13);
    if (gh == std::complex<double>(0.0, 0.0)) continue;
    double ang = 2.0 * kPi * static_cast<double>(checked_mod(cb * l, n2)) /
                 static_cast<double>(n2);
    acc += gh * std::complex<double>(std::cos(ang), std::sin(ang));
  }
  return acc / static_cast<double>(n2);
}

std::complex<double> g_hat_continuous(double t, double n1, std::int64_t n2,
                                      std::int64_t c, const InstanceParams& p,
                                      double tol) {
  // g = g1 g2 with g1(u) = W^(u z/q), g2(u) = W^((c - u n1) z / (n2 q)); then
  // g^ = g1^ * g2^ (convolution), where
  //   g1^(x)  = (q/z) W(-x q/z),                     support [-3z/4q, -z/4q]
  //   g2^(xi) = (n2 q / n1 z) W(xi n2 q / n1 z) e(-c xi / n1),
  //                                    support [n1 z/4 n2 q, 3 n1 z/4 n2 q]
  const double q = static_cast<double>(p.q);
  const double z = p.z;
  const double g1_lo = -0.75 * z / q, g1_hi = -0.25 * z / q;
  const double ratio = n1 * z / (static_cast<double>(n2) * q);
  const double g2_lo = 0.25 * ratio, g2_hi = 0.75 * ratio;
  double lo = std::max(g1_lo, t - g2_hi);
  double hi = std::min(g1_hi, t - g2_lo);
  if (lo >= hi) return {0.0, 0.0};  // disjoint supports: exact zero

  const double amp1 = q / z;
  const double amp2 = 1.0 / ratio;
  const double freq = std::abs(static_cast<double>(c)) / n1;
  double abs_tol = tol * std::max(1.0, amp1);
  auto integrand = [&](double x) -> std::complex<double> {
    double w1 = amp1 * weight::w(-x * amp1);
    double xi = t - x;
    double w2 = amp2 * weight::w(xi * amp2);
    double ang = -2.0 * kPi * static_cast<double>(c) * xi / n1;
    return std::complex<double>(std::cos(ang), std::sin(ang)) * (w1 * w2);
  };
  return quad::integrate_oscillatory_complex(integrand, lo, hi, freq, abs_tol);
}

std::complex<double> g_hat(double t, std::int64_t n1, std::int64_t n2, std::int64_t c,
                           const InstanceParams& p, double tol) {
  return g_hat_continuous(t, static_cast<double>(n1), n2, c, p, tol);
}

std::complex<double> g_hat_deriv_n1(double t, std::int64_t n1, std::int64_t n2,
                                    std::int64_t c, const InstanceParams& p, double tol) {
  const double q = static_cast<double>(p.q);
  const double z = p.z;
  const double g1_lo = -0.75 * z / q, g1_hi = -0.25 * z / q;
  const double n1d = static_cast<double>(n1);
  const double ratio = n1d * z / (static_cast<double>(n2) * q);
  const double g2_lo = 0.25 * ratio, g2_hi = 0.75 * ratio;
  double lo = std::max(g1_lo, t - g2_hi);
  double hi = std::min(g1_hi, t - g2_lo);
  if (lo >= hi) return {0.0, 0.0};

  const double amp1 = q / z;
  const double amp2 = 1.0 / ratio;
  const double freq = std::abs(static_cast<double>(c)) / n1d;
  double abs_tol = tol * std::max(1.0, amp1);
  auto integrand = [&](double x) -> std::complex<double> {
    double w1 = amp1 * weight::w(-x * amp1);
    double xi = t - x;
    double u = xi * amp2;
    double ang = -2.0 * kPi * static_cast<double>(c) * xi / n1d;
    std::complex<double> phase(std::cos(ang), std::sin(ang));
    // d/dn1 of (1/n1) * n2 q / z * W(u) e(phi) with u ~ 1/n1, phi ~ 1/n1:
    // (amp2/n1) [ -W(u) - u W'(u) + 2 pi i (c xi / n1) W(u) ] e(phi)
    std::complex<double> bracket(-weight::w(u) - u * weight::w_deriv(u), 0.0);
    bracket += std::complex<double>(0.0, 2.0 * kPi * static_cast<double>(c) * xi / n1d) *
               weight::w(u);
    return w1 * (amp2 / n1d) * bracket * phase;
  };
  return quad::integrate_oscillatory_complex(integrand, lo, hi, freq, abs_tol);
}

double zerosum_stat(double t, std::int64_t k, std::int64_t n1, std::int64_t n2,
                    const InstanceParams& p, std::int64_t j_radius) {
  const double q = static_cast<double>(p.q);
  const double z = p.z;
  const double n2d = static_cast<double>(n2);
  // argument of term j: (j q - k a - t n1) z / (n2 q) = step*j - off
  const double step = z / n2d;
  const double off = (static_cast<double>(k) * static_cast<double>(p.a) +
                      t * static_cast<double>(n1)) *
                     z / (n2d * q);
  const auto center = static_cast<std::int64_t>(std::llround(off / step));
  if (j_radius <= 0) j_radius = k_for_tail(step, 1e-10, "zerosum") + 2;
  std::complex<double> acc(0.0, 0.0);
  for (std::int64_t j = center - j_radius; j <= center + j_radius; ++j) {
    double arg = step * static_cast<double>(j) - off;
    if (weight::decay_bounds().envelope(arg) < 1e-14) continue;
    acc += weight::w_hat(arg, 1e-13);
  }
  return std::abs(acc);
}

std::complex<double> h_weight(std::int64_t n1, std::int64_t n2, std::int64_t l,
                              std::int64_t c, const InstanceParams& p) {
  return g_hat(static_cast<double>(l) / static_cast<double>(n2), n1, n2, c, p);
}

HBounds h_derivative_bound(const InstanceParams& p, std::int64_t N, std::int64_t c,
                           std::int64_t l, double eta, int samples, Rng& rng) {
  HBounds hb;
  const double q = static_cast<double>(p.q);
  double scale_abs = q / p.z;
  double scale_deriv = q / (static_cast<double>(N) * std::pow(p.z, 1.0 - eta));
  for (int i = 0; i < samples; ++i) {
    std::int64_t n1 = rng.uniform_int(N + 1, 2 * N);
    std::int64_t n2 = rng.uniform_int(N + 1, 2 * N);
    if (std::gcd(n1, n2) != 1) continue;
    std::complex<double> h = h_weight(n1, n2, l, c, p);
    std::complex<double> dh = g_hat_deriv_n1(
        static_cast<double>(l) / static_cast<double>(n2), n1, n2, c, p);
    hb.c_abs = std::max(hb.c_abs, std::abs(h) / scale_abs);
    hb.c_deriv = std::max(hb.c_deriv, std::abs(dh) / scale_deriv);
  }
  return hb;
}

// ---------------------------------------------------------------------------
// the exponential-sum stage
// ---------------------------------------------------------------------------

S10Result s10(std::int64_t N, std::int64_t c_times_l, std::int64_t n2_lo,
              std::int64_t n2_hi, std::int64_t n1_lo, std::int64_t n1_hi,
              bool unit_weight, int workers) {
  if (c_times_l == 0) throw ConfigError("s10: c*l must be nonzero");
  if (n1_lo < 2) n1_lo = 2;
  std::vector<std::uint8_t> flags;
  arith::sieve_range(n1_lo, n1_hi + 1, flags);
  std::vector<std::int64_t> primes;
  std::vector<double> weights;
  for (std::int64_t n = n1_lo; n <= n1_hi; ++n)
    if (flags[static_cast<std::size_t>(n - n1_lo)]) {
      primes.push_back(n);
      weights.push_back(unit_weight ? 1.0 : std::log(static_cast<double>(n)));
    }

  S10Result out;
  std::int64_t count = n2_hi - n2_lo + 1;
  if (count <= 0) return out;
  out.per_n2.resize(static_cast<std::size_t>(count));

  deterministic_sum(
      0, count, workers,
      [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) {
          std::int64_t n2 = n2_lo + i;
          std::uint64_t r = umod(c_times_l, n2);
          Kahan re, im;
          for (std::size_t j = 0; j < primes.size(); ++j) {
            std::int64_t n1 = primes[j];
            if (n2 % n1 == 0) continue;  // the only non-coprime case for prime n1
            std::int64_t inv = arith::mod_inverse(checked_mod(n1, n2), n2);
            double ang =
                2.0 * kPi *
                static_cast<double>(arith::mulmod(r, static_cast<std::uint64_t>(inv),
                                                  static_cast<std::uint64_t>(n2))) /
                static_cast<double>(n2);
            re.add(weights[j] * std::cos(ang));
            im.add(weights[j] * std::sin(ang));
          }
          out.per_n2[static_cast<std::size_t>(i)] = {
              n2, std::abs(std::complex<double>(re.value(), im.value()))};
        }
        return 0.0;
      },
      /*chunk=*/32);

  Kahan agg;
  for (auto& [n2, mag] : out.per_n2) agg.add(mag);
  out.aggregate = agg.value();
  out.exponent = (out.aggregate > 0 && N > 1)
                     ? std::log(out.aggregate) / std::log(static_cast<double>(N))
                     : 0.0;
  return out;
}

S10Result s10(std::int64_t N, std::int64_t c_times_l, bool unit_weight, int workers) {
  return s10(N, c_times_l, N + 1, 2 * N, N + 1, 2 * N, unit_weight, workers);
}

// ---------------------------------------------------------------------------
// windows
// ---------------------------------------------------------------------------

Window admissible_window(const InstanceParams& p) {
  using arith::Rational64;
  if (compare(p.tau, Rational64{8, 23}) >= 0)
    throw AdmissibilityError("tau = " + p.tau.str() +
                             " >= 8/23: the Type II N-window is empty");
  Window w;
  double q = static_cast<double>(p.q);
  w.n_low = std::max(p.z, q / std::pow(p.z, 1.0 - p.delta));
  w.n_high = std::pow(p.z, 16.0 / 15.0 - p.delta);
  if (w.n_low > w.n_high)
    throw AdmissibilityError("empty N-window: max(z, q/z^(1-delta)) = " +
                             std::to_string(w.n_low) + " > z^(16/15-delta) = " +
                             std::to_string(w.n_high));
  return w;
}

TruncationRanges truncation_ranges(double eta, std::int64_t N, std::int64_t M,
                                   const InstanceParams& p) {
  if (eta < 0) throw ConfigError("truncation_ranges: eta must be >= 0");
  TruncationRanges out;
  double q = static_cast<double>(p.q);
  out.l_max = 8.0 * static_cast<double>(N) * p.z / q;
  out.k_max = q * std::pow(p.z, eta) / static_cast<double>(M);
  out.j_max = static_cast<double>(N) * std::pow(p.z, -1.0 + 2.0 * eta);
  return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> coprime_prime_pairs(std::int64_t N,
                                                                       int count,
                                                                       Rng& rng) {
  std::vector<std::uint8_t> flags;
  arith::sieve_range(N + 1, 2 * N + 1, flags);
  std::vector<std::int64_t> primes;
  for (std::int64_t n = N + 1; n <= 2 * N; ++n)
    if (flags[static_cast<std::size_t>(n - N - 1)]) primes.push_back(n);
  if (primes.size() < 2)
    throw ComputeError("coprime_prime_pairs: fewer than two primes in (N, 2N]");
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    auto i = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(primes.size()) - 1));
    auto j = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(primes.size()) - 1));
    if (i == j) continue;
    // distinct primes are coprime; keep the assertion literal
    if (std::gcd(primes[i], primes[j]) != 1)
      throw ComputeError("coprimality violated for distinct primes " +
                         std::to_string(primes[i]) + ", " + std::to_string(primes[j]));
    out.emplace_back(primes[i], primes[j]);
  }
  return out;
}

}  // namespace e2kit::sums

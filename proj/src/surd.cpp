#include "e2kit/surd.hpp"

#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>

#include "e2kit/errors.hpp"

namespace e2kit::arith {

Rational64 Rational64::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ConfigError("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational64{num, den};
}

Rational64 Rational64::parse(const std::string& text) {
  if (text.empty()) throw ConfigError("rational: empty string");
  auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      std::int64_t n = std::stoll(text.substr(0, slash));
      std::int64_t d = std::stoll(text.substr(slash + 1));
      return make(n, d);
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) return make(std::stoll(text), 1);
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    std::size_t frac_len = text.size() - dot - 1;
    if (frac_len > 17) throw ConfigError("rational: too many decimal places: " + text);
    std::int64_t n = std::stoll(digits);
    std::int64_t d = 1;
    for (std::size_t i = 0; i < frac_len; ++i) d *= 10;
    return make(n, d);
  } catch (const std::invalid_argument&) {
    throw ConfigError("rational: cannot parse '" + text + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("rational: out of range '" + text + "'");
  }
}

std::string Rational64::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

int compare(const Rational64& a, const Rational64& b) {
  __int128 lhs = static_cast<__int128>(a.num) * b.den;
  __int128 rhs = static_cast<__int128>(b.num) * a.den;
  return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

int sign_surd(const mpz_class& A, const mpz_class& B, const mpz_class& d) {
  int sa = sgn(A), sb = sgn(B);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // opposite signs: compare A^2 with B^2 d
  mpz_class lhs = A * A, rhs = B * B * d;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;  // only possible when d is a square
  // |A| dominates -> sign of A, else sign of B
  return c > 0 ? sa : sb;
}

mpz_class floor_surd(const mpz_class& p, const mpz_class& r, const mpz_class& s,
                     const mpz_class& d) {
  if (sgn(s) == 0) throw std::invalid_argument("floor_surd: s = 0");
  if (sgn(r) < 0) throw std::invalid_argument("floor_surd: r must be >= 0");
  // r sqrt(d) = sqrt(r^2 d) in [sq, sq+1), strictly above sq for non-squares
  mpz_class sq;
  mpz_class scaled = r * r * d;
  mpz_sqrt(sq.get_mpz_t(), scaled.get_mpz_t());
  mpz_class q;
  if (sgn(s) > 0) {
    mpz_class num = p + sq;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), s.get_mpz_t());
  } else {
    mpz_class num = p + sq + 1;
    mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), s.get_mpz_t());
  }
  return q;
}

QuadraticSurd::QuadraticSurd(mpz_class p, mpz_class r, mpz_class s, std::int64_t d)
    : p_(std::move(p)), r_(std::move(r)), s_(std::move(s)), d_(d) {
  if (d_ < 2) throw std::invalid_argument("surd: d must be >= 2");
  mpz_class dz(static_cast<long>(d_)), sq;
  mpz_sqrt(sq.get_mpz_t(), dz.get_mpz_t());
  if (sq * sq == dz) throw std::invalid_argument("surd: d must not be a perfect square");
  if (sgn(s_) < 0) {
    s_ = -s_;
    p_ = -p_;
    r_ = -r_;
  }
  if (sgn(s_) == 0 || sgn(r_) <= 0)
    throw std::invalid_argument("surd: need r > 0 and s != 0");
}

double QuadraticSurd::value() const {
  return (p_.get_d() + r_.get_d() * std::sqrt(static_cast<double>(d_))) / s_.get_d();
}

// ---------------------------------------------------------------------------
// Alpha
// ---------------------------------------------------------------------------

struct Alpha::Impl {
  std::string name;
  std::optional<QuadraticSurd> surd;
  std::vector<std::int64_t> fixed_quotients;            // finite prefix form
  std::function<std::int64_t(std::size_t)> pattern;     // infinite pattern form

  // PQa state for the surd form: alpha_i = (P_i + sqrt(D)) / Q_i
  mutable std::mutex mu;
  mutable std::vector<mpz_class> cache;
  mutable mpz_class P, Q, D;

  mpz_class quotient(std::size_t i) const {
    if (surd) {
      std::lock_guard<std::mutex> lock(mu);
      while (cache.size() <= i) {
        mpz_class a = floor_surd(P, 1, Q, D);
        cache.push_back(a);
        mpz_class Pn = a * Q - P;
        mpz_class Qn = (D - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
      }
      return cache[i];
    }
    if (pattern) return mpz_class(static_cast<long>(pattern(i)));
    if (i < fixed_quotients.size())
      return mpz_class(static_cast<long>(fixed_quotients[i]));
    throw PrecisionError("alpha '" + name + "': partial quotients exhausted at index " +
                         std::to_string(i));
  }
};

Alpha Alpha::surd(QuadraticSurd s, std::string name) {
  Alpha a;
  a.impl_ = std::make_shared<Impl>();
  a.impl_->name = std::move(name);
  // (p + r sqrt(d))/s = (P + sqrt(D))/Q with P = p s, D = r^2 d s^2, Q = s^2,
  // which satisfies the PQa invariant Q | D - P^2
  a.impl_->P = s.p() * s.s();
  a.impl_->D = s.r() * s.r() * s.s() * s.s() * s.d();
  a.impl_->Q = s.s() * s.s();
  a.impl_->surd = std::move(s);
  return a;
}

Alpha Alpha::sqrt2() { return surd(QuadraticSurd(0, 1, 1, 2), "sqrt2"); }

Alpha Alpha::golden() { return surd(QuadraticSurd(1, 1, 2, 5), "phi"); }

Alpha Alpha::euler() {
  Alpha a;
  a.impl_ = std::make_shared<Impl>();
  a.impl_->name = "e";
  // [2; 1,2,1, 1,4,1, 1,6,1, ...]
  a.impl_->pattern = [](std::size_t i) -> std::int64_t {
    if (i == 0) return 2;
    if (i % 3 == 2) return static_cast<std::int64_t>(2 * ((i + 1) / 3));
    return 1;
  };
  return a;
}

Alpha Alpha::from_quotients(std::vector<std::int64_t> quotients, std::string name) {
  if (quotients.empty()) throw ConfigError("alpha: no partial quotients given");
  if (quotients[0] < 1) throw ConfigError("alpha: a0 must be >= 1 (positive irrational)");
  for (std::size_t i = 1; i < quotients.size(); ++i)
    if (quotients[i] < 1) throw ConfigError("alpha: partial quotients must be >= 1");
  Alpha a;
  a.impl_ = std::make_shared<Impl>();
  a.impl_->name = std::move(name);
  a.impl_->fixed_quotients = std::move(quotients);
  return a;
}

const std::string& Alpha::name() const { return impl_->name; }
bool Alpha::has_surd() const { return impl_->surd.has_value(); }
const QuadraticSurd& Alpha::surd_form() const { return *impl_->surd; }
mpz_class Alpha::quotient(std::size_t i) const { return impl_->quotient(i); }

double Alpha::value() const {
  if (has_surd()) return surd_form().value();
  auto iv = enclose(60);
  return iv.lo.get_d();
}

RatInterval Alpha::enclose(int frac_bits) const {
  if (has_surd()) {
    const QuadraticSurd& s = surd_form();
    // scale so that the r/s factor cannot widen the interval past 2^-frac_bits
    int extra = static_cast<int>(mpz_sizeinbase(s.r().get_mpz_t(), 2)) + 2;
    int bits = frac_bits + extra;
    mpz_class scaled = mpz_class(static_cast<long>(s.d())) << (2 * bits);
    mpz_class t;
    mpz_sqrt(t.get_mpz_t(), scaled.get_mpz_t());
    mpz_class pow2 = mpz_class(1) << bits;
    // sqrt(d) in [t, t+1] / 2^bits
    mpq_class lo(s.p() * pow2 + s.r() * t, s.s() * pow2);
    mpq_class hi(s.p() * pow2 + s.r() * (t + 1), s.s() * pow2);
    lo.canonicalize();
    hi.canonicalize();
    return {lo, hi};
  }
  // consecutive convergents bracket alpha, with gap 1/(q_k q_{k+1})
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  mpq_class target = mpq_class(1) / (mpz_class(1) << frac_bits);
  for (std::size_t i = 0;; ++i) {
    mpz_class a = quotient(i);
    mpz_class h2 = a * h1 + h0;
    mpz_class k2 = a * k1 + k0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (i >= 1) {
      mpq_class gap(1, k0 * k1);
      gap.canonicalize();
      if (gap <= target) {
        mpq_class c0(h0, k0), c1(h1, k1);
        c0.canonicalize();
        c1.canonicalize();
        return c0 < c1 ? RatInterval{c0, c1} : RatInterval{c1, c0};
      }
    }
  }
}

std::vector<Convergent> convergents(const Alpha& alpha, int count) {
  std::vector<Convergent> out;
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int i = 0; i < count; ++i) {
    mpz_class a = alpha.quotient(static_cast<std::size_t>(i));
    mpz_class h2 = a * h1 + h0;
    mpz_class k2 = a * k1 + k0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    out.push_back(Convergent{h1, k1, i});
  }
  return out;
}

std::vector<Convergent> convergents_in_range(const Alpha& alpha,
                                             const mpz_class& qmin,
                                             const mpz_class& qmax) {
  std::vector<Convergent> out;
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int i = 0;; ++i) {
    mpz_class a = alpha.quotient(static_cast<std::size_t>(i));
    mpz_class h2 = a * h1 + h0;
    mpz_class k2 = a * k1 + k0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (k1 > qmax) break;
    if (k1 >= qmin) out.push_back(Convergent{h1, k1, i});
  }
  return out;
}

std::vector<Convergent> convergents_of_interval(const RatInterval& iv, int count) {
  if (iv.lo > iv.hi) throw std::invalid_argument("interval: lo > hi");
  std::vector<Convergent> out;
  mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  mpq_class lo = iv.lo, hi = iv.hi;
  for (int i = 0; i < count; ++i) {
    mpz_class fl, fh;
    mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
    mpz_fdiv_q(fh.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
    if (fl != fh)
      throw PrecisionError("interval too wide to determine partial quotient " +
                           std::to_string(i));
    mpz_class a = fl;
    mpz_class h2 = a * h1 + h0;
    mpz_class k2 = a * k1 + k0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    out.push_back(Convergent{h1, k1, i});
    mpq_class fa(a);
    mpq_class lo_rem = lo - fa, hi_rem = hi - fa;
    if (sgn(lo_rem) <= 0)
      throw PrecisionError("interval touches an integer after quotient " +
                           std::to_string(i));
    // x -> 1/(x - a) swaps the endpoints
    mpq_class new_lo = 1 / hi_rem;
    mpq_class new_hi = 1 / lo_rem;
    lo = new_lo;
    hi = new_hi;
  }
  return out;
}

mpq_class nearest_int_distance(const mpq_class& x) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  mpq_class frac = x - mpq_class(fl);
  mpq_class other = 1 - frac;
  return frac <= other ? frac : other;
}

// ---------------------------------------------------------------------------
// ||n*alpha|| <= n^{-tau} certificates
// ---------------------------------------------------------------------------

namespace {

// (u + v*sqrt(d))^e as an integer pair
std::pair<mpz_class, mpz_class> surd_pow(mpz_class u, mpz_class v, const mpz_class& d,
                                         std::int64_t e) {
  mpz_class U = 1, V = 0;
  for (std::int64_t i = 0; i < e; ++i) {
    mpz_class nu = U * u + V * v * d;
    mpz_class nv = U * v + V * u;
    U = nu;
    V = nv;
  }
  return {U, V};
}

}  // namespace

DistanceCheck certify_distance_exact(const QuadraticSurd& alpha, std::int64_t n,
                                     const Rational64& tau) {
  if (n < 1) throw std::invalid_argument("certify_distance: n must be >= 1");
  if (tau.num <= 0) throw std::invalid_argument("certify_distance: tau must be > 0");
  const mpz_class d(static_cast<long>(alpha.d()));
  const mpz_class nz(static_cast<long>(n));
  // n*alpha = (np + nr sqrt(d)) / s
  mpz_class np = nz * alpha.p();
  mpz_class nr = nz * alpha.r();
  const mpz_class& s = alpha.s();

  mpz_class m0 = floor_surd(np, nr, s, d);
  // fractional part vs 1/2: sign of 2(n*alpha - m0) - 1
  mpz_class A = 2 * (np - m0 * s) - s;
  mpz_class B = 2 * nr;
  mpz_class m = sign_surd(A, B, d) > 0 ? m0 + 1 : m0;

  // distance = |(np - m s) + nr sqrt(d)| / s as (u + v sqrt d)/s > 0
  mpz_class u = np - m * s, v = nr;
  if (sign_surd(u, v, d) < 0) {
    u = -u;
    v = -v;
  }

  // ||n a|| <= n^{-tau}  <=>  (u + v sqrt d)^den * n^num <= s^den
  auto [U, V] = surd_pow(u, v, d, tau.den);
  mpz_class npow;
  mpz_pow_ui(npow.get_mpz_t(), nz.get_mpz_t(), static_cast<unsigned long>(tau.num));
  mpz_class spow;
  mpz_pow_ui(spow.get_mpz_t(), s.get_mpz_t(), static_cast<unsigned long>(tau.den));
  int c = sign_surd(U * npow - spow, V * npow, d);

  DistanceCheck out;
  out.certified = c <= 0;
  out.refuted = c > 0;
  out.distance = (u.get_d() + v.get_d() * std::sqrt(static_cast<double>(alpha.d()))) /
                 s.get_d();
  return out;
}

DistanceCheck certify_distance_interval(const Alpha& alpha, std::int64_t n,
                                        const Rational64& tau, int frac_bits) {
  if (n < 1) throw std::invalid_argument("certify_distance: n must be >= 1");
  RatInterval iv = alpha.enclose(frac_bits);
  mpq_class lo = iv.lo * n, hi = iv.hi * n;
  // nearest integer must be the same at both ends
  mpq_class half(1, 2);
  mpz_class mlo, mhi;
  mpq_class shifted_lo = lo + half, shifted_hi = hi + half;
  mpz_fdiv_q(mlo.get_mpz_t(), shifted_lo.get_num_mpz_t(), shifted_lo.get_den_mpz_t());
  mpz_fdiv_q(mhi.get_mpz_t(), shifted_hi.get_num_mpz_t(), shifted_hi.get_den_mpz_t());
  if (mlo != mhi)
    throw PrecisionError("distance interval: nearest integer undecided at " +
                         std::to_string(frac_bits) + " bits");
  mpq_class dlo = lo - mpq_class(mlo), dhi = hi - mpq_class(mlo);
  // |.| of an interval
  if (sgn(dhi) <= 0) {
    mpq_class t = -dlo;
    dlo = -dhi;
    dhi = t;
  } else if (sgn(dlo) < 0) {
    mpq_class mag = -dlo;
    if (dhi > mag) mag = dhi;
    dlo = 0;
    dhi = mag;
  }

  // compare dist^den * n^num with 1
  auto qpow = [](const mpq_class& b, std::int64_t e) {
    mpq_class r = 1;
    for (std::int64_t i = 0; i < e; ++i) r *= b;
    return r;
  };
  mpz_class npow;
  mpz_class nz(static_cast<long>(n));
  mpz_pow_ui(npow.get_mpz_t(), nz.get_mpz_t(), static_cast<unsigned long>(tau.num));
  mpq_class upper = qpow(dhi, tau.den) * mpq_class(npow);
  mpq_class lower = qpow(dlo, tau.den) * mpq_class(npow);

  DistanceCheck out;
  out.distance = mpq_class((dlo + dhi) / 2).get_d();
  if (upper <= 1) {
    out.certified = true;
  } else if (lower > 1) {
    out.refuted = true;
  } else {
    throw PrecisionError("distance interval: comparison undecided at " +
                         std::to_string(frac_bits) + " bits");
  }
  return out;
}

}  // namespace e2kit::arith

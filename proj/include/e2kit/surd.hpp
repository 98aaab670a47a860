#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

// Exact real-number support for the Diophantine application: quadratic surds
// with integer continued-fraction expansion (PQa), rational-interval
// arithmetic for irrationals that are only known through their partial
// quotients, and exact certification of ||n*alpha|| <= n^{-tau}.

namespace e2kit::arith {

// Reduced rational with den > 0; used for tau so threshold comparisons
// (e.g. tau < 8/23) are exact.
struct Rational64 {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational64 make(std::int64_t num, std::int64_t den);
  // accepts "a/b", integers, and plain decimals ("0.34" -> 17/50)
  static Rational64 parse(const std::string& text);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;

  friend bool operator==(const Rational64&, const Rational64&) = default;
};

// sign of cross-difference a - b, exact
int compare(const Rational64& a, const Rational64& b);

// sign of A + B*sqrt(d), computed exactly (d >= 0, not assumed square-free)
int sign_surd(const mpz_class& A, const mpz_class& B, const mpz_class& d);

// floor((p + r*sqrt(d)) / s) for s != 0, r >= 0, d >= 0 not a perfect square
mpz_class floor_surd(const mpz_class& p, const mpz_class& r, const mpz_class& s,
                     const mpz_class& d);

struct Convergent {
  mpz_class num;
  mpz_class den;
  int index = 0;
};

// (p + r*sqrt(d)) / s with r > 0, s > 0, d >= 2 not a perfect square.
class QuadraticSurd {
 public:
  QuadraticSurd(mpz_class p, mpz_class r, mpz_class s, std::int64_t d);

  const mpz_class& p() const { return p_; }
  const mpz_class& r() const { return r_; }
  const mpz_class& s() const { return s_; }
  std::int64_t d() const { return d_; }
  double value() const;

 private:
  mpz_class p_, r_, s_;
  std::int64_t d_;
};

struct RatInterval {
  mpq_class lo, hi;
  double width() const { return mpq_class(hi - lo).get_d(); }
};

// A positive irrational described exactly: either a quadratic surd or a
// stream of continued-fraction partial quotients.  Copyable; the partial
// quotient cache is shared and thread-safe.
class Alpha {
 public:
  static Alpha sqrt2();
  static Alpha golden();
  static Alpha euler();
  static Alpha surd(QuadraticSurd s, std::string name);
  // finite prefix of partial quotients (a0 >= 1); quotient() throws
  // PrecisionError once the prefix is exhausted
  static Alpha from_quotients(std::vector<std::int64_t> quotients, std::string name);

  const std::string& name() const;
  bool has_surd() const;
  const QuadraticSurd& surd_form() const;  // requires has_surd()

  // i-th partial quotient (i = 0 is the integer part)
  mpz_class quotient(std::size_t i) const;

  // enclosure with width <= 2^-frac_bits
  RatInterval enclose(int frac_bits) const;

  double value() const;

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_;
};

// First `count` continued-fraction convergents of alpha.
std::vector<Convergent> convergents(const Alpha& alpha, int count);

// Convergents whose denominators lie in [qmin, qmax] (ascending).
std::vector<Convergent> convergents_in_range(const Alpha& alpha,
                                             const mpz_class& qmin,
                                             const mpz_class& qmax);

// Continued fraction read off an exact rational interval; throws
// PrecisionError when the interval cannot determine the next quotient.
std::vector<Convergent> convergents_of_interval(const RatInterval& iv, int count);

// exact ||x|| for rationals: min distance from x to an integer
mpq_class nearest_int_distance(const mpq_class& x);

struct DistanceCheck {
  bool certified = false;  // ||n*alpha|| <= n^{-tau} proven
  bool refuted = false;    // strict > proven
  double distance = 0.0;   // approximate ||n*alpha||
};

// Exact integer route for quadratic surds (no rounding anywhere).
DistanceCheck certify_distance_exact(const QuadraticSurd& alpha, std::int64_t n,
                                     const Rational64& tau);

// Interval route at the given precision; throws PrecisionError when the
// comparison cannot be decided at that width.
DistanceCheck certify_distance_interval(const Alpha& alpha, std::int64_t n,
                                        const Rational64& tau, int frac_bits);

}  // namespace e2kit::arith

#include <cmath>
#include <vector>

#include "doctest.h"
#include "e2kit/errors.hpp"
#include "e2kit/surd.hpp"

using namespace e2kit;
using namespace e2kit::arith;

namespace {

void check_convergent(const Convergent& cv, long num, long den) {
  CHECK(cv.num == num);
  CHECK(cv.den == den);
}

// exact check of |alpha - c/q| <= 1/q^2 for alpha = (p + r sqrt(d))/s
bool convergent_quality_surd(const QuadraticSurd& a, const Convergent& cv) {
  // alpha >= c/q - 1/q^2  and  alpha <= c/q + 1/q^2, via sign_surd
  mpz_class q2 = cv.den * cv.den;
  // alpha - (c q - 1)/q^2 = (p q^2 - s(cq - 1) + r q^2 sqrt d) / (s q^2)
  mpz_class lo_num = a.p() * q2 - a.s() * (cv.num * cv.den - 1);
  mpz_class hi_num = a.p() * q2 - a.s() * (cv.num * cv.den + 1);
  mpz_class rq2 = a.r() * q2;
  int lo = sign_surd(lo_num, rq2, a.d());
  int hi = sign_surd(hi_num, rq2, a.d());
  return lo >= 0 && hi <= 0;
}

}  // namespace

TEST_CASE("rational parsing and comparison") {
  Rational64 third = Rational64::parse("1/3");
  CHECK(third.num == 1);
  CHECK(third.den == 3);
  Rational64 d34 = Rational64::parse("0.34");
  CHECK(d34.num == 17);
  CHECK(d34.den == 50);
  CHECK(Rational64::parse("2") == Rational64{2, 1});
  CHECK(Rational64::make(4, -6) == Rational64{-2, 3});
  CHECK_THROWS_AS(Rational64::parse("x"), ConfigError);

  Rational64 threshold{8, 23};
  CHECK(compare(third, threshold) < 0);                      // 1/3 < 8/23
  CHECK(compare(Rational64::parse("0.35"), threshold) > 0);  // 7/20 > 8/23
  CHECK(compare(threshold, threshold) == 0);
}

TEST_CASE("sqrt2 convergents") {
  auto cv = convergents(Alpha::sqrt2(), 4);
  REQUIRE(cv.size() == 4);
  check_convergent(cv[0], 1, 1);
  check_convergent(cv[1], 3, 2);
  check_convergent(cv[2], 7, 5);
  check_convergent(cv[3], 17, 12);
  CHECK(convergents(Alpha::sqrt2(), 0).empty());
}

TEST_CASE("golden ratio convergents") {
  auto cv = convergents(Alpha::golden(), 5);
  REQUIRE(cv.size() == 5);
  check_convergent(cv[0], 1, 1);
  check_convergent(cv[1], 2, 1);
  check_convergent(cv[2], 3, 2);
  check_convergent(cv[3], 5, 3);
  check_convergent(cv[4], 8, 5);
}

TEST_CASE("euler partial quotient pattern") {
  Alpha e = Alpha::euler();
  std::vector<long> expect = {2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8};
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(e.quotient(i) == expect[i]);
}

TEST_CASE("convergent quality |alpha - c/q| <= 1/q^2, exactly") {
  Alpha s2 = Alpha::sqrt2();
  for (const auto& cv : convergents(s2, 25))
    CHECK(convergent_quality_surd(s2.surd_form(), cv));
  Alpha phi = Alpha::golden();
  for (const auto& cv : convergents(phi, 25))
    CHECK(convergent_quality_surd(phi.surd_form(), cv));
  // for the quotient-pattern alpha, check through a tight enclosure
  Alpha e = Alpha::euler();
  RatInterval iv = e.enclose(200);
  for (const auto& cv : convergents(e, 12)) {
    mpq_class c(cv.num, cv.den);
    c.canonicalize();
    mpq_class gap(1, cv.den * cv.den);
    gap.canonicalize();
    CHECK(iv.lo >= c - gap);
    CHECK(iv.hi <= c + gap);
  }
}

TEST_CASE("denominator-range convergent selection") {
  auto cv = convergents_in_range(Alpha::sqrt2(), 1000, 100000);
  REQUIRE(cv.size() == 5);
  CHECK(cv[0].den == 2378);
  CHECK(cv[1].den == 5741);
  CHECK(cv[2].den == 13860);
  CHECK(cv[3].den == 33461);
  CHECK(cv[4].den == 80782);
  // 8119/5741 is the convergent at q = 5741: 8119^2 - 2 * 5741^2 = -1
  CHECK(cv[1].num == 8119);
  CHECK(convergents_in_range(Alpha::sqrt2(), 4000, 5000).empty());
}

TEST_CASE("interval continued fraction") {
  Alpha s2 = Alpha::sqrt2();
  RatInterval iv = s2.enclose(200);
  auto from_interval = convergents_of_interval(iv, 20);
  auto from_surd = convergents(s2, 20);
  for (int i = 0; i < 20; ++i) {
    CHECK(from_interval[static_cast<std::size_t>(i)].num ==
          from_surd[static_cast<std::size_t>(i)].num);
    CHECK(from_interval[static_cast<std::size_t>(i)].den ==
          from_surd[static_cast<std::size_t>(i)].den);
  }
  // too-wide interval cannot decide deep quotients
  RatInterval wide{mpq_class(141, 100), mpq_class(142, 100)};
  CHECK_THROWS_AS(convergents_of_interval(wide, 30), PrecisionError);
}

TEST_CASE("finite quotient prefixes are exhausted politely") {
  Alpha a = Alpha::from_quotients({1, 2, 2}, "stub");
  CHECK(convergents(a, 3).size() == 3);
  CHECK_THROWS_AS(convergents(a, 4), PrecisionError);
}

TEST_CASE("exact rational nearest-integer distance") {
  CHECK(nearest_int_distance(mpq_class(23, 10)) == mpq_class(3, 10));
  CHECK(nearest_int_distance(mpq_class(1, 2)) == mpq_class(1, 2));
  CHECK(nearest_int_distance(mpq_class(-1, 4)) == mpq_class(1, 4));
  CHECK(nearest_int_distance(mpq_class(7)) == 0);
}

TEST_CASE("exact distance certificates for sqrt2") {
  QuadraticSurd s2(0, 1, 1, 2);
  Rational64 third{1, 3};
  // convergent denominators approximate well: ||q sqrt2|| ~ 1/(2.4 q)
  for (std::int64_t n : {2378LL, 5741LL, 13860LL, 33461LL}) {
    DistanceCheck c = certify_distance_exact(s2, n, third);
    CHECK(c.certified);
    CHECK_FALSE(c.refuted);
    CHECK(c.distance <= std::pow(static_cast<double>(n), -1.0 / 3.0));
  }
  // n = 100: ||100 sqrt2|| = 0.4213... > 100^{-1/3} = 0.215
  DistanceCheck bad = certify_distance_exact(s2, 100, third);
  CHECK(bad.refuted);
  CHECK(bad.distance == doctest::Approx(0.42135623730951).epsilon(1e-9));
}

TEST_CASE("interval certificates agree with the exact route") {
  Alpha s2 = Alpha::sqrt2();
  Rational64 third{1, 3};
  for (std::int64_t n = 2; n <= 2000; ++n) {
    DistanceCheck ex = certify_distance_exact(s2.surd_form(), n, third);
    DistanceCheck iv = certify_distance_interval(s2, n, third, 256);
    CHECK(ex.certified == iv.certified);
    CHECK(ex.refuted == iv.refuted);
  }
  // far too little precision cannot even place the nearest integer
  CHECK_THROWS_AS(certify_distance_interval(s2, 1000003, third, 4), PrecisionError);
}

TEST_CASE("golden ratio certificates") {
  QuadraticSurd phi(1, 1, 2, 5);
  Rational64 third{1, 3};
  // Fibonacci(16)=987: ||987 phi|| ~ 1/(sqrt5 * 987) tiny
  DistanceCheck c = certify_distance_exact(phi, 987, third);
  CHECK(c.certified);
  DistanceCheck far = certify_distance_exact(phi, 4, third);
  // 4 phi = 6.472..., distance 0.472 > 4^{-1/3} = 0.63?  no: 0.472 < 0.63
  CHECK(far.certified);
  DistanceCheck far2 = certify_distance_exact(phi, 40, third);
  // 40 phi = 64.72..., distance 0.2787 > 40^{-1/3} = 0.2924?  certified again
  CHECK(far2.certified);
  DistanceCheck far3 = certify_distance_exact(phi, 150, third);
  // 150 phi = 242.705, distance 0.2950 > 150^{-1/3} = 0.1882
  CHECK(far3.refuted);
}

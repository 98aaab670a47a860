#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "e2kit/apps.hpp"
#include "e2kit/arith.hpp"
#include "e2kit/errors.hpp"

using namespace e2kit;
using namespace e2kit::apps;
using arith::Rational64;

namespace {

bool is_palindrome_base(std::int64_t n, std::int64_t b) {
  std::vector<std::int64_t> d;
  while (n > 0) {
    d.push_back(n % b);
    n /= b;
  }
  for (std::size_t i = 0, j = d.size(); i + 1 <= j; ++i, --j)
    if (d[i] != d[j - 1]) return false;
  return true;
}

std::vector<std::int64_t> brute_palindromes(std::int64_t b) {
  // all 3-digit base-b palindromes, by scanning the 3-digit range
  std::vector<std::int64_t> out;
  for (std::int64_t n = b * b; n < b * b * b; ++n)
    if (is_palindrome_base(n, b)) out.push_back(n);
  return out;
}

int omega_oracle(std::int64_t n) {
  int c = 0;
  for (std::int64_t d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      n /= d;
      ++c;
    }
  if (n > 1) ++c;
  return c;
}

}  // namespace

TEST_CASE("palindrome membership grids") {
  auto m10 = palindrome_members(10);
  CHECK(m10.size() == 90);
  CHECK(m10 == brute_palindromes(10));
  CHECK(std::is_sorted(m10.begin(), m10.end()));

  auto m2 = palindrome_members(2);
  CHECK(m2 == std::vector<std::int64_t>{5, 7});  // 101 and 111 in base 2
  CHECK(is_palindrome_base(5, 2));
  CHECK(is_palindrome_base(7, 2));

  for (std::int64_t b = 2; b <= 64; ++b) {
    auto mb = palindrome_members(b);
    CHECK(static_cast<std::int64_t>(mb.size()) == b * (b - 1));
    CHECK(mb == brute_palindromes(b));
    for (std::int64_t n : mb) CHECK(is_palindrome_base(n, b));
  }
  CHECK_THROWS_AS(palindrome_members(1), ConfigError);
}

TEST_CASE("palindrome semiprime counts at desk scale") {
  std::int64_t oracle = 0;
  bool saw_141 = false, saw_323 = false;
  for (std::int64_t n : brute_palindromes(10))
    if (omega_oracle(n) == 2) {
      ++oracle;
      if (n == 141) saw_141 = true;  // 3 * 47
      if (n == 323) saw_323 = true;  // 17 * 19
    }
  CHECK(saw_141);
  CHECK(saw_323);
  PalindromeCount c = palindrome_e2_count(10);
  CHECK(c.count == oracle);
  CHECK(c.density_ratio ==
        doctest::Approx(static_cast<double>(c.count) * std::log(10.0) / 100.0));
  CHECK_THROWS_AS(palindrome_e2_count(2000), CeilingError);  // 8e9 > default ceiling
}

TEST_CASE("the structured-set instance sits inside the palindrome grid") {
  for (std::int64_t b : {10, 50, 100}) {
    InstanceParams p = palindrome_instance(b);
    CHECK(p.q == b * b + 1);
    CHECK(p.a == b);
    std::int64_t n_members = palindrome_subset_check(b);  // throws on any violation
    CHECK(n_members == member_count(p));
    CHECK(n_members > 0);
  }
}

TEST_CASE("diophantine solve basics") {
  arith::Alpha s2 = arith::Alpha::sqrt2();

  // no convergent denominators in [4000, 5000]
  DiophResult empty = dioph_solve(s2, Rational64{1, 3}, 4000, 5000);
  CHECK(empty.solutions.empty());
  CHECK(empty.convergents_used == 0);

  CHECK_THROWS_AS(dioph_solve(s2, Rational64::parse("0.35"), 1000, 2000),
                  AdmissibilityError);
  CHECK_THROWS_AS(dioph_solve(s2, Rational64{8, 23}, 1000, 2000), AdmissibilityError);

  DiophResult res = dioph_solve(s2, Rational64{1, 3}, 1000, 15000);
  CHECK(res.convergents_used == 3);  // q = 2378, 5741, 13860
  CHECK(!res.solutions.empty());
  for (const auto& s : res.solutions) {
    CHECK(arith::is_e2(static_cast<std::uint64_t>(s.n)));
    CHECK(s.distance <= s.bound * (1.0 + 1e-9));
    CHECK(static_cast<std::int64_t>(s.p1) * static_cast<std::int64_t>(s.p2) == s.n);
    // independent exact re-certification
    arith::DistanceCheck chk =
        arith::certify_distance_exact(s2.surd_form(), s.n, Rational64{1, 3});
    CHECK(chk.certified);
  }
  for (std::size_t i = 1; i < res.solutions.size(); ++i)
    CHECK(res.solutions[i - 1].n <= res.solutions[i].n);
}

TEST_CASE("diophantine instances satisfy the window invariants by construction") {
  // x = q^{2/(1+tau)} and z = x/q force z = q^{(1-tau)/(1+tau)} exactly
  for (std::int64_t q : {2378LL, 5741LL}) {
    double t = 1.0 / 3.0;
    double x = std::pow(static_cast<double>(q), 2.0 / (1.0 + t));
    double z = x / static_cast<double>(q);
    InstanceParams p = derive_params(Rational64{1, 3}, q, 1, z, x, 0.02);
    CHECK(p.z * static_cast<double>(p.q) == doctest::Approx(p.x).epsilon(1e-12));
  }
}

TEST_CASE("finite quotient lists exhaust politely inside dioph") {
  arith::Alpha stub = arith::Alpha::from_quotients({1, 2, 2, 2}, "stub");
  // denominators reachable from 4 quotients: 1, 2, 5, 12 < qmin, then the
  // stream ends; requesting more precision raises the documented error
  CHECK_THROWS_AS(dioph_solve(stub, Rational64{1, 3}, 1000, 2000), PrecisionError);
}

TEST_CASE("golden ratio run produces certified solutions") {
  DiophResult res = dioph_solve(arith::Alpha::golden(), Rational64{1, 3}, 1000, 20000);
  for (const auto& s : res.solutions) {
    arith::DistanceCheck chk = arith::certify_distance_interval(
        arith::Alpha::golden(), s.n, Rational64{1, 3}, 256);
    CHECK(chk.certified);
  }
  CHECK(res.convergents_used > 0);
}
